#include "lowtail/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "lowtail/error.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/parallel.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/serialize.hpp"

namespace lowtail {

using nlohmann::json;

namespace {

constexpr double kAngleSlack = 1e-9;

bool strictly_greater(double a, double b) { return a > b + 1e-12 * std::max(1.0, std::abs(b)); }

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

Point uniform_point(const BoxWindow& w, RngStream& rng) {
  Point p(w.dimension());
  for (int a = 0; a < w.dimension(); ++a) p[a] = w.lower(a) + w.side() * rng.uniform();
  return p;
}

std::string radius_name(RadiusKind k) {
  return k.type == RadiusKind::Type::voronoi ? "voronoi" : "knn:k=" + std::to_string(k.k);
}

RadiusKind radius_from_name(const std::string& s) {
  if (s == "voronoi") return RadiusKind::voronoi();
  if (s.rfind("knn:k=", 0) == 0) return RadiusKind::knn(std::stoi(s.substr(6)));
  throw ParameterError("unknown radius kind '" + s + "'");
}

}  // namespace

ExceptionalSet check_weakly_decreasing(const ScoreSpec& spec, const PointConfig& config, const Point& x,
                                       std::size_t bound) {
  const std::vector<std::size_t> idx = all_indices(config.size());
  const std::vector<double> before = score_points(spec, config, idx);
  const PointConfig plus = config.with_point(x);
  const std::vector<double> after = score_points(spec, plus, idx);
  ExceptionalSet out;
  for (std::size_t y = 0; y < idx.size(); ++y) {
    if (strictly_greater(after[y], before[y])) out.exceptional.push_back(y);
  }
  out.pass = out.exceptional.size() <= bound;

  const std::size_t xi = config.size();
  std::vector<std::size_t> allowed;
  if (const auto* knn = std::get_if<KnnPower>(&spec.kind)) {
    allowed = knn_set(plus, xi, knn->k);
  } else if (std::holds_alternative<RngPower>(spec.kind)) {
    allowed = rng_neighbors(plus, xi);
  } else {
    return out;
  }
  std::sort(allowed.begin(), allowed.end());
  out.contained = std::includes(allowed.begin(), allowed.end(), out.exceptional.begin(), out.exceptional.end());
  return out;
}

bool check_increasing(const ScoreSpec& spec, const PointConfig& config, const Point& x) {
  const std::vector<std::size_t> idx = all_indices(config.size());
  const std::vector<double> before = score_points(spec, config, idx);
  const std::vector<double> after = score_points(spec, config.with_point(x), idx);
  for (std::size_t y = 0; y < idx.size(); ++y) {
    if (after[y] < before[y]) return false;
  }
  return true;
}

bool check_R_decreasing(RadiusKind kind, const PointConfig& config, const Point& x) {
  if (config.dimension() != 2) throw ParameterError("stabilization radii are defined for d = 2 only");
  const PointConfig plus = config.with_point(x);
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (stab_radius_at(plus, i, kind) > stab_radius_at(config, i, kind)) return false;
  }
  return true;
}

RBoundedReport check_R_bounded(const ScoreSpec& spec, RadiusKind kind, std::size_t samples, double delta,
                               const std::vector<double>& M_list, RngStream rng, int workers) {
  const auto* vor = std::get_if<VoronoiIntrinsic>(&spec.kind);
  const auto* knn = std::get_if<KnnPower>(&spec.kind);
  const auto* rn = std::get_if<RngPower>(&spec.kind);
  const bool admissible = (vor && vor->j < 2) || (knn && knn->alpha < 2) || (rn && rn->alpha < 2);
  if (!admissible) {
    throw ParameterError("R-boundedness applies to Voronoi v_j with j < 2 and to k-NN or relative "
                         "neighborhood scores with alpha < d");
  }
  if (!(delta > 0) || M_list.empty()) throw ParameterError("need delta > 0 and at least one M");
  const double M_max = *std::max_element(M_list.begin(), M_list.end());
  const BoxWindow window(2 * M_max + 2, 2);
  const auto per_sample = parallel_map(samples, workers, [&](std::size_t s) {
    const PointConfig base = sample_poisson(1.0, window, rng.split(s));
    const Point origin = Point::Zero(2);
    const PointConfig cfg = base.find(origin) ? base : base.with_point(origin);
    const std::size_t o = *cfg.find(origin);
    const double R = stab_radius_at(cfg, o, kind);
    double xi = 0;
    if (R <= M_max) xi = evaluate_score_at(spec, cfg, o);
    return std::make_pair(R, xi);
  });
  RBoundedReport out;
  out.samples = samples;
  for (double M : M_list) {
    RBoundedRow row{M, 0};
    for (const auto& [R, xi] : per_sample) {
      if (R <= M && xi >= delta * M * M) ++row.violations;
    }
    out.rows.push_back(row);
  }
  return out;
}

AngleCheck check_rng_angles(const PointConfig& config) {
  if (config.dimension() != 2) throw ParameterError("the angle check is planar");
  AngleCheck out;
  out.min_angle = std::numbers::pi;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto nb = rng_neighbors(config, i);
    out.max_degree = std::max(out.max_degree, nb.size());
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const Point u = config[nb[a]] - config[i];
        const Point v = config[nb[b]] - config[i];
        const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
        out.min_angle = std::min(out.min_angle, std::acos(c));
      }
    }
  }
  out.pass = out.min_angle >= std::numbers::pi / 3 - kAngleSlack;
  return out;
}

bool replay_witness(const json& w) {
  const std::string check = w.at("check").get<std::string>();
  const PointConfig config = config_from_json(w.at("config"));
  if (check == "weakly_decreasing" || check == "exc_containment") {
    const ScoreSpec spec = parse_score_spec(w.at("spec").get<std::string>());
    const Point x = point_from_json(w.at("x"));
    const auto res = check_weakly_decreasing(spec, config, x, w.at("bound").get<std::size_t>());
    const bool violated = check == "weakly_decreasing" ? !res.pass : !res.contained;
    return violated && json(res.exceptional) == w.at("exceptional");
  }
  if (check == "increasing") {
    const ScoreSpec spec = parse_score_spec(w.at("spec").get<std::string>());
    return !check_increasing(spec, config, point_from_json(w.at("x")));
  }
  if (check == "radius_decreasing") {
    return !check_R_decreasing(radius_from_name(w.at("radius").get<std::string>()), config,
                               point_from_json(w.at("x")));
  }
  if (check == "stabilization") {
    const ScoreSpec spec = parse_score_spec(w.at("spec").get<std::string>());
    return !verify_stabilization(spec, config, point_from_json(w.at("center")), w.at("radius").get<double>());
  }
  if (check == "rng_angles") return !check_rng_angles(config).pass;
  throw ParameterError("unknown witness check '" + check + "'");
}

namespace {

// Outcome of a single trial of one report.
struct TrialResult {
  std::size_t evaluations = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double statistic = 0;
  json witness;
};

using TrialFn = std::function<TrialResult(std::size_t, RngStream)>;

LemmaReport run_report(const std::string& id, std::size_t trials, int workers, RngStream rng,
                       const TrialFn& fn) {
  const auto results = parallel_map(trials, workers, [&](std::size_t t) { return fn(t, rng.split(t)); });
  LemmaReport r;
  r.lemma_id = id;
  r.trials = trials;
  double worst = -1;
  for (const TrialResult& t : results) {
    r.evaluations += t.evaluations;
    r.violations += t.violations;
    r.skipped += t.skipped;
    r.observed_max = std::max(r.observed_max, t.statistic);
    if (t.violations > 0 && t.statistic > worst) {
      worst = t.statistic;
      r.witness = t.witness;
    }
  }
  return r;
}

std::uint64_t id_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

bool wants(const std::string& suite, const char* group) { return suite == "all" || suite == group; }

}  // namespace

std::vector<LemmaReport> run_suite(const SuiteOptions& opt, RngStream rng) {
  static const char* kSuites[] = {"all", "weak-decreasing", "increasing", "radius", "stabilization",
                                  "angles", "r-bounded"};
  if (std::find(std::begin(kSuites), std::end(kSuites), opt.suite) == std::end(kSuites)) {
    throw ParameterError("unknown suite '" + opt.suite + "'");
  }
  if (opt.trials < 1) throw ParameterError("trials must be at least 1");
  const BoxWindow inner(opt.n, 2);
  const BoxWindow outer = inner.grown(opt.margin);
  const auto sample = [&](RngStream r) { return sample_poisson(1.0, outer, r.split(0)); };
  const auto insertion = [&](RngStream r) {
    RngStream s = r.split(1);
    return uniform_point(inner, s);
  };

  std::vector<LemmaReport> reports;
  const auto add = [&](const std::string& id, const TrialFn& fn) {
    reports.push_back(run_report(id, opt.trials, opt.workers, rng.split(id_hash(id)), fn));
  };

  if (wants(opt.suite, "weak-decreasing")) {
    std::vector<std::pair<ScoreSpec, std::size_t>> cases;
    for (int k = 1; k <= 3; ++k) {
      for (KnnMode mode : {KnnMode::undirected, KnnMode::bidirectional}) {
        cases.push_back({ScoreSpec{KnnPower{k, 1.0, mode}, {}}, static_cast<std::size_t>(k)});
      }
    }
    cases.push_back({ScoreSpec{RngPower{1.0}, {}}, 6});
    for (const auto& [spec, bound] : cases) {
      const std::string name = to_string(spec);
      for (const char* check : {"weakly_decreasing", "exc_containment"}) {
        const bool bound_check = std::string(check) == "weakly_decreasing";
        add(std::string(check) + "/" + name, [&, spec = spec, bound = bound, bound_check, check](std::size_t,
                                                                                               RngStream r) {
          TrialResult t;
          const PointConfig cfg = sample(r);
          const Point x = insertion(r);
          t.evaluations = 1;
          try {
            const auto res = check_weakly_decreasing(spec, cfg, x, bound);
            t.statistic = static_cast<double>(res.exceptional.size());
            const bool bad = bound_check ? !res.pass : !res.contained;
            if (bad) {
              t.violations = 1;
              t.witness = json{{"check", check},          {"spec", to_string(spec)}, {"bound", bound},
                               {"config", cfg},           {"x", json(x)},
                               {"exceptional", res.exceptional}};
            }
          } catch (const UnstabilizedError&) {
            t.skipped = 1;
          }
          return t;
        });
      }
    }
  }

  if (wants(opt.suite, "increasing")) {
    for (const ScoreSpec& spec : {ScoreSpec{CliqueCount{3, 1.0}, {}}, ScoreSpec{PowerEdgeRGG{1.0, 1.0}, {}}}) {
      add("increasing/" + to_string(spec), [&, spec](std::size_t, RngStream r) {
        TrialResult t;
        const PointConfig cfg = sample(r);
        const Point x = insertion(r);
        t.evaluations = 1;
        if (!check_increasing(spec, cfg, x)) {
          t.violations = 1;
          t.witness = json{{"check", "increasing"}, {"spec", to_string(spec)}, {"config", cfg}, {"x", json(x)}};
        }
        return t;
      });
    }
  }

  if (wants(opt.suite, "radius")) {
    for (RadiusKind kind : {RadiusKind::voronoi(), RadiusKind::knn(2)}) {
      add("radius_decreasing/" + radius_name(kind), [&, kind](std::size_t, RngStream r) {
        TrialResult t;
        const PointConfig cfg = sample(r);
        const Point x = insertion(r);
        t.evaluations = 1;
        if (!check_R_decreasing(kind, cfg, x)) {
          t.violations = 1;
          t.witness = json{{"check", "radius_decreasing"}, {"radius", radius_name(kind)}, {"config", cfg},
                           {"x", json(x)}};
        }
        return t;
      });
    }
  }

  if (wants(opt.suite, "stabilization")) {
    const std::vector<std::pair<ScoreSpec, RadiusKind>> pairs = {
        {ScoreSpec{VoronoiIntrinsic{1}, {}}, RadiusKind::voronoi()},
        {ScoreSpec{VoronoiIntrinsic{2}, {}}, RadiusKind::voronoi()},
        {ScoreSpec{KnnPower{2, 1.0, KnnMode::undirected}, {}}, RadiusKind::knn(2)},
        {ScoreSpec{KnnPower{2, 1.0, KnnMode::bidirectional}, {}}, RadiusKind::knn(2)},
        {ScoreSpec{RngPower{1.0}, {}}, RadiusKind::voronoi()},
    };
    for (const auto& [spec, kind] : pairs) {
      add("stabilization/" + to_string(spec) + "/" + radius_name(kind),
          [&, spec = spec, kind = kind](std::size_t, RngStream r) {
            TrialResult t;
            const PointConfig cfg = sample(r);
            for (std::size_t i : cfg.indices_in(inner)) {
              ++t.evaluations;
              const double R = stab_radius_at(cfg, i, kind);
              if (!std::isfinite(R)) {
                ++t.skipped;
                continue;
              }
              t.statistic = std::max(t.statistic, R);
              if (!verify_stabilization(spec, cfg, cfg[i], R)) {
                ++t.violations;
                t.witness = json{{"check", "stabilization"}, {"spec", to_string(spec)}, {"config", cfg},
                                 {"center", json(cfg[i])}, {"radius", R}};
              }
            }
            return t;
          });
    }
  }

  if (wants(opt.suite, "angles")) {
    add("rng_angles", [&](std::size_t, RngStream r) {
      TrialResult t;
      const PointConfig cfg = sample(r);
      const AngleCheck a = check_rng_angles(cfg);
      t.evaluations = 1;
      t.statistic = static_cast<double>(a.max_degree);
      if (!a.pass) {
        t.violations = 1;
        t.witness = json{{"check", "rng_angles"}, {"config", cfg}, {"min_angle", a.min_angle}};
      }
      return t;
    });
  }

  if (wants(opt.suite, "r-bounded")) {
    // v1 <= pi R, so R <= M forces v1 < delta M^2 once M > pi / delta.
    const double delta = 0.5;
    const RBoundedReport rb = check_R_bounded(ScoreSpec{VoronoiIntrinsic{1}, {}}, RadiusKind::voronoi(),
                                              opt.trials, delta, {7.0, 10.0}, rng.split(id_hash("r-bounded")),
                                              opt.workers);
    LemmaReport r;
    r.lemma_id = "r_bounded/voronoi:j=1/delta=0.5";
    r.trials = rb.samples;
    r.evaluations = rb.samples * rb.rows.size();
    for (const RBoundedRow& row : rb.rows) r.violations += row.violations;
    reports.push_back(std::move(r));
  }
  return reports;
}

bool suite_passes(const std::vector<LemmaReport>& reports) {
  for (const LemmaReport& r : reports) {
    if (!r.pass()) return false;
    if (static_cast<double>(r.skipped) > 0.01 * static_cast<double>(r.evaluations)) return false;
  }
  return true;
}

}  // namespace lowtail
