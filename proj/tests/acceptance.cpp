// Acceptance run: one line per criterion, "PASS" or "FAIL" with the measured
// values. `acceptance N` runs criterion N only; exit status 0 iff all pass.

#include <boost/math/distributions/poisson.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lowtail/cli.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/error.hpp"
#include "lowtail/lemmas.hpp"
#include "lowtail/parallel.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/sprinkling.hpp"
#include "lowtail/tails.hpp"
#include "test_util.hpp"

using namespace lowtail;

namespace {

// Tolerances.
constexpr double kSignificance = 1e-3;
constexpr double kSigmas = 3;
constexpr double kMeckeRel = 0.01;
constexpr double kVoronoiRel = 0.02;
constexpr double kEntropyAbs = 1e-10;
constexpr double kLambdaStarRel = 0.01;
constexpr double kBoundRel = 0.02;
constexpr double kExactTailRel = 0.005;
constexpr double kRateVariation = 0.5;
constexpr double kRateSlack = 1.5;
constexpr double kMinExpectedHits = 30;

constexpr double kPiHalf = std::numbers::pi / 2;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int workers() { return resolve_workers(0); }

Outcome sampling_exactness() {
  Outcome o;
  const RngStream root(1001, 0);
  const auto counts = parallel_map(10000, workers(), [&](std::size_t t) {
    return static_cast<long>(sample_poisson(1, BoxWindow(10, 2), root.split(t)).size());
  });
  const double p = testutil::poisson_chi_square_p(counts, 100);
  o.check(p > kSignificance, fmt("Poisson count chi-square on Q_10, 10^4 draws: p = %.4f (> %.0e)", p, kSignificance));

  const PointConfig empty(BoxWindow(2, 2));
  const RngStream vroot(1002, 0);
  const auto voids = parallel_map(10000, workers(), [&](std::size_t t) {
    return static_cast<int>(couple_eps(empty, 0.1, vroot.split(t)).sprinkle.empty());
  });
  double hits = 0;
  for (int v : voids) hits += v;
  const double est = hits / 10000, target = std::exp(-0.4);
  const double sigma = std::sqrt(target * (1 - target) / 10000);
  o.check(std::abs(est - target) <= kSigmas * sigma,
          fmt("void probability eps=0.1 on Q_2: %.4f vs %.4f (|diff| <= %.4f)", est, target, kSigmas * sigma));
  return o;
}

Outcome mecke() {
  Outcome o;
  PalmOptions opt;
  opt.workers = workers();
  const PalmEstimate e = palm_mean_mc(parse_score_spec("rgg:alpha=0,t=1"), 1, 3, 10000, RngStream(1003, 0), opt);
  o.check(std::abs(e.mean - kPiHalf) <= kMeckeRel * kPiHalf,
          fmt("edge Palm mean: %.5f +- %.5f vs pi/2 = %.5f (within %.0f%%), flagged %zu of %zu", e.mean, e.std_error,
              kPiHalf, 100 * kMeckeRel, e.flagged_points, e.evaluated_points));
  return o;
}

Outcome voronoi_tessellation() {
  Outcome o;
  PalmOptions opt;
  opt.workers = workers();
  const PalmEstimate e = palm_mean_mc(parse_score_spec("voronoi:j=2"), 1, 9, 2000, RngStream(1004, 0), opt);
  o.check(std::abs(e.mean - 1) <= kVoronoiRel,
          fmt("Voronoi area per unit volume: %.5f +- %.5f vs 1 (within %.0f%%), margin 9, flagged %zu of %zu", e.mean,
              e.std_error, 100 * kVoronoiRel, e.flagged_points, e.evaluated_points));
  return o;
}

Outcome entropy_closed_form() {
  Outcome o;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const boost::math::poisson_distribution<> pois(lambda);
    double e = 0;
    for (int n = 0; n < 200; ++n) e += boost::math::pdf(pois, n) * ((1 - lambda) + n * std::log(lambda));
    const double diff = std::abs(e - h_poisson(lambda));
    o.check(diff <= kEntropyAbs, fmt("h(%.1f) = %.12f, likelihood-ratio oracle %.12f, |diff| = %.1e", lambda,
                                     h_poisson(lambda), e, diff));
  }
  RateBoundOptions opt;
  opt.palm.workers = workers();
  const EntropyBound b = rate_upper_bound(parse_score_spec("rgg:alpha=0,t=1"), std::numbers::pi / 4, 0.3, 1.5, 10000,
                                          RngStream(1005, 0), opt);
  const double star = std::sqrt(0.5), bound = h_poisson(star);
  o.check(std::abs(b.lambda_star - star) <= kLambdaStarRel * star,
          fmt("lambda* = %.5f vs %.5f (within %.0f%%), method %s", b.lambda_star, star, 100 * kLambdaStarRel,
              b.method.c_str()));
  o.check(std::abs(b.bound - bound) <= kBoundRel * bound,
          fmt("bound = %.6f +- %.6f vs %.6f (within %.0f%%)", b.bound, b.bound_error, bound, 100 * kBoundRel));
  return o;
}

Outcome exact_small_tail() {
  Outcome o;
  TailOptions opt;
  opt.workers = workers();
  const TailEstimate e =
      estimate_tail(parse_score_spec("rgg:alpha=0,t=3;range=3"), 1, 1, 0, 100000, RngStream(1006, 0), true, opt);
  const double p = 2 / std::numbers::e;
  o.check(std::abs(e.p_hat - p) <= kExactTailRel * p,
          fmt("P(H_1 < 1) = %.5f [%.5f, %.5f] vs 2/e = %.5f (within %.1f%%)", e.p_hat, e.ci_lo, e.ci_hi, p,
              100 * kExactTailRel));
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  SuiteOptions opt;
  opt.trials = 1000;
  opt.n = 10;
  opt.margin = 3;
  opt.workers = workers();
  const auto reports = run_suite(opt, RngStream(1007, 0));
  for (const LemmaReport& r : reports) {
    const bool skips_ok = static_cast<double>(r.skipped) <= 0.01 * static_cast<double>(r.evaluations);
    o.check(r.pass() && skips_ok, fmt("%-52s violations %zu/%zu, skipped %zu/%zu, max %.3g", r.lemma_id.c_str(),
                                      r.violations, r.trials, r.skipped, r.evaluations, r.observed_max));
  }
  return o;
}

Outcome dense_removal_bound() {
  Outcome o;
  const BoxWindow scoring(6, 2);
  const RngStream root(1008, 0);
  constexpr std::size_t kInner = 10000;
  std::size_t checks = 0, failures = 0;
  double worst_margin = INFINITY;
  for (std::uint64_t c = 0; c < 20; ++c) {
    const PointConfig base = sample_poisson(1, scoring.grown(1), root.split(c).split(0));
    for (double eps : {0.05, 0.1}) {
      for (double b : {5.0, 10.0}) {
        const std::size_t dense = count_b_dense(base, scoring, 1, b);
        const RngStream inner = root.split(c).split(1 + static_cast<std::uint64_t>(eps * 100 + b));
        const auto hits = parallel_map(kInner, workers(), [&](std::size_t t) {
          return static_cast<int>(event_E_bn(couple_eps(base, eps, inner.split(t)), scoring, 1, b));
        });
        double h = 0;
        for (int v : hits) h += v;
        const double p = h / kInner;
        const double se = std::sqrt(p * (1 - p) / kInner);
        const double bound = std::exp(-eps * 36 + static_cast<double>(dense) * std::log(eps));
        ++checks;
        const double margin = (p + kSigmas * se - bound) / std::max(se, 1e-12);
        worst_margin = std::min(worst_margin, margin);
        if (!(p >= bound - kSigmas * se)) {
          ++failures;
          o.lines.push_back(fmt("     config %zu eps %.2f b %.0f: P = %.5f, bound %.5f, se %.5f, N = %zu",
                                static_cast<std::size_t>(c), eps, b, p, bound, se, dense));
        }
      }
    }
  }
  o.check(failures == 0, fmt("P(E_bn | X) >= exp(-eps n^2 + N log eps) - 3 se: %zu of %zu checks hold "
                             "(smallest slack %.2f se)",
                             checks - failures, checks, worst_margin));
  return o;
}

Outcome regularity() {
  Outcome o;
  const BoxWindow window(10, 2);
  const double M = 6, L = 12;
  const RngStream root(1009, 0);
  const auto res = parallel_map(1000, workers(), [&](std::size_t t) {
    const CouplingSample s = couple_M_conditioned_on_A(window, M, L, root.split(t));
    const int a = event_A(s.sprinkle, window, M, L);
    const int e = a && event_E_M_plus(s, window, M, RadiusKind::voronoi());
    return std::make_pair(a, e);
  });
  std::size_t with_a = 0, regular = 0;
  for (const auto& [a, e] : res) {
    with_a += static_cast<std::size_t>(a);
    regular += static_cast<std::size_t>(e);
  }
  o.check(with_a == 1000 && regular == with_a,
          fmt("L = 12, M = 6, n = 10: event A in %zu of 1000 trials, E^{M,+} in %zu of those", with_a, regular));
  return o;
}

Outcome rate_coherence() {
  Outcome o;
  const ScoreSpec spec = parse_score_spec("rgg:alpha=0,t=1");
  const double a = 0.5 * kPiHalf;
  RateCurveOptions opt;
  opt.tail.workers = workers();
  opt.target_hits = 4000;
  opt.min_expected_hits = kMinExpectedHits;
  const auto curve = rate_curve(spec, a, {4, 6, 8}, 3, 100000, RngStream(1010, 0), opt);
  bool positive = true;
  for (const TailEstimate& e : curve) {
    const double r = e.empirical_rate.value_or(0);
    positive = positive && r > 0;
    o.lines.push_back(fmt("     n = %.0f: %zu hits in %zu trials, rate %.5f", e.n, e.hits, e.trials, r));
    o.check(static_cast<double>(e.hits) >= kMinExpectedHits, fmt("n = %.0f has at least %.0f hits", e.n, kMinExpectedHits));
  }
  o.check(positive, "all rates positive");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double r0 = *curve[i].empirical_rate, r1 = *curve[i + 1].empirical_rate;
    const double v = std::abs(r1 - r0) / r0;
    o.check(v < kRateVariation, fmt("rate variation n = %.0f -> %.0f: %.1f%% (< %.0f%%)", curve[i].n,
                                    curve[i + 1].n, 100 * v, 100 * kRateVariation));
  }
  RateBoundOptions bo;
  bo.palm.workers = workers();
  const EntropyBound b = rate_upper_bound(spec, a, 0.3, 1.5, 10000, RngStream(1011, 0), bo);
  const double last = *curve.back().empirical_rate;
  o.check(last <= kRateSlack * b.bound,
          fmt("n = 8 rate %.5f <= 1.5 x entropy bound %.5f = %.5f (closed form %.5f)", last, b.bound,
              kRateSlack * b.bound, h_poisson(std::sqrt(0.5))));
  return o;
}

struct CliRun {
  int code;
  std::string out;
  std::string files;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

CliRun run_cli(std::vector<std::string> args, const std::vector<std::string>& artifacts) {
  args.insert(args.begin(), "lowtail");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r{main_entry(static_cast<int>(argv.size()), argv.data(), out, err), out.str(), ""};
  for (const auto& f : artifacts) r.files += slurp(f) + '\x1f';
  return r;
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "lowtail_acceptance";
  std::filesystem::create_directories(dir);
  const std::string cfg = (dir / "cfg.json").string();
  {
    std::vector<std::string> args = {"lowtail", "sample", "--n", "6", "--seed", "4", "--out", cfg};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  struct Cmd {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> artifacts;
  };
  const std::string prefix = (dir / "fig").string();
  const std::string csv = (dir / "curve.csv").string();
  const std::vector<Cmd> cmds = {
      {"sample", {"sample", "--n", "8", "--seed", "3"}, {}},
      {"score", {"score", "--spec", "knn:k=2,alpha=1", "--n", "6", "--seed", "3"}, {}},
      {"score --input", {"score", "--spec", "voronoi:j=2", "--n", "4", "--input", cfg}, {}},
      {"tail", {"tail", "--spec", "rgg:alpha=0,t=1", "--n", "6", "--a", "1.18", "--trials", "2000", "--seed", "7"}, {}},
      {"rate-curve",
       {"rate-curve", "--spec", "rgg:alpha=0,t=1", "--a", "1.18", "--n-list", "3,4", "--trials", "2000", "--seed", "7",
        "--csv", csv},
       {csv}},
      {"rate-bound",
       {"rate-bound", "--spec", "rgg:alpha=0,t=1", "--a", "0.785", "--lambda-lo", "0.3", "--lambda-hi", "1.5",
        "--trials", "100", "--seed", "7"},
       {}},
      {"verify", {"verify", "--suite", "stabilization", "--trials", "30", "--seed", "1"}, {}},
      {"render",
       {"render", "--spec", "rgg:alpha=0,t=1", "--n", "10", "--conditioned", "0.75", "--seed", "3", "--out", prefix},
       {prefix + "_typical.svg", prefix + "_conditioned.svg"}},
      {"calibrate-L", {"calibrate-L", "--n", "6", "--L-list", "4,12", "--trials", "50", "--seed", "2"}, {}},
  };
  for (const Cmd& c : cmds) {
    std::vector<CliRun> runs;
    for (const char* w : {"1", "1", "2", "8"}) {
      auto args = c.args;
      args.push_back("--workers");
      args.push_back(w);
      runs.push_back(run_cli(args, c.artifacts));
    }
    bool same = runs[0].code == 0;
    for (const CliRun& r : runs) same = same && r.code == runs[0].code && r.out == runs[0].out && r.files == runs[0].files;
    o.check(same, fmt("%-14s identical across two runs and workers 1, 2, 8 (exit %d, %zu bytes)", c.name.c_str(),
                      runs[0].code, runs[0].out.size() + runs[0].files.size()));
  }
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"sampling exactness", sampling_exactness},
      {"Mecke check", mecke},
      {"Voronoi tessellation", voronoi_tessellation},
      {"entropy closed form", entropy_closed_form},
      {"exact small-case tail", exact_small_tail},
      {"lemma suite", lemma_suite},
      {"b-dense removal bound", dense_removal_bound},
      {"regularity calibration", regularity},
      {"rate-curve coherence", rate_coherence},
      {"determinism", determinism},
  };
  std::vector<std::size_t> which;
  if (argc > 1) {
    const long k = std::strtol(argv[1], nullptr, 10);
    if (k < 1 || k > static_cast<long>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
    which.push_back(static_cast<std::size_t>(k - 1));
  } else {
    for (std::size_t i = 0; i < criteria.size(); ++i) which.push_back(i);
  }
  bool all = true;
  for (std::size_t i : which) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    all = all && o.pass;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title);
    for (const std::string& l : o.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
