#include "lowtail/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/error.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/lemmas.hpp"
#include "lowtail/parallel.hpp"
#include "lowtail/render.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/serialize.hpp"
#include "lowtail/sprinkling.hpp"
#include "lowtail/tails.hpp"

namespace lowtail {

using nlohmann::json;

namespace {

const char* const kCommands[] = {"sample",     "score",  "tail",   "rate-curve",
                                 "rate-bound", "verify", "render", "calibrate-L"};

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

RngStream require_seed(const RunConfig& c) {
  if (!c.seed) throw ParameterError("--seed is required for the '" + c.command + "' command");
  return RngStream(*c.seed, 0);
}

double require_a(const RunConfig& c) {
  if (!c.a) throw ParameterError("--a is required for the '" + c.command + "' command");
  return *c.a;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  f << content;
}

// Emits to --out when given, else to `out`.
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
}

PointConfig read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParameterError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
  }
  std::istringstream is(text);
  return read_text(is);
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
  RngStream rng = require_seed(c);
  const BoxWindow window = BoxWindow(c.n, c.dimension).grown(c.margin);
  const PointConfig cfg = sample_poisson(c.intensity, window, rng);
  json j = cfg;
  j["seed"] = *c.seed;
  j["intensity"] = c.intensity;
  emit(c, out, j.dump() + "\n");
  return kExitOk;
}

int cmd_score(const RunConfig& c, std::ostream& out) {
  const ScoreSpec spec = parse_score_spec(c.spec);
  PointConfig cfg = c.input.empty() ? sample_poisson(c.intensity, BoxWindow(c.n, c.dimension).grown(c.margin),
                                                     require_seed(c))
                                    : read_config_file(c.input);
  // A supplied configuration is scored in the cube of side n about its
  // window center, clipped to the window.
  const double side = std::min(c.n, cfg.window().side());
  const ScoredConfig sc = score_all(spec, cfg, BoxWindow(side, cfg.window().center()));
  json scores = json::array();
  for (std::size_t s = 0; s < sc.indices.size(); ++s) {
    scores.push_back(json{{"index", sc.indices[s]}, {"score", sc.scores[s]}, {"flagged", sc.flags[s] != 0}});
  }
  json j{{"spec", to_string(spec)},        {"n", side},
         {"h_n", h_n(sc)},                 {"points", sc.indices.size()},
         {"flagged_points", sc.flagged()}, {"scores", std::move(scores)}};
  if (c.input.empty()) {
    j["seed"] = *c.seed;
    j["margin"] = c.margin;
  } else {
    j["input"] = c.input;
  }
  emit(c, out, j.dump() + "\n");
  return kExitOk;
}

TailOptions tail_options(const RunConfig& c) {
  TailOptions o;
  o.dimension = c.dimension;
  o.workers = c.workers;
  return o;
}

int cmd_tail(const RunConfig& c, std::ostream& out) {
  const ScoreSpec spec = parse_score_spec(c.spec);
  const TailEstimate e =
      estimate_tail(spec, c.n, require_a(c), c.margin, c.trials, require_seed(c), !c.non_strict, tail_options(c));
  emit(c, out, json(e).dump() + "\n");
  return kExitOk;
}

int cmd_rate_curve(const RunConfig& c, std::ostream& out) {
  const ScoreSpec spec = parse_score_spec(c.spec);
  RateCurveOptions o;
  o.tail = tail_options(c);
  o.strict = !c.non_strict;
  o.target_hits = c.target_hits;
  const auto curve = rate_curve(spec, require_a(c), c.n_list, c.margin, c.trials, require_seed(c), o);
  std::string lines;
  std::string csv = tail_csv_header() + "\n";
  for (const TailEstimate& e : curve) {
    lines += json(e).dump() + "\n";
    csv += tail_csv_row(e) + "\n";
  }
  emit(c, out, lines);
  if (!c.csv.empty()) write_file(c.csv, csv);
  return kExitOk;
}

int cmd_rate_bound(const RunConfig& c, std::ostream& out) {
  const ScoreSpec spec = parse_score_spec(c.spec);
  RateBoundOptions o;
  o.margin = c.margin;
  o.palm.dimension = c.dimension;
  o.palm.window_side = c.window_side;
  o.palm.normalized = c.normalized;
  o.palm.workers = c.workers;
  const EntropyBound b =
      rate_upper_bound(spec, require_a(c), c.lambda_lo, c.lambda_hi, c.trials, require_seed(c), o);
  json j = b;
  j["spec"] = to_string(spec);
  j["seed"] = *c.seed;
  j["margin"] = c.margin;
  j["window_side"] = c.window_side;
  j["normalized"] = c.normalized;
  emit(c, out, j.dump() + "\n");
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  SuiteOptions o;
  o.suite = c.suite;
  o.trials = c.trials;
  o.n = c.n;
  o.margin = c.margin;
  o.workers = c.workers;
  const auto reports = run_suite(o, require_seed(c));
  std::string lines;
  for (const LemmaReport& r : reports) lines += json(r).dump() + "\n";
  const bool pass = suite_passes(reports);
  lines += json{{"suite", c.suite}, {"trials", c.trials}, {"seed", *c.seed}, {"pass", pass}}.dump() + "\n";
  emit(c, out, lines);
  return pass ? kExitOk : kExitViolation;
}

int cmd_render(const RunConfig& c, std::ostream& out) {
  if (c.dimension != 2) throw ParameterError("rendering is planar");
  const ScoreSpec spec = parse_score_spec(c.spec);
  const RngStream rng = require_seed(c);
  PalmOptions po;
  po.window_side = c.n;
  po.workers = c.workers;
  const PalmEstimate palm = palm_mean_mc(spec, 1.0, c.margin, c.palm_trials, rng.split(0), po);
  const double a = c.conditioned * palm.mean;
  const BoxWindow frame(c.n, 2);

  const ConditionedSample typical = [&] {
    PointConfig cfg = sample_poisson(1.0, frame.grown(c.margin), rng.split(1).split(0));
    const double h = h_n(score_all(spec, cfg, frame));
    return ConditionedSample{std::move(cfg), h, 1};
  }();
  const ConditionedSample cond = conditional_sample(spec, c.n, a, c.margin, c.max_attempts, rng.split(2));

  const std::string prefix = c.out.empty() ? "render" : c.out;
  const auto title = [&](const char* label, double h) {
    std::ostringstream t;
    t.precision(4);
    t << label << ": H_n = " << h << ", a = " << a << " (" << to_string(spec) << ", n = " << c.n << ")";
    return t.str();
  };
  const std::string typical_path = prefix + "_typical.svg";
  const std::string cond_path = prefix + "_conditioned.svg";
  write_file(typical_path, render_svg(typical.config, frame, display_graph(spec, typical.config),
                                      title("typical", typical.h_value)));
  write_file(cond_path, render_svg(cond.config, frame, display_graph(spec, cond.config),
                                   title("conditioned", cond.h_value)));
  out << json{{"spec", to_string(spec)},
              {"n", c.n},
              {"a", a},
              {"fraction", c.conditioned},
              {"palm_mean", palm},
              {"typical", {{"file", typical_path}, {"h_n", typical.h_value}}},
              {"conditioned", {{"file", cond_path}, {"h_n", cond.h_value}, {"attempts", cond.attempts}}},
              {"seed", *c.seed}}
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_calibrate_L(const RunConfig& c, std::ostream& out) {
  if (c.dimension != 2) throw ParameterError("calibration is planar");
  const RngStream rng = require_seed(c);
  const BoxWindow window(c.n, 2);
  std::string lines;
  for (std::size_t li = 0; li < c.L_list.size(); ++li) {
    const double L = c.L_list[li];
    const auto ok = parallel_map(c.trials, c.workers, [&](std::size_t t) {
      const CouplingSample s = couple_M_conditioned_on_A(window, c.M, L, rng.split(li).split(t));
      return static_cast<int>(event_E_M_plus(s, window, c.M, RadiusKind::voronoi()));
    });
    std::size_t regular = 0;
    for (int v : ok) regular += static_cast<std::size_t>(v);
    lines += json{{"L", L},
                  {"M", c.M},
                  {"n", c.n},
                  {"K0", K0(L, 2)},
                  {"trials", c.trials},
                  {"regular", regular},
                  {"fraction", static_cast<double>(regular) / static_cast<double>(c.trials)},
                  {"seed", *c.seed}}
                 .dump() +
             "\n";
  }
  emit(c, out, lines);
  return kExitOk;
}

}  // namespace

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                            std::ostream& err, int& exit_code) {
  RunConfig c;
  CLI::App app{"Score functionals of Poisson point processes: sampling, tails, rate bounds, checks"};
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1);
  for (const char* name : kCommands) app.add_subcommand(name, std::string("run ") + name);

  app.add_option("--spec", c.spec, "score, e.g. knn:k=2,alpha=1,mode=undirected;cap=5");
  app.add_option("--n", c.n, "side of the scoring window");
  std::optional<double> a;
  app.add_option("--a", a, "level");
  app.add_option("--margin", c.margin, "sampling margin on every side");
  app.add_option("--trials", c.trials, "Monte Carlo trials");
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "random seed (required for stochastic commands)");
  app.add_option("--workers", c.workers, "worker threads, 0 = auto");
  app.add_option("--dimension", c.dimension, "dimension d");
  app.add_option("--intensity", c.intensity, "intensity for sample/score");
  app.add_flag("--non-strict", c.non_strict, "count H_n <= a instead of H_n < a");
  app.add_option("--input", c.input, "configuration file for score");
  app.add_option("--out", c.out, "output file (render: file prefix)");
  app.add_option("--csv", c.csv, "CSV output for rate-curve");
  app.add_option("--suite", c.suite, "verify suite");
  app.add_option("--n-list", c.n_list, "window sides for rate-curve")->delimiter(',');
  app.add_option("--target-hits", c.target_hits, "size rate-curve trials by pilot to this many hits");
  app.add_option("--lambda-lo", c.lambda_lo, "lower intensity bracket");
  app.add_option("--lambda-hi", c.lambda_hi, "upper intensity bracket");
  app.add_option("--window-side", c.window_side, "Palm scoring cube side");
  app.add_flag("--normalized", c.normalized, "probability-normalized Palm mean");
  app.add_option("--conditioned", c.conditioned, "render: level as a fraction of the Palm mean");
  app.add_option("--max-attempts", c.max_attempts, "render: rejection-sampling budget");
  app.add_option("--palm-trials", c.palm_trials, "render: trials for the Palm mean");
  app.add_option("--L-list", c.L_list, "calibrate-L: values of L")->delimiter(',');
  app.add_option("--M", c.M, "calibrate-L: radius level M");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    exit_code = kExitOk;
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    report_error(err, "parameter", e.what());
    exit_code = kExitParameter;
    return std::nullopt;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.a = a;
  c.seed = seed;
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "sample") return cmd_sample(c, out);
    if (c.command == "score") return cmd_score(c, out);
    if (c.command == "tail") return cmd_tail(c, out);
    if (c.command == "rate-curve") return cmd_rate_curve(c, out);
    if (c.command == "rate-bound") return cmd_rate_bound(c, out);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "render") return cmd_render(c, out);
    if (c.command == "calibrate-L") return cmd_calibrate_L(c, out);
    throw ParameterError("unknown command '" + c.command + "'");
  } catch (const ExhaustionError& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}, {"best_h", e.best().h_value},
                {"attempts", e.best().attempts}}
               .dump()
        << '\n';
    return kExitExhaustion;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return kExitParameter;
  } catch (const std::exception& e) {
    report_error(err, "parameter", e.what());
    return kExitParameter;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const auto config = parse_command_line(argc, argv, out, err, code);
  if (!config) return code;
  return run(*config, out, err);
}

}  // namespace lowtail
