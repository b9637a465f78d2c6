#include "cli.hpp"

#include <chrono>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "io.hpp"
#include "json.hpp"
#include "parcpt/cost.hpp"
#include "parcpt/dp.hpp"
#include "parcpt/error.hpp"
#include "parcpt/parallel.hpp"

namespace parcpt::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario", "n",           "delta",          "reps",        "seed",
      "methods",  "workers",     "overlap",        "epsilon",     "noise_sd",
      "out",      "proportions", "min_segment_length", "timing_repeats"};
  return keys;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, const char* key, Parse parse) {
  std::vector<T> out;
  for (const std::string& item : split_list(text)) out.push_back(parse(item, key));
  if (out.empty()) throw InvalidConfig(std::string(key) + " must list at least one value");
  return out;
}

double config_double(std::string_view text, std::string_view key) {
  try {
    return parse_double(text, key);
  } catch (const InvalidInput& e) {
    throw InvalidConfig(e.what());
  }
}

Json moments_json(const Moments& m) { return Json{{"mean", m.mean}, {"sd", m.sd}}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Cell {
  Index n = 0;
  double delta = 0.0;
  std::vector<BenchRow> rows;
};

std::vector<MethodSetup> setups_for(const RunConfig& cfg, bool bench) {
  std::vector<MethodSetup> out;
  if (bench) out.push_back({Method::pelt, 1, std::nullopt});
  for (Method m : cfg.methods) {
    if (m == Method::pelt) {
      if (out.empty() || out.front().method != Method::pelt) {
        out.insert(out.begin(), {Method::pelt, 1, std::nullopt});
      }
      continue;
    }
    for (Index w : cfg.workers) out.push_back({m, w, m == Method::chunk ? cfg.overlap : std::nullopt});
  }
  return out;
}

std::vector<Cell> run_sweep(const RunConfig& cfg, bool bench_mode, std::ostream& err) {
  const std::vector<MethodSetup> setups = setups_for(cfg, bench_mode);
  std::vector<Cell> cells;
  for (Index n : cfg.ns) {
    for (const MethodSetup& s : setups) {
      DetectorConfig dc;
      dc.method = s.method;
      dc.workers = s.workers;
      dc.overlap = s.overlap;
      for (const std::string& note : advisories(dc, n)) {
        err << "warning: n=" << n << " " << s.label() << ": " << note << "\n";
      }
    }
    for (double delta : cfg.deltas) {
      BenchOptions opt;
      opt.scenario = make_scenario(cfg.scenario, delta, cfg.noise_sd, cfg.proportions);
      opt.n = n;
      opt.setups = setups;
      opt.reps = cfg.reps;
      opt.seed = cfg.seed;
      opt.epsilon = cfg.epsilon;
      opt.min_segment_length = cfg.min_segment_length;
      opt.timing = bench_mode;
      opt.timing_repeats = cfg.timing_repeats;
      Cell cell{n, delta, bench(opt)};
      for (const BenchRow& row : cell.rows) {
        if (!row.error.empty()) {
          err << "warning: n=" << n << " delta=" << format_double(delta) << " "
              << row.setup.label() << " rep " << row.rep << ": " << row.error << "\n";
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string rows_csv(const std::vector<Cell>& cells) {
  std::ostringstream os;
  os << "n,delta,method,workers,overlap,rep,true_changes,estimated,false_alarms,missed,"
        "detected,avg_location_error,max_location_error,penalized_cost,relative_cost,error\n";
  for (const Cell& c : cells) {
    for (const BenchRow& r : c.rows) {
      const MetricReport& m = r.report;
      os << c.n << ',' << format_double(c.delta) << ',' << to_string(r.setup.method) << ','
         << r.setup.workers << ',' << r.overlap << ',' << r.rep << ',' << r.true_count << ',';
      if (r.error.empty()) {
        os << m.estimated << ',' << m.accuracy.false_alarms << ',' << m.accuracy.missed << ','
           << m.accuracy.detected << ',' << format_double(m.accuracy.avg_location_error()) << ','
           << m.accuracy.max_location_error << ',' << format_double(m.penalised_cost) << ','
           << format_double(m.relative_cost) << ',';
      } else {
        os << ",,,,,,,,";
      }
      os << csv_field(r.error) << '\n';
    }
  }
  return os.str();
}

Json config_json(const RunConfig& cfg, const char* command) {
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  Json j;
  j["command"] = command;
  j["scenario"] = to_string(cfg.scenario);
  j["n"] = cfg.ns;
  j["delta"] = cfg.deltas;
  j["methods"] = methods;
  j["workers"] = cfg.workers;
  j["overlap"] = cfg.overlap ? Json(*cfg.overlap) : Json(nullptr);
  j["proportions"] = make_scenario(cfg.scenario, 1.0, 1.0, cfg.proportions).proportions;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["epsilon"] = cfg.epsilon;
  j["noise_sd"] = cfg.noise_sd;
  j["min_segment_length"] = cfg.min_segment_length;
  return j;
}

std::string summary_json(const RunConfig& cfg, const std::vector<Cell>& cells,
                         const char* command) {
  Json results = Json::array();
  for (const Cell& c : cells) {
    const Index truth = c.rows.empty() ? 0 : c.rows.front().true_count;
    for (const BenchSummary& s : summarize(c.rows)) {
      Json r;
      r["n"] = c.n;
      r["delta"] = c.delta;
      r["method"] = to_string(s.setup.method);
      r["workers"] = s.setup.workers;
      r["overlap"] = s.overlap;
      r["true_changes"] = truth;
      r["reps_ok"] = s.reps_ok;
      r["failures"] = s.failures;
      r["estimated"] = moments_json(s.estimated);
      r["false_alarms"] = moments_json(s.false_alarms);
      r["missed"] = moments_json(s.missed);
      r["detected"] = s.detected;
      r["avg_location_error"] = s.avg_location_error;
      r["max_location_error"] = s.max_location_error;
      r["relative_cost"] = moments_json(s.relative_cost);
      results.push_back(std::move(r));
    }
  }
  Json j;
  j["config"] = config_json(cfg, command);
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::string timing_csv(const std::vector<Cell>& cells) {
  std::ostringstream os;
  os << "n,delta,method,workers,overlap,rep,wall_time_s,speedup\n";
  for (const Cell& c : cells) {
    for (const BenchRow& r : c.rows) {
      if (!r.error.empty()) continue;
      os << c.n << ',' << format_double(c.delta) << ',' << to_string(r.setup.method) << ','
         << r.setup.workers << ',' << r.overlap << ',' << r.rep << ','
         << format_double(r.report.wall_time) << ',' << format_double(r.report.speedup_vs_pelt)
         << '\n';
    }
  }
  return os.str();
}

std::string speedup_csv(const std::vector<Cell>& cells) {
  std::ostringstream os;
  os << "n,delta,method,workers,overlap,reps_ok,speedup_mean,speedup_sd,wall_time_mean_s,"
        "wall_time_sd_s\n";
  for (const Cell& c : cells) {
    for (const BenchSummary& s : summarize(c.rows)) {
      os << c.n << ',' << format_double(c.delta) << ',' << to_string(s.setup.method) << ','
         << s.setup.workers << ',' << s.overlap << ',' << s.reps_ok << ','
         << format_double(s.speedup.mean) << ',' << format_double(s.speedup.sd) << ','
         << format_double(s.wall_time.mean) << ',' << format_double(s.wall_time.sd) << '\n';
    }
  }
  return os.str();
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw InvalidConfig("cannot create output directory '" + dir.string() + "'");
  }
}

struct DetectFlags {
  std::string input;
  std::string method = "pelt";
  Index workers = 1;
  Index overlap = 0;
  double epsilon = 0.05;
  bool header = false;
  Index min_seg = 1;
  bool scale = false;
  std::string candidates;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* overlap_opt = nullptr;
};

int cmd_detect(const DetectFlags& f, std::ostream& out, std::ostream& err) {
  const TimeSeries y = read_csv(f.input, f.header);
  const auto n = static_cast<Index>(y.size());

  DetectorConfig cfg;
  cfg.method = parse_method(f.method);
  cfg.workers = f.workers_opt->count() > 0 ? f.workers
                : cfg.method == Method::pelt ? 1
                                             : default_workers();
  if (f.overlap_opt->count() > 0) cfg.overlap = f.overlap;
  cfg.penalty = PenaltyRule{f.epsilon, y.dim()};
  cfg.min_segment_length = f.min_seg;
  cfg.scale_by_noise = f.scale;
  validate(cfg, n);
  for (const std::string& note : advisories(cfg, n)) err << "warning: " << note << "\n";

  Segmentation result;
  const auto start = std::chrono::steady_clock::now();
  if (!f.candidates.empty()) {
    if (cfg.method != Method::pelt) {
      throw InvalidConfig("--candidates requires --method pelt");
    }
    const CandidateSet cands = read_candidates(f.candidates, n);
    const double beta = resolve_penalty(cfg.penalty, n);
    const PrefixSums prefix = build_prefix(cfg.scale_by_noise ? scale_by_noise(y) : y);
    result = optimal_partition(prefix, cands.indices(), beta, DpOptions{true, cfg.min_segment_length});
  } else {
    result = detect(y, cfg);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  Json j;
  j["n"] = n;
  j["d"] = y.dim();
  j["method"] = to_string(cfg.method);
  j["beta"] = result.beta;
  j["changepoints"] = result.changepoints;
  j["penalized_cost"] = result.penalised_cost;
  j["wall_time_s"] = elapsed.count();
  out << j.dump() << "\n";
  return kOk;
}

struct SweepFlags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_sweep_options(CLI::App& app, SweepFlags& f, bool bench) {
  app.add_option("--config", f.config, "key = value file; flags override its entries");
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--scenario", "scenario id A..E"},
      {"--n", "series lengths, comma separated"},
      {"--delta", "mean gaps, comma separated"},
      {"--reps", "replicates per cell"},
      {"--seed", "64-bit master seed"},
      {"--methods", "subset of pelt,chunk,deal"},
      {"--workers", "worker counts, comma separated"},
      {"--overlap", "Chunk overlap V (default ceil((ln n)^2))"},
      {"--epsilon", "penalty epsilon"},
      {"--noise-sd", "noise standard deviation"},
      {"--proportions", "change proportions in (0,1), comma separated"},
      {"--min-seg", "minimum segment length"},
      {"--out", "output directory"},
  };
  for (const auto& [flag, help] : flags) {
    const std::string key = flag == "--min-seg" ? "min_segment_length" : normalise_key(flag.substr(2));
    f.options.emplace_back(key, app.add_option(flag, f.values[key], help));
  }
  if (bench) {
    f.options.emplace_back("timing_repeats",
                           app.add_option("--timing-repeats", f.values["timing_repeats"],
                                          "timed runs per measurement; the median is kept"));
  }
}

RunConfig resolve_sweep(const SweepFlags& f, bool bench) {
  std::map<std::string, std::string> values;
  if (!f.config.empty()) {
    try {
      values = read_key_values(f.config);
    } catch (const InvalidInput& e) {
      throw InvalidConfig(e.what());
    }
  }
  for (const auto& [key, opt] : f.options) {
    if (opt->count() > 0) values[key] = f.values.at(key);
  }
  return make_run_config(values, bench);
}

int cmd_simulate(const SweepFlags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_sweep(f, false);
  prepare_out_dir(cfg.out);
  const std::vector<Cell> cells = run_sweep(cfg, false, err);
  const auto csv_path = cfg.out / "simulate.csv";
  const auto json_path = cfg.out / "simulate_summary.json";
  write_file(csv_path, rows_csv(cells));
  write_file(json_path, summary_json(cfg, cells, "simulate"));
  out << csv_path.string() << "\n" << json_path.string() << "\n";
  return kOk;
}

int cmd_bench(const SweepFlags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_sweep(f, true);
  prepare_out_dir(cfg.out);
  err << "info: hardware threads " << std::thread::hardware_concurrency() << ", thread cap "
      << thread_cap() << "\n";
  const std::vector<Cell> cells = run_sweep(cfg, true, err);
  const std::vector<std::filesystem::path> paths = {
      cfg.out / "bench.csv", cfg.out / "bench_summary.json", cfg.out / "bench_timing.csv",
      cfg.out / "bench_speedup.csv"};
  write_file(paths[0], rows_csv(cells));
  write_file(paths[1], summary_json(cfg, cells, "bench"));
  write_file(paths[2], timing_csv(cells));
  write_file(paths[3], speedup_csv(cells));
  for (const auto& p : paths) out << p.string() << "\n";
  return kOk;
}

}  // namespace

RunConfig make_run_config(const std::map<std::string, std::string>& values, bool bench) {
  for (const auto& [key, value] : values) {
    if (known_keys().count(key) == 0) throw InvalidConfig("unknown setting '" + key + "'");
  }
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  const auto require = [&](const char* key) -> const std::string& {
    const std::string* v = get(key);
    if (v == nullptr) throw InvalidConfig(std::string("missing required setting '") + key + "'");
    return *v;
  };

  RunConfig cfg;
  cfg.scenario = parse_scenario(require("scenario"));
  cfg.ns = parse_list<Index>(require("n"), "n", parse_index);
  cfg.deltas = parse_list<double>(require("delta"), "delta", config_double);
  cfg.methods = bench ? std::vector<Method>{Method::chunk, Method::deal}
                      : std::vector<Method>{Method::pelt, Method::chunk, Method::deal};
  if (const auto* v = get("methods")) {
    cfg.methods.clear();
    for (const std::string& m : split_list(*v)) cfg.methods.push_back(parse_method(m));
    if (cfg.methods.empty()) throw InvalidConfig("methods must list at least one value");
  }
  cfg.workers = bench ? std::vector<Index>{1, 2, 4, 8} : std::vector<Index>{4};
  if (const auto* v = get("workers")) cfg.workers = parse_list<Index>(*v, "workers", parse_index);
  if (const auto* v = get("overlap")) cfg.overlap = parse_index(*v, "overlap");
  if (const auto* v = get("proportions")) {
    cfg.proportions = parse_list<double>(*v, "proportions", config_double);
  }
  if (const auto* v = get("reps")) cfg.reps = parse_index(*v, "reps");
  if (const auto* v = get("seed")) cfg.seed = parse_u64(*v, "seed");
  if (const auto* v = get("epsilon")) cfg.epsilon = config_double(*v, "epsilon");
  if (const auto* v = get("noise_sd")) cfg.noise_sd = config_double(*v, "noise_sd");
  if (const auto* v = get("min_segment_length")) {
    cfg.min_segment_length = parse_index(*v, "min_segment_length");
  }
  if (const auto* v = get("timing_repeats")) {
    cfg.timing_repeats = static_cast<int>(parse_index(*v, "timing_repeats"));
  }
  if (const auto* v = get("out")) cfg.out = *v;

  for (Index n : cfg.ns) {
    if (n < 2) throw InvalidConfig("n must be at least 2");
  }
  for (double d : cfg.deltas) {
    if (!(d >= 0.0)) throw InvalidConfig("delta must be non-negative");
  }
  for (Index w : cfg.workers) {
    if (w < 1) throw InvalidConfig("workers must be at least 1");
  }
  if (cfg.overlap && *cfg.overlap < 0) throw InvalidConfig("overlap must be non-negative");
  if (cfg.reps < 1) throw InvalidConfig("reps must be at least 1");
  if (!(cfg.epsilon >= 0.0)) throw InvalidConfig("epsilon must be non-negative");
  if (!(cfg.noise_sd >= 0.0)) throw InvalidConfig("noise_sd must be non-negative");
  if (cfg.min_segment_length < 1) throw InvalidConfig("min_segment_length must be at least 1");
  if (cfg.timing_repeats < 1) throw InvalidConfig("timing_repeats must be at least 1");
  make_scenario(cfg.scenario, 1.0, cfg.noise_sd, cfg.proportions);
  for (Index n : cfg.ns) true_changepoints(make_scenario(cfg.scenario, 1.0, 1.0, cfg.proportions), n);
  return cfg;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penalised-cost changepoint detection with split/merge parallelism", "parcpt"};
  app.require_subcommand(1);

  DetectFlags detect_flags;
  CLI::App* detect_cmd = app.add_subcommand("detect", "Segment a CSV series");
  detect_cmd->add_option("--input", detect_flags.input, "CSV file, one row per observation")
      ->required();
  detect_cmd->add_option("--method", detect_flags.method, "pelt, chunk or deal")
      ->capture_default_str();
  detect_flags.workers_opt =
      detect_cmd->add_option("--workers", detect_flags.workers, "split-phase workers L");
  detect_flags.overlap_opt =
      detect_cmd->add_option("--overlap", detect_flags.overlap, "Chunk overlap V");
  detect_cmd->add_option("--epsilon", detect_flags.epsilon, "penalty epsilon")
      ->capture_default_str();
  detect_cmd->add_flag("--header", detect_flags.header, "skip the first non-blank row");
  detect_cmd->add_option("--min-seg", detect_flags.min_seg, "minimum segment length")
      ->capture_default_str();
  detect_cmd->add_flag("--scale-noise", detect_flags.scale,
                       "divide each column by a robust noise estimate first");
  detect_cmd->add_option("--candidates", detect_flags.candidates,
                         "restrict changepoints to the indices in this file (pelt only)");

  SweepFlags simulate_flags;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo accuracy study");
  add_sweep_options(*simulate_cmd, simulate_flags, false);

  SweepFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Timed speedup study against serial PELT");
  add_sweep_options(*bench_cmd, bench_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (detect_cmd->parsed()) return cmd_detect(detect_flags, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_flags, out, err);
    return cmd_bench(bench_flags, out, err);
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidConfig& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace parcpt::cli
