// linres: build reservoirs, analyze their controllability, verify the
// x0 = C*s factorization, and run the delayed-recall experiment grids.
//
// Exit codes: 0 success, 1 validation/usage, 2 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linres/controllability.hpp"
#include "linres/encoding.hpp"
#include "linres/errors.hpp"
#include "linres/linalg.hpp"
#include "linres/report.hpp"
#include "linres/rng.hpp"
#include "linres/serialize.hpp"
#include "linres/simulate.hpp"
#include "linres/topology.hpp"
#include "linres/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Resolved once per run; every artifact lands under here.
fs::path default_out_dir() {
  if (const char* env = std::getenv("LINRES_OUT_DIR"); env && *env) {
    return fs::path(env);
  }
  return fs::path(".");
}

struct OutputSink {
  fs::path dir;
  std::vector<linres::OutputFile> written;

  void write(const std::string& name, std::string_view bytes) {
    fs::create_directories(dir);
    linres::write_file(dir / name, bytes);
    written.push_back({name, linres::fnv1a64_hex(bytes)});
    std::printf("wrote %s (%zu bytes)\n", (dir / name).string().c_str(),
                bytes.size());
  }
};

std::vector<linres::TopologyKind> parse_topologies(
    const std::string& csv, std::vector<std::string>& errors) {
  std::vector<linres::TopologyKind> kinds;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    // trim
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    item = item.substr(a, b - a + 1);
    try {
      kinds.push_back(linres::topology_kind_from_string(item));
    } catch (const std::invalid_argument& e) {
      errors.push_back(e.what());
    }
  }
  if (kinds.empty()) {
    errors.push_back("topologies: at least one topology is required");
  }
  return kinds;
}

// Shared experiment-config keys. Collects problems instead of throwing so
// a bad config reports everything wrong with it in one pass.
struct ParsedExperiment {
  linres::ExperimentConfig cfg;
  std::vector<linres::TopologyKind> topologies;
  std::vector<std::string> errors;
};

ParsedExperiment parse_experiment_config(const linres::KeyValueConfig& kv,
                                         bool want_taus, bool want_rhos) {
  ParsedExperiment p;
  auto& e = p.errors;
  p.cfg.total_length = kv.get_long("total_length", 1500, e);
  p.cfg.train_split = kv.get_long("train_split", 1000, e);
  p.cfg.washout = kv.get_long("washout", 100, e);
  p.cfg.reservoir_size = static_cast<int>(kv.get_long("n", 100, e));
  p.cfg.realizations = static_cast<int>(kv.get_long("realizations", 10, e));
  p.cfg.master_seed = kv.get_u64("master_seed", 0, e);
  p.cfg.ridge = kv.get_double("ridge", 0.0, e);
  p.cfg.threads = static_cast<int>(kv.get_long("threads", 0, e));
  const std::string rescale = kv.get_string("rescale", "as-distributed", e);
  try {
    p.cfg.rescale_mode = linres::rescale_mode_from_string(rescale);
  } catch (const std::invalid_argument& ex) {
    e.push_back(ex.what());
  }
  if (want_taus) {
    if (kv.has("taus")) {
      p.cfg.taus = kv.get_int_list("taus", e);
    } else {
      e.push_back("taus: required key is missing");
    }
  }
  if (want_rhos) {
    if (kv.has("rhos")) {
      p.cfg.rhos = kv.get_double_list("rhos", e);
      if (p.cfg.rhos.empty()) e.push_back("rhos: list must not be empty");
    } else {
      e.push_back("rhos: required key is missing");
    }
  }
  p.topologies =
      parse_topologies(kv.get_string("topologies", "delay,cyclic,random,wigner", e), e);
  return p;
}

json config_snapshot(const linres::ExperimentConfig& cfg,
                     const std::vector<linres::TopologyKind>& kinds) {
  json j;
  j["total_length"] = cfg.total_length;
  j["train_split"] = cfg.train_split;
  j["washout"] = cfg.washout;
  j["n"] = cfg.reservoir_size;
  j["realizations"] = cfg.realizations;
  j["master_seed"] = cfg.master_seed;
  j["ridge"] = cfg.ridge;
  j["rescale"] = linres::to_string(cfg.rescale_mode);
  j["taus"] = cfg.taus;
  j["rhos"] = cfg.rhos;
  std::vector<std::string> names;
  for (auto k : kinds) names.push_back(linres::to_string(k));
  j["topologies"] = names;
  return j;
}

int fail_validation(const std::vector<std::string>& errors) {
  std::fprintf(stderr, "invalid configuration:\n");
  for (const auto& m : errors) std::fprintf(stderr, "  - %s\n", m.c_str());
  return 1;
}

// --- build ----------------------------------------------------------

struct BuildArgs {
  std::string kind = "random";
  int n = 100;
  double rho = 0.9;
  std::uint64_t seed = 0;
  std::uint64_t input_seed = 0;
  std::string rescale = "as-distributed";
  std::string out = "reservoir.json";
};

int cmd_build(const BuildArgs& a, OutputSink& sink) {
  linres::ReservoirSpec spec;
  spec.kind = linres::topology_kind_from_string(a.kind);
  spec.n = a.n;
  spec.rho = a.rho;
  spec.seed = a.seed;
  spec.input_seed = a.input_seed;
  spec.rescale_mode = linres::rescale_mode_from_string(a.rescale);
  linres::Reservoir r = linres::build_reservoir(spec);
  sink.write(a.out, linres::to_json(r).dump(2) + "\n");
  linres::SpectrumSummary s = linres::spectrum_summary(r.W);
  std::printf("%s n=%d rho=%s: spectral radius %s, max singular value %s\n",
              linres::to_string(spec.kind).c_str(), spec.n,
              linres::format_double(spec.rho).c_str(),
              linres::format_double(s.spectral_radius).c_str(),
              linres::format_double(s.max_singular_value).c_str());
  return 0;
}

// --- analyze --------------------------------------------------------

int cmd_analyze(const std::string& reservoir_path,
                std::optional<double> tolerance, OutputSink& sink) {
  const json j = json::parse(linres::read_file(reservoir_path));
  linres::Reservoir r = linres::reservoir_from_json(j);
  linres::Matrix c = linres::controllability_matrix(r);
  linres::ControllabilityReport rep = linres::analyze(c, tolerance);

  sink.write("report.json", linres::to_json(rep).dump(2) + "\n");
  sink.write("singular_values.csv",
             linres::indexed_csv("singular_value", rep.singular_values));
  sink.write("column_norms.csv",
             linres::indexed_csv("column_norm", rep.column_norms));
  // Where the lost memory lives: per history age k, the total squared
  // weight the nullspace basis puts on coordinate k.
  linres::Vector energy = linres::Vector::Zero(c.rows());
  for (linres::Index d = 0; d < rep.nullspace.cols(); ++d) {
    energy += rep.nullspace.col(d).cwiseAbs2();
  }
  sink.write("nullspace_energy.csv",
             linres::indexed_csv("nullspace_energy", energy));

  std::printf("rank %d of %d (tolerance %s, nullspace dimension %d)\n",
              rep.rank, static_cast<int>(c.cols()),
              linres::format_double(rep.rank_tolerance).c_str(),
              static_cast<int>(rep.nullspace.cols()));
  return 0;
}

// --- encode-verify ----------------------------------------------------

struct EncodeVerifyArgs {
  std::string kind = "cyclic";
  int n = 10;
  double rho = 0.9;
  std::uint64_t seed = 0;
  std::uint64_t input_seed = 0;
  std::uint64_t signal_seed = 0;
  std::string rescale = "as-distributed";
  long length = 0;  // 0 = truncation_horizon(rho, 1e-12, n)
  double tol = 1e-8;
};

int cmd_encode_verify(const EncodeVerifyArgs& a) {
  if (!(a.rho < 1.0)) {
    throw std::invalid_argument(
        "encode-verify: rho must be < 1 (the encoded-input series diverges "
        "otherwise)");
  }
  linres::ReservoirSpec spec;
  spec.kind = linres::topology_kind_from_string(a.kind);
  spec.n = a.n;
  spec.rho = a.rho;
  spec.seed = a.seed;
  spec.input_seed = a.input_seed;
  spec.rescale_mode = linres::rescale_mode_from_string(a.rescale);
  linres::Reservoir r = linres::build_reservoir(spec);

  const long K =
      a.length > 0 ? a.length : linres::truncation_horizon(a.rho, 1e-12, a.n);
  if (K < a.n) {
    throw std::invalid_argument("encode-verify: --length must be >= n");
  }
  // window[i] = u_{-i}, newest first.
  linres::Vector window = linres::gaussian_signal(K, a.signal_seed);

  // Ground truth: drive the state-update recursion from the oldest sample.
  linres::Vector x = linres::Vector::Zero(a.n);
  for (long k = K - 1; k >= 0; --k) x = r.W * x + r.w * window[k];

  linres::Matrix c = linres::controllability_matrix(r);
  linres::EncodedInput enc = linres::encode_input(linres::char_coeffs(r), window);
  const double denom = 1.0 + x.norm();
  double worst = (x - c * enc.s).norm() / denom;
  std::printf("general encoding:   residual %.3e (tail estimate %.3e)\n",
              (x - c * enc.s).norm() / denom, enc.tail_estimate);

  if (spec.kind == linres::TopologyKind::DelayLine) {
    linres::EncodedInput cf = linres::encode_input_delay(window, a.n);
    const double res = (x - c * cf.s).norm() / denom;
    worst = std::max(worst, res);
    std::printf("delay closed form:  residual %.3e\n", res);
  } else if (spec.kind == linres::TopologyKind::Cyclic) {
    linres::EncodedInput cf = linres::encode_input_cyclic(a.rho, a.n, window);
    linres::Matrix ct = linres::cyclic_controllability_tilde(r.w);
    const double res = (x - ct * cf.s).norm() / denom;
    worst = std::max(worst, res);
    std::printf("cyclic closed form: residual %.3e (tail estimate %.3e)\n",
                res, cf.tail_estimate);
  }

  const bool pass = worst <= a.tol;
  std::printf("%s: max residual %.3e %s %.0e over %ld history terms\n",
              pass ? "PASS" : "FAIL", worst, pass ? "<=" : ">", a.tol, K);
  if (!pass) {
    throw linres::NumericalError("encode-verify: residual above tolerance");
  }
  return 0;
}

// --- experiment subcommands -------------------------------------------

int cmd_memory_curve(const std::string& config_path, bool svg,
                     std::optional<int> threads_override, OutputSink& sink) {
  const auto kv = linres::KeyValueConfig::parse_file(config_path);
  ParsedExperiment p = parse_experiment_config(kv, true, true);
  for (const auto& k : kv.unconsumed_keys()) {
    p.errors.push_back("unknown key: " + k);
  }
  if (threads_override) p.cfg.threads = *threads_override;
  auto violations = linres::validate(p.cfg);
  p.errors.insert(p.errors.end(), violations.begin(), violations.end());
  if (!p.errors.empty()) return fail_validation(p.errors);

  std::vector<linres::GammaRecord> raw;
  std::vector<linres::AggregatedGammaRow> agg;
  std::vector<linres::ChartSeries> series;
  for (auto kind : p.topologies) {
    for (double rho : p.cfg.rhos) {
      linres::MemoryCurveResult res = linres::memory_curve(kind, rho, p.cfg);
      raw.insert(raw.end(), res.raw.begin(), res.raw.end());
      linres::ChartSeries cs;
      cs.label = linres::to_string(kind) + " rho=" + linres::format_double(rho);
      for (const auto& pt : res.curve.points) {
        agg.push_back({kind, p.cfg.reservoir_size, rho, pt.tau, pt.mean_gamma,
                       pt.std_gamma});
        cs.points.push_back({static_cast<double>(pt.tau), pt.mean_gamma,
                             pt.std_gamma});
      }
      series.push_back(std::move(cs));
      std::printf("memory curve %s rho=%s done (%zu taus)\n",
                  linres::to_string(kind).c_str(),
                  linres::format_double(rho).c_str(), p.cfg.taus.size());
    }
  }
  sink.write("memory_curve_records.csv", linres::gamma_records_csv(raw));
  sink.write("memory_curve_mean.csv", linres::aggregated_gamma_csv(agg));
  if (svg) {
    sink.write("memory_curve.svg",
               linres::line_chart_svg("memory curve", "tau", "gamma", series));
  }
  sink.write("manifest.json",
             linres::make_manifest("memory-curve",
                                   config_snapshot(p.cfg, p.topologies),
                                   p.cfg.master_seed, sink.written)
                     .dump(2) +
                 "\n");
  return 0;
}

int cmd_sr_sweep(const std::string& config_path, bool svg,
                 std::optional<int> threads_override, OutputSink& sink) {
  const auto kv = linres::KeyValueConfig::parse_file(config_path);
  ParsedExperiment p = parse_experiment_config(kv, true, true);
  for (const auto& k : kv.unconsumed_keys()) {
    p.errors.push_back("unknown key: " + k);
  }
  if (threads_override) p.cfg.threads = *threads_override;
  auto violations = linres::validate(p.cfg);
  p.errors.insert(p.errors.end(), violations.begin(), violations.end());
  if (!p.errors.empty()) return fail_validation(p.errors);

  std::vector<linres::GammaRecord> raw;
  std::vector<linres::AggregatedGammaRow> agg;
  std::vector<linres::ChartSeries> series;
  for (auto kind : p.topologies) {
    linres::SweepResult res =
        linres::sr_sweep(kind, p.cfg.taus, p.cfg.rhos, p.cfg);
    raw.insert(raw.end(), res.raw.begin(), res.raw.end());
    for (int tau : p.cfg.taus) {
      linres::ChartSeries cs;
      cs.label = linres::to_string(kind) + " tau=" + std::to_string(tau);
      for (const auto& pt : res.points) {
        if (pt.tau != tau) continue;
        agg.push_back({kind, p.cfg.reservoir_size, pt.rho, pt.tau,
                       pt.mean_gamma, pt.std_gamma});
        cs.points.push_back({pt.rho, pt.mean_gamma, pt.std_gamma});
      }
      series.push_back(std::move(cs));
    }
    std::printf("sr sweep %s done (%zu rhos x %zu taus)\n",
                linres::to_string(kind).c_str(), p.cfg.rhos.size(),
                p.cfg.taus.size());
  }
  sink.write("sr_sweep_records.csv", linres::gamma_records_csv(raw));
  sink.write("sr_sweep_mean.csv", linres::aggregated_gamma_csv(agg));
  if (svg) {
    sink.write("sr_sweep.svg",
               linres::line_chart_svg("accuracy vs spectral radius", "rho",
                                      "gamma", series));
  }
  sink.write("manifest.json",
             linres::make_manifest("sr-sweep",
                                   config_snapshot(p.cfg, p.topologies),
                                   p.cfg.master_seed, sink.written)
                     .dump(2) +
                 "\n");
  return 0;
}

int cmd_rank_scan(const std::string& config_path, bool svg,
                  std::optional<int> threads_override, OutputSink& sink) {
  const auto kv = linres::KeyValueConfig::parse_file(config_path);
  ParsedExperiment p = parse_experiment_config(kv, false, false);
  std::vector<int> ns;
  if (kv.has("ns")) {
    ns = kv.get_int_list("ns", p.errors);
    if (ns.empty()) p.errors.push_back("ns: list must not be empty");
  } else {
    p.errors.push_back("ns: required key is missing");
  }
  const double rho = kv.get_double("rho", 0.995, p.errors);
  linres::FixedQuantity fixed = linres::FixedQuantity::SpectralRadius;
  try {
    fixed = linres::fixed_quantity_from_string(
        kv.get_string("fixed", "spectral-radius", p.errors));
  } catch (const std::invalid_argument& ex) {
    p.errors.push_back(ex.what());
  }
  for (const auto& k : kv.unconsumed_keys()) {
    p.errors.push_back("unknown key: " + k);
  }
  if (threads_override) p.cfg.threads = *threads_override;
  if (!(rho > 0.0)) p.errors.push_back("rho: must be positive");
  if (p.cfg.realizations < 1) {
    p.errors.push_back("realizations: must be >= 1");
  }
  for (int n : ns) {
    if (n < 2) p.errors.push_back("ns: every size must be >= 2");
  }
  if (!p.errors.empty()) return fail_validation(p.errors);

  linres::RankScanResult res =
      linres::rank_scan(p.topologies, ns, rho, fixed, p.cfg);
  sink.write("rank_scan_records.csv",
             linres::rank_records_csv(res.raw, fixed));
  sink.write("rank_scan_mean.csv",
             linres::aggregated_rank_csv(res.rows, rho, fixed));
  if (svg) {
    std::vector<linres::ChartSeries> series;
    for (auto kind : p.topologies) {
      linres::ChartSeries cs;
      cs.label = linres::to_string(kind);
      for (const auto& row : res.rows) {
        if (row.kind != kind) continue;
        cs.points.push_back({static_cast<double>(row.n), row.mean_rank,
                             row.std_rank});
      }
      series.push_back(std::move(cs));
    }
    sink.write("rank_scan.svg",
               linres::line_chart_svg("controllability rank vs size", "n",
                                      "rank", series));
  }
  json cfg_json = config_snapshot(p.cfg, p.topologies);
  cfg_json.erase("taus");
  cfg_json.erase("rhos");
  cfg_json["ns"] = ns;
  cfg_json["rho"] = rho;
  cfg_json["fixed"] = linres::to_string(fixed);
  sink.write("manifest.json",
             linres::make_manifest("rank-scan", cfg_json, p.cfg.master_seed,
                                   sink.written)
                     .dump(2) +
                 "\n");
  for (const auto& row : res.rows) {
    std::printf("rank %s n=%d: mean %.2f std %.2f\n",
                linres::to_string(row.kind).c_str(), row.n, row.mean_rank,
                row.std_rank);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-Hamilton analysis of linear reservoir computers"};
  app.set_version_flag("--version", std::string(linres::kVersion));
  app.require_subcommand(0, 1);

  std::string out_dir_flag;
  app.add_option("--out-dir", out_dir_flag,
                 "output directory (default: $LINRES_OUT_DIR or .)");
  std::optional<int> threads;
  app.add_option("--threads", threads,
                 "worker cap for experiment grids (0 = hardware)");

  // build
  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "sample a reservoir, write JSON");
  build->add_option("--kind", build_args.kind,
                    "delay | cyclic | random | wigner")->required();
  build->add_option("--n", build_args.n, "reservoir size")->required();
  build->add_option("--rho", build_args.rho, "weight scale / target spectral radius")
      ->required();
  build->add_option("--seed", build_args.seed, "reservoir seed");
  build->add_option("--input-seed", build_args.input_seed, "input-weight seed");
  build->add_option("--rescale", build_args.rescale,
                    "as-distributed | exact-spectral-radius");
  build->add_option("--out", build_args.out, "output file name");

  // analyze
  std::string reservoir_path;
  std::optional<double> tolerance;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "controllability rank/nullspace report for a reservoir file");
  analyze->add_option("--reservoir", reservoir_path, "reservoir JSON file")
      ->required();
  analyze->add_option("--tolerance", tolerance,
                      "absolute singular-value cutoff override");

  // encode-verify
  EncodeVerifyArgs ev;
  CLI::App* encode = app.add_subcommand(
      "encode-verify",
      "check x0 = C*s (direct recursion vs encoding vs closed forms)");
  encode->add_option("--kind", ev.kind, "delay | cyclic | random | wigner");
  encode->add_option("--n", ev.n, "reservoir size");
  encode->add_option("--rho", ev.rho, "weight scale, must be < 1")->required();
  encode->add_option("--seed", ev.seed, "reservoir seed");
  encode->add_option("--input-seed", ev.input_seed, "input-weight seed");
  encode->add_option("--signal-seed", ev.signal_seed, "input-history seed");
  encode->add_option("--rescale", ev.rescale,
                     "as-distributed | exact-spectral-radius");
  encode->add_option("--length", ev.length,
                     "history length K (default: horizon for tail 1e-12)");
  encode->add_option("--tol", ev.tol, "PASS threshold on the relative residual");

  // experiment grids
  std::string config_path;
  bool svg = false;
  CLI::App* mc = app.add_subcommand("memory-curve",
                                    "gamma(tau) curves from a config file");
  CLI::App* sweep = app.add_subcommand("sr-sweep",
                                       "gamma(rho) sweep from a config file");
  CLI::App* rank = app.add_subcommand("rank-scan",
                                      "controllability rank vs size");
  for (CLI::App* sub : {mc, sweep, rank}) {
    sub->add_option("--config", config_path, "key = value config file")
        ->required();
    sub->add_flag("--svg", svg, "also emit an SVG line chart");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  OutputSink sink{out_dir_flag.empty() ? default_out_dir()
                                       : fs::path(out_dir_flag),
                  {}};
  try {
    if (build->parsed()) return cmd_build(build_args, sink);
    if (analyze->parsed()) return cmd_analyze(reservoir_path, tolerance, sink);
    if (encode->parsed()) return cmd_encode_verify(ev);
    if (mc->parsed()) return cmd_memory_curve(config_path, svg, threads, sink);
    if (sweep->parsed()) return cmd_sr_sweep(config_path, svg, threads, sink);
    if (rank->parsed()) return cmd_rank_scan(config_path, svg, threads, sink);
  } catch (const linres::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 1;
}
