#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "linres/simulate.hpp"

namespace linres {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// --- CSV ------------------------------------------------------------

// header: topology,n,rho,tau,realization,gamma
std::string gamma_records_csv(const std::vector<GammaRecord>& records);

// header: topology,n,rho,tau,mean_gamma,std_gamma
struct AggregatedGammaRow {
  TopologyKind kind;
  int n = 0;
  double rho = 0.0;
  int tau = 0;
  double mean_gamma = 0.0;
  double std_gamma = 0.0;
};
std::string aggregated_gamma_csv(const std::vector<AggregatedGammaRow>& rows);

// header: topology,n,rho,normalization,realization,rank
std::string rank_records_csv(const std::vector<RankRecord>& records,
                             FixedQuantity fixed);
// header: topology,n,rho,normalization,mean_rank,std_rank
std::string aggregated_rank_csv(const std::vector<RankScanRow>& rows,
                                double rho, FixedQuantity fixed);

// Two-column helper used for singular values / column norms / energy
// profiles: header "index,<value_name>".
std::string indexed_csv(const std::string& value_name, const Vector& values);

// --- digests ----------------------------------------------------------

// FNV-1a 64-bit over raw bytes; good enough to detect any change between
// reruns, which is all the manifest needs.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// --- key = value config files ------------------------------------------

// Lines of "key = value"; '#' starts a comment; blank lines ignored.
// Unknown keys are reported as errors by the typed getters' owner, not
// silently dropped.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::filesystem::path& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  // Getters record a violation into `errors` instead of throwing, so a
  // config can be validated exhaustively in one pass.
  std::string get_string(const std::string& key, const std::string& fallback,
                         std::vector<std::string>& errors) const;
  long get_long(const std::string& key, long fallback,
                std::vector<std::string>& errors) const;
  double get_double(const std::string& key, double fallback,
                    std::vector<std::string>& errors) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback,
                        std::vector<std::string>& errors) const;
  // Comma-separated values; integer lists also accept "a:b:c" inclusive
  // ranges (start:stop:step).
  std::vector<int> get_int_list(const std::string& key,
                                std::vector<std::string>& errors) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<std::string>& errors) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  // Keys present in the file but never consumed by a getter.
  std::vector<std::string> unconsumed_keys() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
};

// --- SVG --------------------------------------------------------------

struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
  double band = 0.0;  // half-width of the shaded band (std), may be 0
};

struct ChartSeries {
  std::string label;
  std::vector<ChartPoint> points;
};

// Minimal self-contained line chart: mean polyline plus translucent
// +/- band polygon per series, axes with a handful of ticks, legend.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series);

// --- manifest & files ---------------------------------------------------

struct OutputFile {
  std::string name;     // path relative to the out dir
  std::string digest;   // fnv1a64 of the bytes written
};

// Run manifest: tool version, subcommand, the exact config the run used,
// the seed-derivation rule, and a digest per output file. Rerunning with
// the same config must reproduce every digest.
nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config,
                             std::uint64_t master_seed,
                             const std::vector<OutputFile>& outputs);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace linres
