#include "linres/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "linres/rng.hpp"
#include "linres/version.hpp"

namespace linres {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string gamma_records_csv(const std::vector<GammaRecord>& records) {
  std::string out = "topology,n,rho,tau,realization,gamma\n";
  for (const auto& r : records) {
    out += to_string(r.kind);
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.rho);
    out += ',' + std::to_string(r.tau);
    out += ',' + std::to_string(r.realization);
    out += ',' + format_double(r.gamma);
    out += '\n';
  }
  return out;
}

std::string aggregated_gamma_csv(const std::vector<AggregatedGammaRow>& rows) {
  std::string out = "topology,n,rho,tau,mean_gamma,std_gamma\n";
  for (const auto& r : rows) {
    out += to_string(r.kind);
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.rho);
    out += ',' + std::to_string(r.tau);
    out += ',' + format_double(r.mean_gamma);
    out += ',' + format_double(r.std_gamma);
    out += '\n';
  }
  return out;
}

std::string rank_records_csv(const std::vector<RankRecord>& records,
                             FixedQuantity fixed) {
  std::string out = "topology,n,rho,normalization,realization,rank\n";
  for (const auto& r : records) {
    out += to_string(r.kind);
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.rho);
    out += ',' + to_string(fixed);
    out += ',' + std::to_string(r.realization);
    out += ',' + std::to_string(r.rank);
    out += '\n';
  }
  return out;
}

std::string aggregated_rank_csv(const std::vector<RankScanRow>& rows,
                                double rho, FixedQuantity fixed) {
  std::string out = "topology,n,rho,normalization,mean_rank,std_rank\n";
  for (const auto& r : rows) {
    out += to_string(r.kind);
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(rho);
    out += ',' + to_string(fixed);
    out += ',' + format_double(r.mean_rank);
    out += ',' + format_double(r.std_rank);
    out += '\n';
  }
  return out;
}

std::string indexed_csv(const std::string& value_name, const Vector& values) {
  std::string out = "index," + value_name + "\n";
  for (Index i = 0; i < values.size(); ++i) {
    out += std::to_string(i);
    out += ',' + format_double(values[i]);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback,
                                       std::vector<std::string>& errors) const {
  (void)errors;
  consumed_[key] = true;
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

long KeyValueConfig::get_long(const std::string& key, long fallback,
                              std::vector<std::string>& errors) const {
  consumed_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    errors.push_back("key '" + key + "': '" + it->second +
                     "' is not an integer");
    return fallback;
  }
}

double KeyValueConfig::get_double(const std::string& key, double fallback,
                                  std::vector<std::string>& errors) const {
  consumed_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    errors.push_back("key '" + key + "': '" + it->second +
                     "' is not a number");
    return fallback;
  }
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback,
                                      std::vector<std::string>& errors) const {
  consumed_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    // stoull accepts a leading '-' and wraps; reject it explicitly.
    if (!it->second.empty() && it->second[0] == '-') {
      throw std::invalid_argument("negative");
    }
    size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    errors.push_back("key '" + key + "': '" + it->second +
                     "' is not an unsigned integer");
    return fallback;
  }
}

std::vector<int> KeyValueConfig::get_int_list(
    const std::string& key, std::vector<std::string>& errors) const {
  consumed_[key] = true;
  std::vector<int> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const std::string& part : split(it->second, ',')) {
    if (part.empty()) continue;
    const auto colons = std::count(part.begin(), part.end(), ':');
    try {
      if (colons == 2) {
        // inclusive range start:stop:step
        const auto fields = split(part, ':');
        const int start = std::stoi(fields[0]);
        const int stop = std::stoi(fields[1]);
        const int step = std::stoi(fields[2]);
        if (step <= 0 || stop < start) {
          errors.push_back("key '" + key + "': bad range '" + part + "'");
          continue;
        }
        for (int v = start; v <= stop; v += step) out.push_back(v);
      } else if (colons == 0) {
        size_t pos = 0;
        const int v = std::stoi(part, &pos);
        if (pos != part.size()) throw std::invalid_argument("trailing");
        out.push_back(v);
      } else {
        throw std::invalid_argument("colon count");
      }
    } catch (const std::exception&) {
      errors.push_back("key '" + key + "': '" + part +
                       "' is not an integer or start:stop:step range");
    }
  }
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, std::vector<std::string>& errors) const {
  consumed_[key] = true;
  std::vector<double> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const std::string& part : split(it->second, ',')) {
    if (part.empty()) continue;
    try {
      size_t pos = 0;
      const double v = std::stod(part, &pos);
      if (pos != part.size()) throw std::invalid_argument("trailing");
      out.push_back(v);
    } catch (const std::exception&) {
      errors.push_back("key '" + key + "': '" + part + "' is not a number");
    }
  }
  return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(
    const std::string& key) const {
  consumed_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return {};
  std::vector<std::string> out;
  for (const std::string& part : split(it->second, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::vector<std::string> KeyValueConfig::unconsumed_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    (void)value;
    if (!consumed_.count(key)) out.push_back(key);
  }
  return out;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series) {
  constexpr double kW = 860, kH = 520;
  constexpr double kL = 70, kR = 220, kT = 50, kB = 60;  // margins
  const double plot_w = kW - kL - kR;
  const double plot_h = kH - kT - kB;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (first) {
        xmin = xmax = p.x;
        ymin = p.y - p.band;
        ymax = p.y + p.band;
        first = false;
      } else {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y - p.band);
        ymax = std::max(ymax, p.y + p.band);
      }
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  const auto sx = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double y) { return kT + (ymax - y) / (ymax - ymin) * plot_h; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"17\">"
      << title << "</text>\n";

  // axes + ticks
  svg << "<line x1=\"" << kL << "\" y1=\"" << kT + plot_h << "\" x2=\""
      << kL + plot_w << "\" y2=\"" << kT + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
      << "\" y2=\"" << kT + plot_h << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << kT + plot_h << "\" x2=\""
        << sx(fx) << "\" y2=\"" << kT + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << kT + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(std::round(fx * 1000) / 1000) << "</text>\n";
    svg << "<line x1=\"" << kL - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << kL
        << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kL - 9 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(std::round(fy * 1000) / 1000) << "</text>\n";
  }
  svg << "<text x=\"" << kL + plot_w / 2 << "\" y=\"" << kH - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kT + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 "
      << kT + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kColors[si % 8];
    const auto& pts = series[si].points;
    if (pts.empty()) continue;
    // band polygon: forward along mean+std, back along mean-std
    bool has_band = false;
    for (const auto& p : pts) has_band = has_band || p.band > 0;
    if (has_band) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
             "stroke=\"none\" points=\"";
      for (const auto& p : pts) svg << sx(p.x) << "," << sy(p.y + p.band) << " ";
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        svg << sx(it->x) << "," << sy(it->y - it->band) << " ";
      }
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& p : pts) svg << sx(p.x) << "," << sy(p.y) << " ";
    svg << "\"/>\n";
    const double ly = kT + 18 + 18 * static_cast<double>(si);
    svg << "<line x1=\"" << kL + plot_w + 14 << "\" y1=\"" << ly << "\" x2=\""
        << kL + plot_w + 38 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kL + plot_w + 44 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[si].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config,
                             std::uint64_t master_seed,
                             const std::vector<OutputFile>& outputs) {
  json j;
  j["tool"] = "linres";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  j["master_seed"] = master_seed;
  j["seed_derivation"] = {
      {"generator", "philox4x64-10"},
      {"rule",
       "child = philox_block(key=[master_seed, role], ctr=[cell,0,0,0])[0]; "
       "roles: reservoir=1 input_weights=2 signal=3"},
  };
  json files = json::array();
  for (const auto& f : outputs) {
    files.push_back({{"file", f.name}, {"fnv1a64", f.digest}});
  }
  j["outputs"] = files;
  return j;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open for writing: " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("short write: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open for reading: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace linres
