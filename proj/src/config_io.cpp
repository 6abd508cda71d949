#include "phirm/config_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "phirm/report_io.hpp"

namespace phirm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) {
    throw std::runtime_error("config: bad numeric value for " + key);
  }
  return v;
}

std::int64_t parse_int(const std::string& value, const std::string& key) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) {
    throw std::runtime_error("config: bad integer value for " + key);
  }
  return v;
}

}  // namespace

PhirmConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());

  PhirmConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config " + path.string() + ":" +
                               std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::runtime_error("config " + path.string() + ":" +
                               std::to_string(line_no) + ": expected key = value");
    }

    if (key == "ncd_base") {
      cfg.ncd_base = parse_double(value, key);
    } else if (key == "ncd_neg_base") {
      cfg.ncd_neg_base = parse_double(value, key);
    } else if (key == "w_nad") {
      cfg.w_nad = parse_double(value, key);
    } else if (key == "w_aad") {
      cfg.w_aad = parse_double(value, key);
    } else if (key == "min_component_area") {
      cfg.min_component_area = parse_int(value, key);
    } else if (key == "artefact_max_value") {
      const std::int64_t v = parse_int(value, key);
      if (v < 0 || v > 255) {
        throw std::runtime_error("config: artefact_max_value out of 0..255");
      }
      cfg.artefact_max_value = static_cast<std::uint8_t>(v);
    } else if (key == "artefact_mean_floor") {
      cfg.artefact_mean_floor = parse_double(value, key);
    } else if (key == "single_nucleus_max_area") {
      cfg.single_nucleus_max_area = parse_int(value, key);
    } else {
      throw std::runtime_error("config " + path.string() + ":" +
                               std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

void save_config(const std::filesystem::path& path, const PhirmConfig& cfg) {
  std::ostringstream out;
  out << "# phenotype score weights and thresholds\n";
  out << "ncd_base = " << format_double(cfg.ncd_base)
      << "  # penalty base per missing nucleus\n";
  out << "ncd_neg_base = " << format_double(cfg.ncd_neg_base)
      << "  # penalty base per hallucinated nucleus\n";
  out << "w_nad = " << format_double(cfg.w_nad)
      << "  # weight per pixel of nucleus-area difference\n";
  out << "w_aad = " << format_double(cfg.w_aad)
      << "  # weight per pixel of artefact-area difference\n";
  out << "min_component_area = " << cfg.min_component_area
      << "  # components below this many pixels are noise\n";
  out << "artefact_max_value = " << static_cast<int>(cfg.artefact_max_value)
      << "  # saturation level an artefact must reach\n";
  out << "artefact_mean_floor = " << format_double(cfg.artefact_mean_floor)
      << "  # minimum mean intensity of an artefact\n";
  out << "single_nucleus_max_area = " << cfg.single_nucleus_max_area
      << "  # larger components count as two nuclei\n";

  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot create config " + path.string());
  file << out.str();
  if (!file.flush()) throw std::runtime_error("config write failed: " + path.string());
}

PhirmConfig resolve_config(const std::filesystem::path& explicit_path) {
  if (!explicit_path.empty()) return load_config(explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    return load_config(env);
  }
  PhirmConfig cfg;
  cfg.validate();
  return cfg;
}

}  // namespace phirm
