#include "wigrav/params.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "wigrav/errors.hpp"

namespace wigrav {

UnitSystem::UnitSystem(double sigma_m, double hbar_js) : sigma_(sigma_m), hbar_(hbar_js) {}

double UnitSystem::density_to_internal(double w_si, int particles) const {
  // One (m * kg m/s) cell is hbar internal cells.
  return w_si * std::pow(hbar_, particles);
}

double UnitSystem::density_to_si(double w, int particles) const {
  return w / std::pow(hbar_, particles);
}

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw NonPositive(std::string(name) + " must be finite and positive");
  }
}

}  // namespace

Params::Params(const RawParams& raw)
    : raw_(raw),
      kappa_(raw.G_si * raw.m_kg * raw.m_kg),
      alpha_(2.0 * raw.sigma_m * raw.sigma_m / (raw.hbar_js * raw.hbar_js)),
      beta_(1.0 / (2.0 * raw.sigma_m * raw.sigma_m)),
      norm_N_(0.0),
      units_(raw.sigma_m, raw.hbar_js),
      internal_{} {
  const double ratio = raw.delta_x_m / raw.sigma_m;
  const double overlap = std::exp(-ratio * ratio / 8.0);
  norm_N_ = 4.0 * (1.0 + overlap) * (1.0 + overlap);

  internal_.d = raw.d_m / raw.sigma_m;
  internal_.delta_x = ratio;
  internal_.alpha = 2.0;
  internal_.beta = 0.5;
  internal_.gamma = ratio;
  internal_.mass = raw.m_kg * raw.sigma_m * raw.sigma_m / raw.hbar_js;
  internal_.kappa = kappa_ / (raw.hbar_js * raw.sigma_m);
  internal_.norm_N = norm_N_;
}

Params Params::derive(const RawParams& raw) {
  require_positive(raw.m_kg, "m_kg");
  require_positive(raw.delta_x_m, "delta_x_m");
  require_positive(raw.d_m, "d_m");
  require_positive(raw.sigma_m, "sigma_m");
  require_positive(raw.hbar_js, "hbar_js");
  require_positive(raw.G_si, "G_si");
  if (!(raw.sigma_m < raw.delta_x_m)) {
    throw OrderingViolation("sigma must be smaller than delta_x");
  }
  if (!(raw.delta_x_m < raw.d_m)) {
    throw OrderingViolation("delta_x must be smaller than d");
  }
  return Params(raw);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, int line_no) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ParamsFileError("line " + std::to_string(line_no) + ": invalid number '" + text + "'");
  }
  return value;
}

}  // namespace

RawParams parse_params(std::istream& in) {
  RawParams raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParamsFileError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const double value = parse_number(trim(line.substr(eq + 1)), line_no);
    if (key == "m_kg") {
      raw.m_kg = value;
    } else if (key == "delta_x_m") {
      raw.delta_x_m = value;
    } else if (key == "d_m") {
      raw.d_m = value;
    } else if (key == "sigma_m") {
      raw.sigma_m = value;
    } else if (key == "hbar_js") {
      raw.hbar_js = value;
    } else if (key == "G_si") {
      raw.G_si = value;
    } else {
      throw ParamsFileError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return raw;
}

RawParams load_params_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParamsFileError("cannot open parameter file " + path.string());
  return parse_params(in);
}

}  // namespace wigrav
