#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace wigrav {

/// Raw experiment inputs in SI units. Defaults are the proposed tabletop
/// configuration with CODATA 2018 hbar and G.
struct RawParams {
  double m_kg = 1e-14;
  double delta_x_m = 2.5e-4;
  double d_m = 4.5e-4;
  double sigma_m = 1e-5;
  double hbar_js = 1.054571817e-34;
  double G_si = 6.67430e-11;
};

/// Conversion between SI and the internal phase-space units: lengths in
/// sigma, momenta in hbar/sigma, actions in hbar. Time stays in seconds.
class UnitSystem {
 public:
  UnitSystem(double sigma_m, double hbar_js);

  double length_unit() const { return sigma_; }
  double momentum_unit() const { return hbar_ / sigma_; }
  double action_unit() const { return hbar_; }

  double length_to_internal(double x_m) const { return x_m / sigma_; }
  double length_to_si(double x) const { return x * sigma_; }
  double momentum_to_internal(double p_si) const { return p_si * sigma_ / hbar_; }
  double momentum_to_si(double p) const { return p * hbar_ / sigma_; }

  /// Converts a phase-space density per (m * kg m/s)^n to internal units.
  double density_to_internal(double w_si, int particles) const;
  double density_to_si(double w, int particles) const;

 private:
  double sigma_;
  double hbar_;
};

/// Derived constants expressed in internal units.
struct InternalConstants {
  double d;        // mean distance [sigma]
  double delta_x;  // arm separation [sigma]
  double alpha;    // momentum Gaussian coefficient [(sigma/hbar)^2], == 2
  double beta;     // position Gaussian coefficient [1/sigma^2], == 1/2
  double gamma;    // fringe wavenumber in momentum [sigma/hbar], == delta_x
  double mass;     // m sigma^2 / hbar [s]
  double kappa;    // G m^2 / (hbar sigma) [1/s]
  double norm_N;
};

/// Validated experiment parameters plus derived quantities. Immutable.
class Params {
 public:
  /// Validates raw inputs and fills the derived fields.
  /// Throws NonPositive or OrderingViolation.
  static Params derive(const RawParams& raw);
  static Params defaults() { return derive(RawParams{}); }

  double m() const { return raw_.m_kg; }
  double delta_x() const { return raw_.delta_x_m; }
  double d() const { return raw_.d_m; }
  double sigma() const { return raw_.sigma_m; }
  double hbar() const { return raw_.hbar_js; }
  double G() const { return raw_.G_si; }

  double kappa() const { return kappa_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double norm_N() const { return norm_N_; }

  const RawParams& raw() const { return raw_; }
  const UnitSystem& units() const { return units_; }
  const InternalConstants& internal() const { return internal_; }

 private:
  explicit Params(const RawParams& raw);

  RawParams raw_;
  double kappa_;
  double alpha_;
  double beta_;
  double norm_N_;
  UnitSystem units_;
  InternalConstants internal_;
};

/// Parses `key = value` lines (SI, `#` comments). Missing keys keep their
/// defaults; unknown keys throw ParamsFileError.
RawParams parse_params(std::istream& in);
RawParams load_params_file(const std::filesystem::path& path);

}  // namespace wigrav
