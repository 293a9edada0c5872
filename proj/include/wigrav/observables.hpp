#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wigrav/dynamics.hpp"
#include "wigrav/quadrature.hpp"

namespace wigrav {

/// Gravitational phase rates of the branch pairs [rad/s].
struct PhaseRates {
  double rate_phi = 0.0;  // separation d
  double rate_LR = 0.0;   // separation d + delta_x
  double rate_RL = 0.0;   // separation d - delta_x
  double delta_LR = 0.0;  // rate_LR - rate_phi
  double delta_RL = 0.0;  // rate_RL - rate_phi

  static PhaseRates from(const Params& params);
};

/// Samples (t [s], value) with strictly increasing t.
class TimeSeries {
 public:
  explicit TimeSeries(std::string label) : label_(std::move(label)) {}

  /// Throws std::invalid_argument unless t exceeds the last time and value is finite.
  void push(double t, double value);

  const std::string& label() const { return label_; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::string label_;
  std::vector<std::pair<double, double>> samples_;
};

enum class PurityMethod { Quadrature, GaussianAnalytic };

PurityMethod parse_purity_method(const std::string& name);
const char* to_string(PurityMethod method);

/// Purity of the reduced state under the exact quantum evolution.
double quantum_purity(double t, const Params& params);

/// Reduced Wigner function of particle 2 at an SI point, density per
/// (m kg m/s). Throws MethodUnsupported for the quantum reference.
double marginal2(const EvolutionKind& kind, double x2, double p2, double t, const Params& params,
                 const QuadratureSettings& settings = {});

/// 2 pi hbar int W2^2 for the classical models; the closed form for the
/// quantum reference.
double marginal_purity(const EvolutionKind& kind, double t, const Params& params,
                       PurityMethod method = PurityMethod::Quadrature,
                       const QuadratureSettings& settings = {});

/// (int |W(p1, p2)| - 1) / 2 for the momentum marginal.
double negativity(const EvolutionKind& kind, double t, const Params& params,
                  const QuadratureSettings& settings = {});

/// Diffusion rate [(kg m/s)^2 / s] giving D t = scale * 0.25 (hbar/delta_x)^2.
double threshold_diffusion(double scale, double t, const Params& params);

/// Approximate global purity under the stepwise model with diffusion
/// rate D [(kg m/s)^2 / s].
double gamma_global_diffusion(double t, double D, const Params& params, const BranchSet& branches);

/// Approximate purity of the particle-2 marginal for the same model.
double gamma_reduced_diffusion(double t, double D, const Params& params,
                               const BranchSet& branches);

/// Factor Gamma^D_{i,j}, i in {1, 2}, j in 1..9.
double gamma_factor_diffusion(int i, int j, double t, double D, const Params& params,
                              const BranchSet& branches);

}  // namespace wigrav
