#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "propphase/families.hpp"

namespace propphase {

struct OmegaNode {
  double s = 0.0;
  double w = 0.0;
};

/// Averaging density omega on [-1,1]. Admissibility (non-negative,
/// bounded, unit mass) is enforced on construction; tabulated forms are
/// piecewise linear between their nodes and zero outside.
class AveragingFunction {
 public:
  static AveragingFunction triangular();
  static AveragingFunction tabulated(std::vector<OmegaNode> nodes);

  double operator()(double s) const;
  double sup_norm() const { return sup_norm_; }
  bool triangular_form() const { return triangular_; }
  /// Even in s (a requirement for tabulated forms to match the even
  /// modulus; the triangular density always qualifies).
  bool eligible() const { return eligible_; }

 private:
  AveragingFunction() = default;
  bool triangular_ = true;
  bool eligible_ = true;
  double sup_norm_ = 1.0;
  std::vector<OmegaNode> nodes_;
};

struct KernelConfig {
  AveragingFunction omega = AveragingFunction::triangular();
  int grid_n = 400;   // quadrature subintervals of [-1,1]; even, >= 2
  int series_n = 20;  // Construction III truncation order; >= 1
  void validate() const;
};

struct KernelDiagnostics {
  int overflow_count = 0;
  double series_tail_max = 0.0;
  bool series_tail_warning = false;
};

/// Cosine transform of the triangular density: 2(1-cos u)/u^2, 1 at 0.
double omega_hat_triangular(double u);

/// Composite trapezoid rule over the grid_n+1 equally spaced endpoints
/// of [-1,1]. Non-finite integrand values raise an error naming the node.
double quadrature(const std::function<double(double)>& f,
                  const KernelConfig& cfg);

/// Kernel evaluator bound to one (family, config, t); reusable across
/// many data values. Pure and safe for concurrent use.
class KernelEvaluator {
 public:
  KernelEvaluator(const FamilySpec& fam, const KernelConfig& cfg, double t);

  double operator()(double x, KernelDiagnostics* diag = nullptr) const;
  Construction construction() const { return construction_; }
  double t() const { return t_; }

 private:
  double eval_i(double x) const;
  double eval_ii(double x, KernelDiagnostics* diag) const;
  double eval_iii(double x, KernelDiagnostics* diag) const;

  FamilySpec fam_;
  double t_ = 0.0;
  int series_n_ = 20;
  Construction construction_ = Construction::None;
  std::vector<double> s_;   // quadrature nodes
  std::vector<double> wq_;  // trapezoid weight times omega(s)
  std::vector<double> rw_;  // Construction I: wq * 1/r(ts)
  double eta0_ = 0.0;       // Construction II: exp(theta0)
  double log_h0_ = 0.0;     // Construction II: ln H(eta0)
  double xi0_ = 0.0;        // Construction III
  double shape_ = 1.0;      // Construction III
};

/// K(t,x) for Construction I (location-shift) families.
double kernel_i(double t, double x, const FamilySpec& fam,
                const KernelConfig& cfg);

/// K(t,x) for Construction II (discrete NEF) families; x is a
/// non-negative integer support point.
double kernel_ii(double t, std::int64_t x, const FamilySpec& fam,
                 const KernelConfig& cfg);

/// K(t,x) for Construction III (separable-moment NEF) families. The
/// truncation tail |term_{N+1}| is recorded in diag when provided.
double kernel_iii(double t, double x, const FamilySpec& fam,
                  const KernelConfig& cfg, KernelDiagnostics* diag = nullptr);

/// psi(t, param) = E[K(t,z)] under F_param, in closed form whenever the
/// averaging function is triangular.
double psi_oracle(double t, double param, const FamilySpec& fam,
                  const KernelConfig& cfg);

}  // namespace propphase
