#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "propphase/families.hpp"
#include "propphase/kernels.hpp"

namespace propphase {

struct PhaseDiagnostics {
  int kernel_overflow_count = 0;
  double series_tail_max = 0.0;
  bool series_tail_warning = false;
};

/// The empirical phase function evaluated at one t: the raw estimate of
/// the alternative proportion plus its [0,1]-clipped version.
struct PhaseEstimate {
  double pi1_raw = 0.0;
  double pi1_clipped = 0.0;
  double pi0_clipped = 1.0;
  double t_used = 0.0;
  std::size_t m = 0;
  PhaseDiagnostics diagnostics;
};

/// Published tuning schedules take gamma in (0,1]; the Poisson schedule
/// additionally needs the sup norm of eta over the parameter vector and
/// the Gamma schedule needs min_i(1 - theta_i).
struct TuningRule {
  double gamma = 1.0;
  std::optional<double> eta_sup;
  std::optional<double> u3;
};

/// phi_hat_m(t,z) = (1/m) sum_i {1 - K(t, z_i)}.
PhaseEstimate empirical_phase(std::span<const double> z, double t,
                              const FamilySpec& fam, const KernelConfig& cfg);

/// phi_m(t, params) = (1/m) sum_i {1 - psi(t, param_i)}; the expectation
/// of the empirical phase function.
double oracle_phase(std::span<const double> params, double t,
                    const FamilySpec& fam, const KernelConfig& cfg);

/// Theorem-prescribed growth schedule t_m for the family.
double tuning_t(const FamilySpec& fam, std::size_t m, const TuningRule& rule);

/// Upper bound on Var(phi_hat - phi). Fully explicit for Construction I;
/// Constructions II/III carry an unspecified constant fixed to 1 and are
/// diagnostic only.
double variance_bound(const FamilySpec& fam, double t, std::size_t m,
                      std::span<const double> params, const KernelConfig& cfg);

}  // namespace propphase
