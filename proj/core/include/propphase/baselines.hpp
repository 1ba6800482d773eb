#pragma once

#include <span>
#include <vector>

#include "propphase/families.hpp"

namespace propphase {

/// Left-tail p-values p_i = F0(z_i) under the family's null CDF.
std::vector<double> pvalues_from_null(std::span<const double> z,
                                      const FamilySpec& fam);

/// Meinshausen-Rice bounding estimator on ordered p-values:
///   q_i = (1-p_(i))^{-1} { i/m - p_(i) - b_m sqrt(p_(i)(1-p_(i))) },
///   b_m = m^{-1/2} sqrt(2 ln ln m),  pi1_hat = clip(max_{2<=i<=m-2} q_i).
/// Ordered values equal to 1 are skipped (their q is -inf). Needs m > 4.
double mr_estimate(std::span<const double> pvalues);

/// Probability-integral transform z -> Phi^{-1}(F0(z)) followed by the
/// Gaussian construction with t = sqrt(2 gamma ln m) on a quadrature grid
/// of subintervals of length grid_step. CDF values are clamped to
/// [1e-12, 1-1e-12] before inversion so discrete ties stay finite.
/// Returns the raw (unclipped) phase estimate.
double hybrid_jin_estimate(std::span<const double> z, const FamilySpec& fam,
                           double gamma = 0.5, double grid_step = 0.01);

}  // namespace propphase
