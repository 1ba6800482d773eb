#include "propphase/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "propphase/errors.hpp"
#include "propphase/estimator.hpp"
#include "propphase/specialfn.hpp"

namespace propphase {

std::vector<double> pvalues_from_null(std::span<const double> z,
                                      const FamilySpec& fam) {
  std::vector<double> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      throw SupportError("non-finite data value at index " + std::to_string(i),
                         i);
    }
    if (fam.discrete() && (z[i] < 0.0 || std::floor(z[i]) != z[i])) {
      throw SupportError("value at index " + std::to_string(i) +
                             " is not a support point of " + fam.kind_name(),
                         i);
    }
    out.push_back(null_cdf(fam, z[i]));
  }
  return out;
}

double mr_estimate(std::span<const double> pvalues) {
  const std::size_t m = pvalues.size();
  if (m <= 4) throw DomainError("mr_estimate requires m > 4");
  std::vector<double> p(pvalues.begin(), pvalues.end());
  for (const double v : p) {
    if (!(v >= 0.0) || !(v <= 1.0)) {
      throw DomainError("mr_estimate: p-values must lie in [0,1]");
    }
  }
  std::stable_sort(p.begin(), p.end());

  const double dm = static_cast<double>(m);
  const double bm = std::sqrt(2.0 * std::log(std::log(dm))) / std::sqrt(dm);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i + 2 <= m; ++i) {  // 1-based order index 2..m-2
    const double pi = p[i - 1];
    if (pi >= 1.0) continue;  // degenerate denominator, contributes -inf
    const double q =
        (static_cast<double>(i) / dm - pi - bm * std::sqrt(pi * (1.0 - pi))) /
        (1.0 - pi);
    best = std::max(best, q);
  }
  return std::min(1.0, std::max(0.0, best));
}

double hybrid_jin_estimate(std::span<const double> z, const FamilySpec& fam,
                           double gamma, double grid_step) {
  if (z.size() < 2) throw DomainError("hybrid_jin_estimate requires m >= 2");
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw DomainError("hybrid_jin_estimate: grid_step must lie in (0,1]");
  }
  std::vector<double> transformed;
  transformed.reserve(z.size());
  const std::vector<double> pvals = pvalues_from_null(z, fam);
  for (const double p : pvals) {
    const double clamped = std::min(1.0 - 1e-12, std::max(1e-12, p));
    transformed.push_back(std_normal_quantile(clamped));
  }

  FamilySpec normal;
  normal.kind = FamilyKind::Gaussian;
  normal.sigma = 1.0;
  normal.null_param = 0.0;

  KernelConfig cfg;
  int grid_n = static_cast<int>(std::lround(2.0 / grid_step));
  if (grid_n % 2 != 0) ++grid_n;
  cfg.grid_n = std::max(2, grid_n);

  const double t =
      std::sqrt(2.0 * gamma * std::log(static_cast<double>(z.size())));
  return empirical_phase(transformed, t, normal, cfg).pi1_raw;
}

}  // namespace propphase
