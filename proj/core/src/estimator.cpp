#include "propphase/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "propphase/errors.hpp"

namespace propphase {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_support(const FamilySpec& fam, double z, std::size_t index) {
  if (!std::isfinite(z)) {
    throw SupportError("non-finite data value at index " + std::to_string(index),
                       index);
  }
  switch (construction_for(fam)) {
    case Construction::II:
      if (z < 0.0 || std::floor(z) != z) {
        throw SupportError("value " + std::to_string(z) + " at index " +
                               std::to_string(index) +
                               " is not a non-negative integer (discrete family " +
                               fam.kind_name() + ")",
                           index);
      }
      break;
    case Construction::III:
      if (!(z > 0.0)) {
        throw SupportError("value " + std::to_string(z) + " at index " +
                               std::to_string(index) +
                               " is outside the positive support of " +
                               fam.kind_name(),
                           index);
      }
      break;
    default:
      break;
  }
}

}  // namespace

PhaseEstimate empirical_phase(std::span<const double> z, double t,
                              const FamilySpec& fam, const KernelConfig& cfg) {
  if (z.empty()) throw DomainError("empirical_phase requires at least one value");
  const KernelEvaluator kernel(fam, cfg, t);

  PhaseEstimate out;
  out.t_used = t;
  out.m = z.size();

  KernelDiagnostics diag;
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    check_support(fam, z[i], i);
    double k;
    try {
      k = kernel(z[i], &diag);
    } catch (const KernelOverflowError& e) {
      throw KernelOverflowError(std::string(e.what()) + " (data index " +
                                    std::to_string(i) + ")",
                                e.t(), z[i]);
    }
    sum += 1.0 - k;
  }
  out.pi1_raw = sum / static_cast<double>(z.size());
  out.pi1_clipped = std::min(1.0, std::max(0.0, out.pi1_raw));
  out.pi0_clipped = 1.0 - out.pi1_clipped;
  out.diagnostics.series_tail_max = diag.series_tail_max;
  out.diagnostics.series_tail_warning = diag.series_tail_warning;
  out.diagnostics.kernel_overflow_count = diag.overflow_count;
  return out;
}

double oracle_phase(std::span<const double> params, double t,
                    const FamilySpec& fam, const KernelConfig& cfg) {
  if (params.empty()) throw DomainError("oracle_phase requires at least one parameter");
  double sum = 0.0;
  for (const double p : params) sum += 1.0 - psi_oracle(t, p, fam, cfg);
  return sum / static_cast<double>(params.size());
}

double tuning_t(const FamilySpec& fam, std::size_t m, const TuningRule& rule) {
  if (m < 2) throw DomainError("tuning_t requires m >= 2");
  if (!(rule.gamma > 0.0) || rule.gamma > 1.0) {
    throw DomainError("tuning_t requires gamma in (0,1]");
  }
  const double logm = std::log(static_cast<double>(m));
  switch (fam.kind) {
    case FamilyKind::Gaussian:
      return std::sqrt(2.0 * rule.gamma * logm) / fam.sigma;
    case FamilyKind::HyperbolicSecant:
      return fam.sigma * rule.gamma * logm;
    case FamilyKind::Logistic:
      return rule.gamma * logm / (fam.sigma * kPi);
    case FamilyKind::Cauchy:
      return rule.gamma * logm / fam.sigma;
    case FamilyKind::Laplace:
      return logm;  // gamma does not enter the Laplace schedule
    case FamilyKind::Poisson: {
      if (!rule.eta_sup || !(*rule.eta_sup > 0.0)) {
        throw DomainError("tuning_t: Poisson schedule needs eta_sup > 0");
      }
      return std::pow(*rule.eta_sup, -0.25) * std::sqrt(rule.gamma * logm);
    }
    case FamilyKind::NegativeBinomial:
      // R_H = 1 for the Negative Binomial generating function.
      return 0.5 * rule.gamma * logm;
    case FamilyKind::Gamma: {
      if (!rule.u3 || !(*rule.u3 > 0.0)) {
        throw DomainError("tuning_t: Gamma schedule needs u3 = min(1-theta_i) > 0");
      }
      return 0.25 * rule.gamma * (*rule.u3) * logm;
    }
    case FamilyKind::Binomial:
    case FamilyKind::InverseGaussian:
      throw NoConstructionError(
          std::string("tuning_t: no estimator kernel exists for the ") +
          fam.kind_name() + " family (construction nonexistence)");
    default:
      throw DomainError(std::string("tuning_t: no published schedule for ") +
                        fam.kind_name());
  }
}

double variance_bound(const FamilySpec& fam, double t, std::size_t m,
                      std::span<const double> params, const KernelConfig& cfg) {
  if (m == 0) throw DomainError("variance_bound requires m >= 1");
  const double dm = static_cast<double>(m);
  switch (construction_for(fam)) {
    case Construction::I: {
      // (||omega||_inf^2 / m) * a(t)^2 with a(t) = int 1/r(ts) ds; fully
      // explicit constants, safe to assert against.
      const double a = quadrature(
          [&](double s) { return modulus_reciprocal(fam, t * s); }, cfg);
      const double w = cfg.omega.sup_norm();
      return w * w / dm * a * a;
    }
    case Construction::II: {
      if (params.empty()) {
        throw DomainError("variance_bound: Construction II needs the parameter vector");
      }
      double eta_sup = 0.0;
      double phi_min = std::numeric_limits<double>::infinity();
      double l_min = std::numeric_limits<double>::infinity();
      for (const double th : params) {
        const double eta = std::exp(th);
        eta_sup = std::max(eta_sup, eta);
        const double l = gf_value(fam, eta);
        l_min = std::min(l_min, l);
        phi_min = std::min(phi_min, l * std::pow(eta, 0.25));
      }
      if (fam.kind == FamilyKind::Poisson) {
        return std::exp(t * t * std::sqrt(eta_sup)) / (dm * l_min);
      }
      if (!(t > 0.0)) throw DomainError("variance_bound: Construction II needs t > 0");
      return std::exp(2.0 * t * std::sqrt(eta_sup)) /
             (dm * std::sqrt(t) * phi_min);
    }
    case Construction::III: {
      if (params.empty()) {
        throw DomainError("variance_bound: Construction III needs the parameter vector");
      }
      const double shape =
          fam.kind == FamilyKind::Gamma ? fam.sigma : 1.0;
      double u3 = std::numeric_limits<double>::infinity();
      double tail_sum = 0.0;
      for (const double th : params) {
        // 1/xi(theta): 1-theta for Gamma, the mean itself for Exponential.
        const double inv_xi = fam.kind == FamilyKind::Gamma ? 1.0 - th : th;
        u3 = std::min(u3, inv_xi);
        tail_sum += std::pow(t / inv_xi, 0.75 - shape);
      }
      if (!(u3 > 0.0)) throw DomainError("variance_bound: needs min(1-theta) > 0");
      return std::exp(4.0 * t / u3) * tail_sum / (dm * dm);
    }
    case Construction::None:
      break;
  }
  throw NoConstructionError(
      std::string("variance_bound: no estimator kernel exists for the ") +
      fam.kind_name() + " family (construction nonexistence)");
}

}  // namespace propphase
