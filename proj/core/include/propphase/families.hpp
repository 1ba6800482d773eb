#pragma once

#include <string>
#include <string_view>

#include "propphase/rng.hpp"

namespace propphase {

enum class FamilyKind {
  Gaussian,
  Laplace,
  Cauchy,
  Logistic,
  HyperbolicSecant,
  Poisson,
  NegativeBinomial,
  StrictArcsine,
  LargeArcsine,
  Abel,
  Takacs,
  Gamma,
  Exponential,
  Binomial,
  InverseGaussian,
};

/// Which kernel construction a family belongs to. None means the kernel
/// is proven not to exist and every estimator path must reject the family.
enum class Construction { I, II, III, None };

/// A distribution family with fixed shape parameters and its null
/// parameter: location mu0 for Construction I kinds, natural parameter
/// theta0 for NEF kinds, mean mu0 for the Exponential family.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Gaussian;
  double null_param = 0.0;
  double sigma = 1.0;  // scale (Construction I, InverseGaussian) or Gamma shape
  int n = 1;           // NegativeBinomial / Binomial count

  /// Parses "kind key=value ..." as accepted by the CLI, e.g.
  /// "gaussian sigma=1 null=0", "negbinomial n=5 null=-4.5",
  /// "gamma sigma=6 null=0.5". Throws ConfigError / DomainError.
  static FamilySpec parse(std::string_view text);

  /// Canonical round-trippable form of the same grammar.
  std::string to_string() const;

  const char* kind_name() const;

  /// Throws DomainError when a parameter is outside the family's domain.
  void validate() const;

  bool has_sigma() const;
  bool has_n() const;
  bool discrete() const;
};

Construction construction_for(const FamilySpec& fam);

/// 1/r(t) for Construction I kinds: the reciprocal modulus of the null
/// characteristic function. Even in t, equals 1 at t = 0.
double modulus_reciprocal(const FamilySpec& fam, double t);

/// Null phase y * mu0 of a location-shift characteristic function.
double phase_offset(const FamilySpec& fam, double y);

/// ln H^(k)(0) = ln(c_k k!) for Construction II kinds, computed in log
/// space so the arcsine families stay finite past k ~ 150.
double log_gf_derivative(const FamilySpec& fam, int k);

/// Generating function H(eta) for Construction II kinds, 0 < eta < R_H.
/// Abel and the arcsine families are evaluated from their defining power
/// series with relative tail below 1e-12.
double gf_value(const FamilySpec& fam, double eta);

/// Radius of convergence R_H of the generating function (infinity for
/// Poisson).
double gf_radius(const FamilySpec& fam);

/// Separable-moment data for Construction III kinds: moments factor as
/// xi^n(theta) * a_n with a_n = Gamma(n+shape)/Gamma(shape).
struct SeparableMoments {
  double xi = 0.0;
  double shape = 1.0;
  double log_a(int n) const;
};
SeparableMoments separable_moment_data(const FamilySpec& fam, double theta);

/// Null CDF F0(x). Discrete families evaluate the right-continuous step
/// function at floor(x).
double null_cdf(const FamilySpec& fam, double x);

/// One draw from F_param (location for Construction I kinds, natural
/// parameter for NEF kinds, mean for Exponential).
double sample(const FamilySpec& fam, double param, RandomStream& rng);

}  // namespace propphase
