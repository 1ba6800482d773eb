#include "propphase/families.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "propphase/errors.hpp"
#include "propphase/specialfn.hpp"

namespace propphase {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_number(std::string_view text, const std::string& key) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("family parameter '" + key + "' is not a number: '" +
                      std::string(text) + "'");
  }
  return value;
}

// shortest decimal form that parses back to the same double
std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// log c*_k(sigma), the arcsine coefficient products.
double log_cstar(int k, double sigma) {
  if (k == 0) return 0.0;
  const double s2 = sigma * sigma;
  double acc = 0.0;
  if (k % 2 == 0) {
    const int half = k / 2;
    for (int j = 0; j < half; ++j) acc += std::log(s2 + 4.0 * j * j);
  } else {
    const int half = (k - 1) / 2;
    acc = std::log(sigma);
    for (int j = 0; j < half; ++j) {
      const double odd = 2.0 * j + 1.0;
      acc += std::log(s2 + odd * odd);
    }
  }
  return acc;
}

}  // namespace

const char* FamilySpec::kind_name() const {
  switch (kind) {
    case FamilyKind::Gaussian: return "gaussian";
    case FamilyKind::Laplace: return "laplace";
    case FamilyKind::Cauchy: return "cauchy";
    case FamilyKind::Logistic: return "logistic";
    case FamilyKind::HyperbolicSecant: return "hsecant";
    case FamilyKind::Poisson: return "poisson";
    case FamilyKind::NegativeBinomial: return "negbinomial";
    case FamilyKind::StrictArcsine: return "strictarcsine";
    case FamilyKind::LargeArcsine: return "largearcsine";
    case FamilyKind::Abel: return "abel";
    case FamilyKind::Takacs: return "takacs";
    case FamilyKind::Gamma: return "gamma";
    case FamilyKind::Exponential: return "exponential";
    case FamilyKind::Binomial: return "binomial";
    case FamilyKind::InverseGaussian: return "invgaussian";
  }
  return "?";
}

bool FamilySpec::has_sigma() const {
  switch (kind) {
    case FamilyKind::Gaussian:
    case FamilyKind::Laplace:
    case FamilyKind::Cauchy:
    case FamilyKind::Logistic:
    case FamilyKind::HyperbolicSecant:
    case FamilyKind::Gamma:
    case FamilyKind::InverseGaussian:
      return true;
    default:
      return false;
  }
}

bool FamilySpec::has_n() const {
  return kind == FamilyKind::NegativeBinomial || kind == FamilyKind::Binomial;
}

bool FamilySpec::discrete() const {
  switch (kind) {
    case FamilyKind::Poisson:
    case FamilyKind::NegativeBinomial:
    case FamilyKind::StrictArcsine:
    case FamilyKind::LargeArcsine:
    case FamilyKind::Abel:
    case FamilyKind::Takacs:
    case FamilyKind::Binomial:
      return true;
    default:
      return false;
  }
}

FamilySpec FamilySpec::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  if (!(in >> token)) throw ConfigError("empty family specification");

  FamilySpec fam;
  const std::string name = lower(token);
  if (name == "gaussian" || name == "normal") {
    fam.kind = FamilyKind::Gaussian;
  } else if (name == "laplace") {
    fam.kind = FamilyKind::Laplace;
  } else if (name == "cauchy") {
    fam.kind = FamilyKind::Cauchy;
  } else if (name == "logistic") {
    fam.kind = FamilyKind::Logistic;
  } else if (name == "hsecant" || name == "hyperbolicsecant") {
    fam.kind = FamilyKind::HyperbolicSecant;
  } else if (name == "poisson") {
    fam.kind = FamilyKind::Poisson;
  } else if (name == "negbinomial" || name == "negbin" ||
             name == "negativebinomial") {
    fam.kind = FamilyKind::NegativeBinomial;
  } else if (name == "strictarcsine") {
    fam.kind = FamilyKind::StrictArcsine;
  } else if (name == "largearcsine") {
    fam.kind = FamilyKind::LargeArcsine;
  } else if (name == "abel") {
    fam.kind = FamilyKind::Abel;
  } else if (name == "takacs") {
    fam.kind = FamilyKind::Takacs;
  } else if (name == "gamma") {
    fam.kind = FamilyKind::Gamma;
  } else if (name == "exponential") {
    fam.kind = FamilyKind::Exponential;
  } else if (name == "binomial") {
    fam.kind = FamilyKind::Binomial;
  } else if (name == "invgaussian" || name == "inversegaussian") {
    fam.kind = FamilyKind::InverseGaussian;
  } else {
    throw ConfigError("unknown family kind '" + name + "'");
  }

  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key=value in family specification, got '" +
                        token + "'");
    }
    const std::string key = lower(token.substr(0, eq));
    const std::string_view value = std::string_view(token).substr(eq + 1);
    if (key == "sigma") {
      if (!fam.has_sigma()) {
        throw ConfigError(std::string(fam.kind_name()) +
                          " does not take a sigma parameter");
      }
      fam.sigma = parse_number(value, key);
    } else if (key == "n") {
      if (!fam.has_n()) {
        throw ConfigError(std::string(fam.kind_name()) +
                          " does not take an n parameter");
      }
      const double v = parse_number(value, key);
      if (v != std::floor(v)) throw ConfigError("family parameter 'n' must be an integer");
      fam.n = static_cast<int>(v);
    } else if (key == "null") {
      fam.null_param = parse_number(value, key);
    } else {
      throw ConfigError("unknown family parameter '" + key + "'");
    }
  }
  fam.validate();
  return fam;
}

std::string FamilySpec::to_string() const {
  std::string out = kind_name();
  if (has_sigma()) out += " sigma=" + format_number(sigma);
  if (has_n()) out += " n=" + std::to_string(n);
  out += " null=" + format_number(null_param);
  return out;
}

void FamilySpec::validate() const {
  if (!std::isfinite(null_param)) throw DomainError("null parameter must be finite");
  if (has_sigma() && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw DomainError(std::string(kind_name()) + ": sigma must be positive");
  }
  if (has_n() && n < 1) {
    throw DomainError(std::string(kind_name()) + ": n must be >= 1");
  }
  switch (kind) {
    case FamilyKind::NegativeBinomial:
      if (!(null_param < 0.0)) throw DomainError("negbinomial: null theta must be < 0");
      break;
    case FamilyKind::Gamma:
      if (!(null_param < 1.0)) throw DomainError("gamma: null theta must be < 1");
      break;
    case FamilyKind::Exponential:
      if (!(null_param > 0.0)) throw DomainError("exponential: null mean must be > 0");
      break;
    case FamilyKind::StrictArcsine:
    case FamilyKind::LargeArcsine:
    case FamilyKind::Abel:
    case FamilyKind::Takacs:
      if (!(std::exp(null_param) < gf_radius(*this))) {
        throw DomainError(std::string(kind_name()) +
                          ": null theta must satisfy exp(theta) < R_H");
      }
      break;
    default:
      break;
  }
}

Construction construction_for(const FamilySpec& fam) {
  switch (fam.kind) {
    case FamilyKind::Gaussian:
    case FamilyKind::Laplace:
    case FamilyKind::Cauchy:
    case FamilyKind::Logistic:
    case FamilyKind::HyperbolicSecant:
      return Construction::I;
    case FamilyKind::Poisson:
    case FamilyKind::NegativeBinomial:
    case FamilyKind::StrictArcsine:
    case FamilyKind::LargeArcsine:
    case FamilyKind::Abel:
    case FamilyKind::Takacs:
      return Construction::II;
    case FamilyKind::Gamma:
    case FamilyKind::Exponential:
      return Construction::III;
    case FamilyKind::Binomial:
    case FamilyKind::InverseGaussian:
      return Construction::None;
  }
  return Construction::None;
}

namespace {

void require_construction(const FamilySpec& fam, Construction want,
                          const char* op) {
  const Construction got = construction_for(fam);
  if (got == Construction::None) {
    throw NoConstructionError(
        std::string(op) + ": no estimator kernel exists for the " +
        fam.kind_name() + " family (construction nonexistence)");
  }
  if (got != want) {
    throw ConstructionMismatchError(std::string(op) + ": family " +
                                    fam.kind_name() +
                                    " belongs to a different construction");
  }
}

}  // namespace

double modulus_reciprocal(const FamilySpec& fam, double t) {
  require_construction(fam, Construction::I, "modulus_reciprocal");
  switch (fam.kind) {
    case FamilyKind::Gaussian:
      return std::exp(0.5 * t * t * fam.sigma * fam.sigma);
    case FamilyKind::Laplace:
      return 1.0 + fam.sigma * fam.sigma * t * t;
    case FamilyKind::Cauchy:
      return std::exp(fam.sigma * std::fabs(t));
    case FamilyKind::Logistic: {
      const double u = kPi * fam.sigma * t;
      if (std::fabs(u) < 1e-8) return 1.0 + u * u / 6.0;
      return std::sinh(u) / u;
    }
    case FamilyKind::HyperbolicSecant:
      // Normalized so the value at t = 0 is 1.
      return std::cosh(t / fam.sigma);
    default:
      return 1.0;  // unreachable
  }
}

double phase_offset(const FamilySpec& fam, double y) {
  require_construction(fam, Construction::I, "phase_offset");
  return y * fam.null_param;
}

double log_gf_derivative(const FamilySpec& fam, int k) {
  require_construction(fam, Construction::II, "log_gf_derivative");
  if (k < 0) throw DomainError("log_gf_derivative requires k >= 0");
  switch (fam.kind) {
    case FamilyKind::Poisson:
      return 0.0;
    case FamilyKind::NegativeBinomial:
      return log_gamma(static_cast<double>(k) + fam.n) - log_gamma(fam.n);
    case FamilyKind::Abel:
      // c_k k! = (1+k)^(k-1)
      return (k - 1.0) * std::log1p(static_cast<double>(k));
    case FamilyKind::Takacs:
      // c_k k! = (2k)!/(k+1)!, with c_0 = 1
      if (k == 0) return 0.0;
      return log_gamma(2.0 * k + 1.0) - log_gamma(k + 2.0);
    case FamilyKind::StrictArcsine:
      return log_cstar(k, 1.0);
    case FamilyKind::LargeArcsine:
      // c_k k! = c*_k(1+k) / (k+1)
      return log_cstar(k, 1.0 + k) - std::log1p(static_cast<double>(k));
    default:
      return 0.0;  // unreachable
  }
}

double gf_radius(const FamilySpec& fam) {
  switch (fam.kind) {
    case FamilyKind::Poisson: return kInf;
    case FamilyKind::NegativeBinomial: return 1.0;
    case FamilyKind::Abel: return std::exp(-1.0);
    case FamilyKind::Takacs: return 0.25;
    case FamilyKind::StrictArcsine: return 1.0;
    case FamilyKind::LargeArcsine:
      // Branch point of H = exp(asin(z H)): z = w e^{-asin w} at w = 1/sqrt(2).
      return std::exp(-kPi / 4.0) / std::sqrt(2.0);
    default:
      throw ConstructionMismatchError(
          std::string("gf_radius: family ") + fam.kind_name() +
          " has no generating function");
  }
}

namespace {

// Sum of the defining power series sum_k c_k eta^k with c_k recovered
// from ln(c_k k!); used for the families without a workable closed form.
double gf_series(const FamilySpec& fam, double eta) {
  const Accuracy acc{};
  const double log_eta = std::log(eta);
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double term =
        std::exp(log_gf_derivative(fam, k) - log_gamma(k + 1.0) + k * log_eta);
    sum += term;
    if (k > 8 && term < acc.rel_tol * sum) break;
    if (k > 200000) {
      throw DomainError("gf_value series failed to converge; eta too close to R_H");
    }
  }
  return sum;
}

}  // namespace

double gf_value(const FamilySpec& fam, double eta) {
  require_construction(fam, Construction::II, "gf_value");
  const double radius = gf_radius(fam);
  if (!(eta > 0.0) || !(eta < radius)) {
    throw DomainError(std::string("gf_value: eta outside (0, R_H) for ") +
                      fam.kind_name());
  }
  switch (fam.kind) {
    case FamilyKind::Poisson:
      return std::exp(eta);
    case FamilyKind::NegativeBinomial:
      return std::pow(1.0 - eta, -static_cast<double>(fam.n));
    case FamilyKind::Takacs: {
      if (eta < 1e-5) return 1.0 + eta + 2.0 * eta * eta + 5.0 * eta * eta * eta;
      return (1.0 - std::sqrt(1.0 - 4.0 * eta)) / (2.0 * eta);
    }
    case FamilyKind::Abel:
    case FamilyKind::StrictArcsine:
    case FamilyKind::LargeArcsine:
      return gf_series(fam, eta);
    default:
      return 0.0;  // unreachable
  }
}

double SeparableMoments::log_a(int n) const {
  if (n < 0) throw DomainError("separable moment index must be >= 0");
  return log_gamma(n + shape) - log_gamma(shape);
}

SeparableMoments separable_moment_data(const FamilySpec& fam, double theta) {
  require_construction(fam, Construction::III, "separable_moment_data");
  SeparableMoments out;
  if (fam.kind == FamilyKind::Gamma) {
    if (!(theta < 1.0)) throw DomainError("gamma: theta must be < 1");
    out.xi = 1.0 / (1.0 - theta);
    out.shape = fam.sigma;
  } else {  // Exponential, parametrized by its mean
    if (!(theta > 0.0)) throw DomainError("exponential: mean must be > 0");
    out.xi = 1.0 / theta;
    out.shape = 1.0;
  }
  return out;
}

double null_cdf(const FamilySpec& fam, double x) {
  if (!std::isfinite(x)) throw DomainError("null_cdf requires finite x");
  const double mu0 = fam.null_param;
  switch (fam.kind) {
    case FamilyKind::Gaussian:
      return std_normal_cdf((x - mu0) / fam.sigma);
    case FamilyKind::Laplace: {
      const double u = (x - mu0) / fam.sigma;
      return u < 0.0 ? 0.5 * std::exp(u) : 1.0 - 0.5 * std::exp(-u);
    }
    case FamilyKind::Cauchy:
      return 0.5 + std::atan((x - mu0) / fam.sigma) / kPi;
    case FamilyKind::Logistic:
      return 1.0 / (1.0 + std::exp(-(x - mu0) / fam.sigma));
    case FamilyKind::HyperbolicSecant:
      return 2.0 / kPi * std::atan(std::exp(0.5 * kPi * fam.sigma * (x - mu0)));
    case FamilyKind::Poisson: {
      if (x < 0.0) return 0.0;
      const double k = std::floor(x);
      return 1.0 - reg_gamma_lower(k + 1.0, std::exp(mu0));
    }
    case FamilyKind::NegativeBinomial: {
      if (x < 0.0) return 0.0;
      const double k = std::floor(x);
      const double eta = std::exp(mu0);
      return reg_beta(1.0 - eta, static_cast<double>(fam.n), k + 1.0);
    }
    case FamilyKind::Gamma:
      if (x <= 0.0) return 0.0;
      return reg_gamma_lower(fam.sigma, (1.0 - mu0) * x);
    case FamilyKind::Exponential:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-x / mu0);
    default:
      throw DomainError(std::string("null_cdf: no CDF implemented for ") +
                        fam.kind_name());
  }
}

namespace {

// Marsaglia-Tsang squeeze; shape boost below 1 keeps it valid for all
// shape > 0. Scale is applied by the caller.
double gamma_variate(double shape, RandomStream& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform01();
    return gamma_variate(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double poisson_inversion(double mean, RandomStream& rng) {
  const double target = rng.uniform01();
  double k = 0.0;
  double p = std::exp(-mean);
  double cdf = p;
  while (target > cdf) {
    k += 1.0;
    p *= mean / k;
    cdf += p;
    if (k > 1e7) break;  // numerically impossible for mean <= 30
  }
  return k;
}

// Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
double poisson_ptrs(double mean, RandomStream& rng) {
  const double slam = std::sqrt(mean);
  const double llam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * llam - mean - log_gamma(k + 1.0)) {
      return k;
    }
  }
}

}  // namespace

double sample(const FamilySpec& fam, double param, RandomStream& rng) {
  if (!std::isfinite(param)) throw DomainError("sample requires a finite parameter");
  switch (fam.kind) {
    case FamilyKind::Gaussian:
      return param + fam.sigma * rng.normal();
    case FamilyKind::Laplace: {
      const double u = rng.uniform01();
      return u < 0.5 ? param + fam.sigma * std::log(2.0 * u)
                     : param - fam.sigma * std::log(2.0 * (1.0 - u));
    }
    case FamilyKind::Cauchy:
      return param + fam.sigma * std::tan(kPi * (rng.uniform01() - 0.5));
    case FamilyKind::Logistic: {
      const double u = rng.uniform01();
      return param + fam.sigma * std::log(u / (1.0 - u));
    }
    case FamilyKind::HyperbolicSecant: {
      const double u = rng.uniform01();
      return param + 2.0 / (kPi * fam.sigma) * std::log(std::tan(0.5 * kPi * u));
    }
    case FamilyKind::Poisson: {
      const double mean = std::exp(param);
      return mean <= 30.0 ? poisson_inversion(mean, rng)
                          : poisson_ptrs(mean, rng);
    }
    case FamilyKind::NegativeBinomial: {
      if (!(param < 0.0)) throw DomainError("negbinomial: theta must be < 0");
      const double eta = std::exp(param);
      const double mixed_mean =
          gamma_variate(static_cast<double>(fam.n), rng) * eta / (1.0 - eta);
      return mixed_mean <= 30.0 ? poisson_inversion(mixed_mean, rng)
                                : poisson_ptrs(mixed_mean, rng);
    }
    case FamilyKind::Gamma: {
      if (!(param < 1.0)) throw DomainError("gamma: theta must be < 1");
      return gamma_variate(fam.sigma, rng) / (1.0 - param);
    }
    case FamilyKind::Exponential: {
      if (!(param > 0.0)) throw DomainError("exponential: mean must be > 0");
      return -param * std::log(rng.uniform01());
    }
    default:
      throw DomainError(std::string("sample: no sampler for ") +
                        fam.kind_name());
  }
}

}  // namespace propphase
