#include "propphase/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "propphase/errors.hpp"
#include "propphase/specialfn.hpp"

namespace propphase {

namespace {

constexpr double kLogDblMax = 709.0;

double triangular_density(double s) { return std::max(1.0 - std::fabs(s), 0.0); }

}  // namespace

AveragingFunction AveragingFunction::triangular() {
  AveragingFunction out;
  out.triangular_ = true;
  out.eligible_ = true;
  out.sup_norm_ = 1.0;
  return out;
}

AveragingFunction AveragingFunction::tabulated(std::vector<OmegaNode> nodes) {
  if (nodes.size() < 2) {
    throw DomainError("tabulated averaging function needs at least 2 nodes");
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const OmegaNode& a, const OmegaNode& b) { return a.s < b.s; });
  double mass = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    if (!std::isfinite(nd.s) || nd.s < -1.0 || nd.s > 1.0) {
      throw DomainError("averaging function nodes must lie in [-1,1]");
    }
    if (!std::isfinite(nd.w) || nd.w < 0.0) {
      throw DomainError("averaging function values must be non-negative");
    }
    sup = std::max(sup, nd.w);
    if (i > 0) {
      if (nodes[i].s == nodes[i - 1].s) {
        throw DomainError("averaging function nodes must be distinct");
      }
      mass += 0.5 * (nodes[i].w + nodes[i - 1].w) * (nodes[i].s - nodes[i - 1].s);
    }
  }
  if (std::fabs(mass - 1.0) > 1e-9) {
    throw DomainError("averaging function must integrate to 1 over [-1,1]");
  }
  // Even node sets are eligible; asymmetric ones are merely admissible.
  bool even = true;
  for (const auto& nd : nodes) {
    bool found = false;
    for (const auto& other : nodes) {
      if (std::fabs(other.s + nd.s) < 1e-12 && std::fabs(other.w - nd.w) < 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) {
      even = false;
      break;
    }
  }
  AveragingFunction out;
  out.triangular_ = false;
  out.eligible_ = even;
  out.sup_norm_ = sup;
  out.nodes_ = std::move(nodes);
  return out;
}

double AveragingFunction::operator()(double s) const {
  if (triangular_) return triangular_density(s);
  if (nodes_.empty() || s < nodes_.front().s || s > nodes_.back().s) return 0.0;
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), s,
      [](const OmegaNode& nd, double v) { return nd.s < v; });
  if (it == nodes_.begin()) return it->w;
  const auto hi = it;
  const auto lo = it - 1;
  const double u = (s - lo->s) / (hi->s - lo->s);
  return lo->w + u * (hi->w - lo->w);
}

void KernelConfig::validate() const {
  if (grid_n < 2 || grid_n % 2 != 0) {
    throw DomainError("grid_n must be an even integer >= 2");
  }
  if (series_n < 1) throw DomainError("series_n must be >= 1");
}

double omega_hat_triangular(double u) {
  if (!std::isfinite(u)) throw DomainError("omega_hat_triangular requires finite u");
  const double au = std::fabs(u);
  if (au < 0.1) {
    // 2(1-cos u)/u^2 loses ~u^-2 eps to cancellation; the Taylor series
    // is exact to below 1e-14 on this range.
    const double u2 = u * u;
    return 1.0 - u2 / 12.0 + u2 * u2 / 360.0 - u2 * u2 * u2 / 20160.0;
  }
  return 2.0 * (1.0 - std::cos(u)) / (u * u);
}

double quadrature(const std::function<double(double)>& f,
                  const KernelConfig& cfg) {
  cfg.validate();
  const int n = cfg.grid_n;
  const double h = 2.0 / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = -1.0 + h * i;
    const double v = f(s);
    if (!std::isfinite(v)) {
      throw KernelOverflowError(
          "quadrature: non-finite integrand at node s=" + std::to_string(s), s);
    }
    sum += (i == 0 || i == n) ? 0.5 * v : v;
  }
  return sum * h;
}

KernelEvaluator::KernelEvaluator(const FamilySpec& fam, const KernelConfig& cfg,
                                 double t)
    : fam_(fam), t_(t), series_n_(cfg.series_n) {
  cfg.validate();
  fam.validate();
  construction_ = construction_for(fam);
  if (construction_ == Construction::None) {
    throw NoConstructionError(
        std::string("kernel: no estimator kernel exists for the ") +
        fam.kind_name() + " family (construction nonexistence)");
  }
  if (construction_ != Construction::I && t < 0.0) {
    throw DomainError("kernel: t must be non-negative");
  }
  if (!std::isfinite(t)) throw DomainError("kernel: t must be finite");

  const int n = cfg.grid_n;
  const double h = 2.0 / n;
  s_.resize(n + 1);
  wq_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = -1.0 + h * i;
    s_[i] = s;
    const double w = (i == 0 || i == n) ? 0.5 * h : h;
    wq_[i] = w * cfg.omega(s);
  }

  switch (construction_) {
    case Construction::I: {
      rw_.resize(n + 1);
      for (int i = 0; i <= n; ++i) {
        const double rinv = modulus_reciprocal(fam_, t_ * s_[i]);
        if (!std::isfinite(rinv)) {
          throw KernelOverflowError(
              "kernel I: modulus reciprocal overflowed at t=" +
                  std::to_string(t_),
              t_);
        }
        rw_[i] = wq_[i] * rinv;
      }
      break;
    }
    case Construction::II: {
      eta0_ = std::exp(fam_.null_param);
      log_h0_ = std::log(gf_value(fam_, eta0_));
      break;
    }
    case Construction::III: {
      const SeparableMoments sm = separable_moment_data(fam_, fam_.null_param);
      xi0_ = sm.xi;
      shape_ = sm.shape;
      break;
    }
    case Construction::None:
      break;
  }
}

double KernelEvaluator::eval_i(double x) const {
  const double arg = x - fam_.null_param;
  double sum = 0.0;
  const std::size_t n = s_.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum += rw_[i] * std::cos(t_ * s_[i] * arg);
  }
  return sum;
}

double KernelEvaluator::eval_ii(double x, KernelDiagnostics* /*diag*/) const {
  if (x < 0.0 || std::floor(x) != x) {
    throw DomainError("kernel II: x must be a non-negative integer");
  }
  const std::int64_t k = static_cast<std::int64_t>(x);
  const double lg_hk = log_gf_derivative(fam_, static_cast<int>(k));
  // Largest log magnitude occurs at |s| = 1.
  if (k > 0 && t_ > 0.0) {
    const double peak = k * std::log(t_) - lg_hk + log_h0_;
    if (peak > kLogDblMax) {
      throw KernelOverflowError(
          "kernel II: magnitude overflows double range at x=" +
              std::to_string(k) + ", t=" + std::to_string(t_),
          t_, x);
    }
  }
  const int quadrant = static_cast<int>(k % 4);
  double sum = 0.0;
  const std::size_t n = s_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = t_ * s_[i];
    double val;
    if (u == 0.0) {
      val = (k == 0) ? 1.0 : 0.0;  // (ts)^0 := 1 at ts = 0
    } else {
      const double mag = std::exp(k * std::log(std::fabs(u)) - lg_hk);
      const double sign = (u < 0.0 && (k & 1)) ? -1.0 : 1.0;
      const double v = u * eta0_;
      // cos(pi k/2 - v) by quadrant of k
      double c;
      switch (quadrant) {
        case 0: c = std::cos(v); break;
        case 1: c = std::sin(v); break;
        case 2: c = -std::cos(v); break;
        default: c = -std::sin(v); break;
      }
      val = sign * mag * c;
    }
    sum += wq_[i] * val;
  }
  return std::exp(log_h0_) * sum;
}

double KernelEvaluator::eval_iii(double x, KernelDiagnostics* diag) const {
  if (!(x > 0.0)) throw DomainError("kernel III: x must be positive");
  double sum = 0.0;
  double tail_max = 0.0;
  const std::size_t n = s_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s_[i];
    const double a = t_ * s * xi0_;
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    const double ratio_base = -t_ * s * x;
    double term = 1.0;
    double acc = 0.0;
    for (int m = 0; m <= series_n_; ++m) {
      double c;
      switch (m & 3) {
        case 0: c = ca; break;
        case 1: c = -sa; break;
        case 2: c = -ca; break;
        default: c = sa; break;
      }
      acc += term * c;
      term *= ratio_base / ((m + 1.0) * (shape_ + m));
    }
    tail_max = std::max(tail_max, std::fabs(term));
    sum += wq_[i] * acc;
  }
  if (diag) {
    diag->series_tail_max = std::max(diag->series_tail_max, tail_max);
    if (tail_max > 1e-3 * std::fabs(sum)) diag->series_tail_warning = true;
  }
  return sum;
}

double KernelEvaluator::operator()(double x, KernelDiagnostics* diag) const {
  switch (construction_) {
    case Construction::I: return eval_i(x);
    case Construction::II: return eval_ii(x, diag);
    case Construction::III: return eval_iii(x, diag);
    case Construction::None: break;
  }
  throw NoConstructionError("kernel: no construction");  // unreachable
}

namespace {

void require_kernel_construction(const FamilySpec& fam, Construction want,
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

double kernel_i(double t, double x, const FamilySpec& fam,
                const KernelConfig& cfg) {
  require_kernel_construction(fam, Construction::I, "kernel_i");
  return KernelEvaluator(fam, cfg, t)(x);
}

double kernel_ii(double t, std::int64_t x, const FamilySpec& fam,
                 const KernelConfig& cfg) {
  require_kernel_construction(fam, Construction::II, "kernel_ii");
  if (x < 0) throw DomainError("kernel II: x must be a non-negative integer");
  return KernelEvaluator(fam, cfg, t)(static_cast<double>(x));
}

double kernel_iii(double t, double x, const FamilySpec& fam,
                  const KernelConfig& cfg, KernelDiagnostics* diag) {
  require_kernel_construction(fam, Construction::III, "kernel_iii");
  return KernelEvaluator(fam, cfg, t)(x, diag);
}

namespace {

// Cosine transform of omega at argument u; exact 1 at u = 0 by the unit
// mass of any admissible omega.
double omega_transform(double u, const KernelConfig& cfg) {
  if (u == 0.0) return 1.0;
  if (cfg.omega.triangular_form()) return omega_hat_triangular(u);
  return quadrature([&](double s) { return cfg.omega(s) * std::cos(u * s); },
                    cfg);
}

}  // namespace

double psi_oracle(double t, double param, const FamilySpec& fam,
                  const KernelConfig& cfg) {
  cfg.validate();
  fam.validate();
  switch (construction_for(fam)) {
    case Construction::I:
      return omega_transform(t * (param - fam.null_param), cfg);
    case Construction::II: {
      const double eta0 = std::exp(fam.null_param);
      const double eta = std::exp(param);
      const double ratio = gf_value(fam, eta0) / gf_value(fam, eta);
      return ratio * omega_transform(t * (eta - eta0), cfg);
    }
    case Construction::III: {
      const double xi0 = separable_moment_data(fam, fam.null_param).xi;
      const double xi = separable_moment_data(fam, param).xi;
      return omega_transform(t * (xi0 - xi), cfg);
    }
    case Construction::None:
      break;
  }
  throw NoConstructionError(
      std::string("psi_oracle: no estimator kernel exists for the ") +
      fam.kind_name() + " family (construction nonexistence)");
}

}  // namespace propphase
