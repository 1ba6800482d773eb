// Acceptance suite: runs every adoption criterion for the library at its
// stated tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "propphase/baselines.hpp"
#include "propphase/errors.hpp"
#include "propphase/estimator.hpp"
#include "propphase/families.hpp"
#include "propphase/kernels.hpp"
#include "propphase/sim.hpp"
#include "propphase/specialfn.hpp"

using namespace propphase;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  ++g_index;
  std::printf("[%2d/10] %s  %s: %s\n", g_index, pass ? "PASS" : "FAIL",
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

FamilySpec make(FamilyKind kind, double null, double sigma = 1.0, int n = 1) {
  FamilySpec fam;
  fam.kind = kind;
  fam.null_param = null;
  fam.sigma = sigma;
  fam.n = n;
  return fam;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double log_pmf(FamilyKind kind, int n, double theta, int k) {
  const double eta = std::exp(theta);
  if (kind == FamilyKind::Poisson) {
    return -eta + k * std::log(eta) - log_gamma(k + 1.0);
  }
  return log_gamma(k + double(n)) - log_gamma(double(n)) - log_gamma(k + 1.0) +
         k * std::log(eta) + n * std::log1p(-eta);
}

// 1. Integral-equation identity, discrete and exact:
//    sum_k K_II(t,k) pmf_theta(k) = psi(t,theta) within 1e-4 on a 3x3
//    (theta, t) grid per family, t <= 5, pmf tail < 1e-12. Under 10 s.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelConfig cfg;
  double worst = 0.0;
  struct Case {
    FamilySpec fam;
    std::vector<double> thetas;
  };
  const std::vector<Case> cases = {
      {make(FamilyKind::Poisson, 0.08), {0.02, 0.08, 0.5}},
      {make(FamilyKind::NegativeBinomial, -4.5, 1.0, 5), {-5.5, -4.5, -2.5}},
  };
  for (const auto& c : cases) {
    for (const double theta : c.thetas) {
      for (const double t : {0.5, 2.0, 5.0}) {
        const KernelEvaluator kernel(c.fam, cfg, t);
        double total = 0.0;
        double cum = 0.0;
        for (int k = 0; k < 500; ++k) {
          const double pmf = std::exp(log_pmf(c.fam.kind, c.fam.n, theta, k));
          const double term = kernel(k) * pmf;
          total += term;
          cum += pmf;
          if (k > 5 && 1.0 - cum < 1e-12 && std::fabs(term) < 1e-15) break;
        }
        worst = std::max(worst,
                         std::fabs(total - psi_oracle(t, theta, c.fam, cfg)));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(worst <= 1e-4 && elapsed < 10.0, "integral identity (discrete, exact)",
         fmt("max|sum K pmf - psi| = %.2e (tol 1e-4), %.1f s (limit 10 s)",
             worst, elapsed));
}

// 2. Integral-equation identity, continuous Monte Carlo: mean kernel over
//    1e5 seeded draws within 5 standard errors of psi at 3 (t, param)
//    points per family; Construction III at series_n = 60. Under 60 s.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Point {
    FamilySpec fam;
    double t;
    double param;
    int series_n;
  };
  const std::vector<Point> points = {
      {make(FamilyKind::Gaussian, 0.0), 1.0, 0.5, 20},
      {make(FamilyKind::Gaussian, 0.0), 2.0, 1.0, 20},
      {make(FamilyKind::Gaussian, 0.0), 3.0, 0.5, 20},
      {make(FamilyKind::Laplace, 0.0), 2.0, 1.0, 20},
      {make(FamilyKind::Laplace, 0.0), 4.0, 0.75, 20},
      {make(FamilyKind::Laplace, 0.0), 7.0, 2.0, 20},
      {make(FamilyKind::Cauchy, 0.0), 1.0, 1.0, 20},
      {make(FamilyKind::Cauchy, 0.0), 2.0, 2.0, 20},
      {make(FamilyKind::Cauchy, 0.0), 3.0, 1.0, 20},
      {make(FamilyKind::Logistic, 0.0), 0.5, 1.0, 20},
      {make(FamilyKind::Logistic, 0.0), 1.0, 2.0, 20},
      {make(FamilyKind::Logistic, 0.0), 1.5, 0.5, 20},
      {make(FamilyKind::HyperbolicSecant, 0.0), 1.0, 0.5, 20},
      {make(FamilyKind::HyperbolicSecant, 0.0), 3.0, 1.0, 20},
      {make(FamilyKind::HyperbolicSecant, 0.0), 5.0, 1.0, 20},
      {make(FamilyKind::Gamma, 0.5, 6.0), 0.5, 0.6, 60},
      {make(FamilyKind::Gamma, 0.5, 6.0), 1.0, 0.35, 60},
      {make(FamilyKind::Gamma, 0.5, 6.0), 2.0, 0.6, 60},
  };
  const int n = 100000;
  bool all = true;
  double worst_sigmas = 0.0;
  std::uint64_t seed = 90210;
  for (const auto& pt : points) {
    KernelConfig cfg;
    cfg.series_n = pt.series_n;
    const KernelEvaluator kernel(pt.fam, cfg, pt.t);
    RandomStream rng(seed++);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = kernel(sample(pt.fam, pt.param, rng));
      sum += k;
      sum2 += k * k;
    }
    const double mean = sum / n;
    const double var = (sum2 - n * mean * mean) / (n - 1);
    const double se = std::sqrt(var / n);
    const double psi = psi_oracle(pt.t, pt.param, pt.fam, cfg);
    const double sigmas = std::fabs(mean - psi) / (se > 0.0 ? se : 1e-300);
    worst_sigmas = std::max(worst_sigmas, sigmas);
    if (sigmas > 5.0) all = false;
  }
  const double elapsed = seconds_since(t0);
  report(all && elapsed < 60.0, "integral identity (continuous, Monte Carlo)",
         fmt("max deviation = %.2f standard errors (limit 5), %.1f s (limit 60 s)",
             worst_sigmas, elapsed));
}

// 3. psi normalization at the null (exact) and Fourier decay at t = 100.
void criterion_3() {
  const KernelConfig cfg;
  const std::vector<FamilySpec> fams = {
      make(FamilyKind::Gaussian, 0.0),      make(FamilyKind::Laplace, 0.0),
      make(FamilyKind::Cauchy, 0.0),        make(FamilyKind::Logistic, 0.0),
      make(FamilyKind::HyperbolicSecant, 0.0),
      make(FamilyKind::Poisson, 0.08),
      make(FamilyKind::NegativeBinomial, -4.5, 1.0, 5),
      make(FamilyKind::StrictArcsine, -1.0),
      make(FamilyKind::LargeArcsine, -2.0), make(FamilyKind::Abel, -2.0),
      make(FamilyKind::Takacs, -2.0),       make(FamilyKind::Gamma, 0.5, 6.0),
      make(FamilyKind::Exponential, 1.0)};
  bool exact = true;
  for (const auto& fam : fams) {
    for (const double t : {0.0, 0.5, 3.0, 41.0, 100.0}) {
      if (psi_oracle(t, fam.null_param, fam, cfg) != 1.0) exact = false;
    }
  }
  const double tail = psi_oracle(100.0, 1.0, make(FamilyKind::Gaussian, 0.0), cfg);
  report(exact && tail <= 5e-4, "psi normalization and decay",
         fmt("psi(t,null)=1 exact for 13 families; psi(100,mu=1) = %.2e (tol 5e-4)",
             tail));
}

// 4. Construction I variance bound with explicit constants: Gaussian,
//    m = 100, t = 2, all-null, 2000 seeded replications. Under 30 s.
void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelConfig cfg;
  const FamilySpec fam = make(FamilyKind::Gaussian, 0.0);
  const std::size_t m = 100;
  const double t = 2.0;
  const int reps = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RandomStream rng = RandomStream::child(424242, r);
    std::vector<double> z(m);
    for (auto& v : z) v = sample(fam, 0.0, rng);
    // all-null: oracle phase is exactly 0
    const double e = empirical_phase(z, t, fam, cfg).pi1_raw;
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / reps;
  const double var = (sum2 - reps * mean * mean) / (reps - 1);
  const double bound = variance_bound(fam, t, m, {}, cfg);
  const double elapsed = seconds_since(t0);
  report(var <= bound && elapsed < 30.0, "variance bound (Construction I)",
         fmt("sample var = %.4f <= bound %.4f, %.1f s (limit 30 s)", var, bound,
             elapsed));
}

// 5. Qualitative consistency trend for Laplace in the dense regime:
//    both |mean delta| and sd(delta) shrink from m = 1e3 to m = 1e4.
void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](std::size_t m) {
    Scenario sc;
    sc.family = make(FamilyKind::Laplace, 0.0);
    sc.m = m;
    sc.regime = Regime::Dense;
    sc.reps = 100;
    sc.master_seed = 101;
    sc.estimators = {EstimatorKind::New};
    return run_scenario(sc, 4).summary.per_estimator.at(EstimatorKind::New);
  };
  const EstimatorSummary small = run(1000);
  const EstimatorSummary big = run(10000);
  const double elapsed = seconds_since(t0);
  const bool pass = std::fabs(big.mean_delta) < std::fabs(small.mean_delta) &&
                    big.sd_delta < small.sd_delta && elapsed < 300.0;
  report(pass, "consistency trend (Laplace dense)",
         fmt("|mean| %.4f -> %.4f, sd %.4f -> %.4f",
             std::fabs(small.mean_delta), std::fabs(big.mean_delta),
             small.sd_delta, big.sd_delta) +
             fmt(", %.0f s (limit 300 s)", elapsed));
}

// 6. The MR estimator is almost always zero on discrete data:
//    Poisson dense, m = 1e3, 100 reps, zero fraction >= 0.9.
void criterion_6() {
  Scenario sc;
  sc.family = make(FamilyKind::Poisson, 0.08);
  sc.m = 1000;
  sc.regime = Regime::Dense;
  sc.reps = 100;
  sc.master_seed = 202;
  sc.estimators = {EstimatorKind::MR};
  const auto s = run_scenario(sc, 4).summary.per_estimator.at(EstimatorKind::MR);
  report(s.zero_fraction >= 0.9, "MR estimator collapses on discrete data",
         fmt("zero_fraction = %.2f (need >= 0.9)", s.zero_fraction));
}

// 7. On discrete data the direct construction beats the hybrid:
//    NegBin dense, m = 1e3, 100 reps, |mean delta New| < |mean delta Hybrid|.
void criterion_7() {
  Scenario sc;
  sc.family = make(FamilyKind::NegativeBinomial, -4.5, 1.0, 5);
  sc.m = 1000;
  sc.regime = Regime::Dense;
  sc.reps = 100;
  sc.master_seed = 303;
  sc.estimators = {EstimatorKind::New, EstimatorKind::Hybrid};
  const auto summary = run_scenario(sc, 4).summary.per_estimator;
  const double dn = std::fabs(summary.at(EstimatorKind::New).mean_delta);
  const double dh = std::fabs(summary.at(EstimatorKind::Hybrid).mean_delta);
  report(dn < dh, "direct construction beats hybrid on NegBin",
         fmt("|mean delta| new = %.4f < hybrid = %.4f", dn, dh));
}

// 8. Nonexistence gate: Binomial and Inverse Gaussian are rejected by
//    every kernel and estimator entry point.
void criterion_8() {
  const KernelConfig cfg;
  const std::vector<FamilySpec> fams = {make(FamilyKind::Binomial, 0.5, 1.0, 3),
                                        make(FamilyKind::InverseGaussian, -1.0)};
  int rejected = 0, expected = 0;
  for (const auto& fam : fams) {
    const std::vector<std::function<void()>> calls = {
        [&] { kernel_i(1.0, 0.0, fam, cfg); },
        [&] { kernel_ii(1.0, 0, fam, cfg); },
        [&] { kernel_iii(1.0, 1.0, fam, cfg); },
        [&] { psi_oracle(1.0, fam.null_param, fam, cfg); },
        [&] {
          const std::vector<double> z = {0.0, 1.0};
          empirical_phase(z, 1.0, fam, cfg);
        },
        [&] { tuning_t(fam, 100, TuningRule{1.0, {}, {}}); },
        [&] { variance_bound(fam, 1.0, 100, {}, cfg); },
    };
    for (const auto& call : calls) {
      ++expected;
      try {
        call();
      } catch (const NoConstructionError&) {
        ++rejected;
      } catch (...) {
      }
    }
  }
  report(rejected == expected, "nonexistence gate (Binomial, InvGaussian)",
         fmt("%g of %g entry points raised the nonexistence error",
             double(rejected), double(expected)));
}

// 9. Numerical robustness: quadrature grid refinement 400 -> 1600 within
//    1e-5 relative on bounded grids, series truncation 20 -> 60 within
//    1e-6 for |t x xi| <= 10, and worker-count invariance.
void criterion_9() {
  const KernelConfig g400;
  KernelConfig g1600;
  g1600.grid_n = 1600;

  double worst_rel = 0.0;
  auto check_point = [&](const FamilySpec& fam, double t, double x) {
    const double a = KernelEvaluator(fam, g400, t)(x);
    const double b = KernelEvaluator(fam, g1600, t)(x);
    worst_rel = std::max(worst_rel, std::fabs(a - b) / (1.0 + std::fabs(b)));
  };
  // bounded test grids per construction (the modulus growth rate sets
  // how far t can go at this tolerance)
  for (const FamilyKind k : {FamilyKind::Gaussian, FamilyKind::Laplace,
                             FamilyKind::Cauchy, FamilyKind::HyperbolicSecant}) {
    for (const double t : {0.5, 1.0, 2.0}) {
      for (const double x : {0.25, 0.5, 1.0}) {
        check_point(make(k, 0.0), t, x);
      }
    }
  }
  for (const double t : {0.25, 0.5, 1.0}) {
    for (const double x : {0.25, 0.5, 1.0}) {
      check_point(make(FamilyKind::Logistic, 0.0), t, x);
    }
  }
  for (const double t : {0.5, 1.0}) {
    for (const double x : {0.0, 1.0, 2.0, 3.0}) {
      check_point(make(FamilyKind::Poisson, 0.08), t, x);
      check_point(make(FamilyKind::NegativeBinomial, -4.5, 1.0, 5), t, x);
    }
  }
  for (const double t : {0.5, 1.0, 2.0}) {
    for (const double x : {1.0, 3.0, 6.0}) {
      check_point(make(FamilyKind::Gamma, 0.5, 6.0), t, x);
    }
  }

  KernelConfig s60;
  s60.series_n = 60;
  double worst_series = 0.0;
  const FamilySpec gm = make(FamilyKind::Gamma, 0.5, 6.0);  // xi0 = 2
  const FamilySpec ex = make(FamilyKind::Exponential, 1.0);
  for (const auto& [fam, t, x] : {std::tuple{gm, 1.0, 2.0},
                                  std::tuple{gm, 2.0, 2.5},
                                  std::tuple{gm, 0.5, 10.0},
                                  std::tuple{ex, 1.0, 5.0},
                                  std::tuple{ex, 2.0, 4.0}}) {
    const double a = KernelEvaluator(fam, g400, t)(x);
    const double b = KernelEvaluator(fam, s60, t)(x);
    worst_series = std::max(worst_series, std::fabs(a - b));
  }

  Scenario sc;
  sc.family = make(FamilyKind::Laplace, 0.0);
  sc.m = 400;
  sc.regime = Regime::Dense;
  sc.reps = 12;
  sc.master_seed = 404;
  const ScenarioResult one = run_scenario(sc, 1);
  const ScenarioResult eight = run_scenario(sc, 8);
  bool parallel_ok = true;
  for (int r = 0; r < sc.reps; ++r) {
    for (const auto& [est, v] : one.replications[r].delta_tilde) {
      if (v != eight.replications[r].delta_tilde.at(est)) parallel_ok = false;
    }
  }
  for (const auto& [est, s] : one.summary.per_estimator) {
    const auto& o = eight.summary.per_estimator.at(est);
    if (s.mean_delta != o.mean_delta || s.sd_delta != o.sd_delta ||
        s.zero_fraction != o.zero_fraction) {
      parallel_ok = false;
    }
  }

  report(worst_rel <= 1e-5 && worst_series <= 1e-6 && parallel_ok,
         "numerical robustness",
         fmt("grid 400->1600 rel = %.2e (tol 1e-5), series 20->60 = %.2e "
             "(tol 1e-6), workers 1==8: ",
             worst_rel, worst_series) +
             (parallel_ok ? "yes" : "NO"));
}

// 10. Baseline unit value: MR on (0.1,...,0.5) against the independent
//     script oracle, 0.1429488 within 1e-4.
void criterion_10() {
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4, 0.5};
  const double got = mr_estimate(p);
  report(std::fabs(got - 0.14294880181854164) <= 1e-4, "MR baseline unit value",
         fmt("mr((0.1..0.5)) = %.6f (oracle 0.142949, tol 1e-4)", got));
}

}  // namespace

int main() {
  std::printf("propphase acceptance suite\n");
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("ACCEPTANCE: %d/10 criteria passed in %.0f s\n", 10 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
