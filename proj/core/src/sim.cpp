#include "propphase/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "propphase/baselines.hpp"
#include "propphase/errors.hpp"
#include "propphase/estimator.hpp"

namespace propphase {

namespace {

// shortest decimal form that parses back to the same double
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Dense: return "dense";
    case Regime::ModeratelySparse: return "moderately_sparse";
    case Regime::CriticallySparse: return "critically_sparse";
    case Regime::VerySparse: return "very_sparse";
  }
  return "?";
}

Regime parse_regime(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "dense") return Regime::Dense;
  if (s == "moderately_sparse" || s == "moderate") return Regime::ModeratelySparse;
  if (s == "critically_sparse" || s == "critical") return Regime::CriticallySparse;
  if (s == "very_sparse" || s == "verysparse") return Regime::VerySparse;
  throw ConfigError("unknown sparsity regime '" + std::string(name) + "'");
}

const char* estimator_name(EstimatorKind e) {
  switch (e) {
    case EstimatorKind::New: return "new";
    case EstimatorKind::MR: return "mr";
    case EstimatorKind::Hybrid: return "hybrid";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "new") return EstimatorKind::New;
  if (s == "mr") return EstimatorKind::MR;
  if (s == "hybrid" || s == "jin") return EstimatorKind::Hybrid;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

double Scenario::pi1_target() const {
  const double dm = static_cast<double>(m);
  switch (regime) {
    case Regime::Dense: return 0.2;
    case Regime::ModeratelySparse: return std::pow(dm, -0.2);
    case Regime::CriticallySparse: return std::pow(dm, -0.5);
    case Regime::VerySparse: return std::pow(dm, -0.7);
  }
  return 0.2;
}

bool Scenario::canonical() const {
  switch (family.kind) {
    case FamilyKind::Laplace:
    case FamilyKind::Cauchy:
    case FamilyKind::Poisson:
    case FamilyKind::NegativeBinomial:
    case FamilyKind::Gamma:
      return true;
    default:
      return false;
  }
}

std::string Scenario::id() const {
  std::string out = family.kind_name();
  out += "-m" + std::to_string(m);
  out += "-";
  out += regime_name(regime);
  out += "-r" + std::to_string(reps);
  out += "-s" + std::to_string(master_seed);
  return out;
}

void Scenario::validate() const {
  family.validate();
  if (m < 1) throw ConfigError("scenario: m must be >= 1");
  if (reps < 1) throw ConfigError("scenario: reps must be >= 1");
  if (estimators.empty()) throw ConfigError("scenario: at least one estimator");
}

std::vector<double> gen_params(const Scenario& sc, RandomStream& rng) {
  if (!sc.canonical()) {
    throw DomainError(
        std::string("gen_params: no alternative-generation recipe for ") +
        sc.family.kind_name() +
        " (supported: laplace, cauchy, poisson, negbinomial, gamma)");
  }
  const std::size_t m = sc.m;
  const std::size_t m1 =
      static_cast<std::size_t>(std::floor(sc.pi1_target() * static_cast<double>(m)));
  const std::size_t m0 = m - m1;
  const double null = sc.family.null_param;

  std::vector<double> params(m, null);
  switch (sc.family.kind) {
    case FamilyKind::Laplace:
    case FamilyKind::Cauchy: {
      for (std::size_t i = m0; i < m; ++i) {
        const double mag = rng.uniform(0.75, 5.0);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        params[i] = null + sign * mag;
      }
      break;
    }
    case FamilyKind::Poisson:
    case FamilyKind::NegativeBinomial:
    case FamilyKind::Gamma: {
      double lo = 10.0, hi = 13.0;
      if (sc.family.kind == FamilyKind::NegativeBinomial) { lo = 8.0; hi = 15.0; }
      if (sc.family.kind == FamilyKind::Gamma) { lo = 1.2; hi = 1.5; }
      const std::size_t half = m1 / 2;
      for (std::size_t j = 0; j < m1; ++j) {
        const double rho = rng.uniform(lo, hi);
        params[m0 + j] = j < half ? null * rho : null / rho;
      }
      break;
    }
    default:
      break;  // unreachable, canonical() gates above
  }
  return params;
}

double sim_schedule_t(const FamilySpec& fam, std::size_t m,
                      std::span<const double> params) {
  const double logm = std::log(static_cast<double>(m));
  switch (fam.kind) {
    case FamilyKind::Laplace:
      return logm;
    case FamilyKind::Cauchy:
      return std::sqrt(logm);
    case FamilyKind::Poisson: {
      double eta_sup = 0.0;
      for (const double th : params) eta_sup = std::max(eta_sup, std::exp(th));
      return std::pow(eta_sup, -0.25) * std::sqrt(logm);
    }
    case FamilyKind::NegativeBinomial:
      return 0.5 * logm;
    case FamilyKind::Gamma: {
      double u3 = std::numeric_limits<double>::infinity();
      for (const double th : params) u3 = std::min(u3, 1.0 - th);
      return 0.25 * u3 * logm;
    }
    default:
      throw DomainError(std::string("sim_schedule_t: no schedule for ") +
                        fam.kind_name());
  }
}

ReplicationResult run_replication(const Scenario& sc, int rep) {
  sc.validate();
  if (rep < 0 || rep >= sc.reps) throw DomainError("replication index out of range");
  RandomStream rng = RandomStream::child(sc.master_seed, static_cast<std::uint64_t>(rep));

  const std::vector<double> params = gen_params(sc, rng);
  const std::size_t m1 =
      static_cast<std::size_t>(std::floor(sc.pi1_target() * static_cast<double>(sc.m)));

  std::vector<double> z(sc.m);
  for (std::size_t i = 0; i < sc.m; ++i) z[i] = sample(sc.family, params[i], rng);

  ReplicationResult out;
  out.rep_index = rep;
  out.pi1_true = static_cast<double>(m1) / static_cast<double>(sc.m);

  for (const EstimatorKind est : sc.estimators) {
    double hat = 0.0;
    switch (est) {
      case EstimatorKind::New: {
        const double t = sim_schedule_t(sc.family, sc.m, params);
        KernelConfig cfg;  // 400 subintervals, series order 20
        hat = empirical_phase(z, t, sc.family, cfg).pi1_clipped;
        break;
      }
      case EstimatorKind::MR:
        hat = mr_estimate(pvalues_from_null(z, sc.family));
        break;
      case EstimatorKind::Hybrid:
        hat = std::min(1.0, std::max(0.0, hybrid_jin_estimate(z, sc.family)));
        break;
    }
    out.pi1_hat[est] = hat;
    out.delta_tilde[est] = hat / out.pi1_true - 1.0;
  }
  return out;
}

ScenarioResult run_scenario(const Scenario& sc, int workers) {
  sc.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  ScenarioResult result;
  result.replications.resize(sc.reps);

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= sc.reps) return;
      try {
        result.replications[rep] = run_replication(sc, rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (const EstimatorKind est : sc.estimators) {
    EstimatorSummary s;
    double sum = 0.0;
    int zeros = 0;
    for (const auto& r : result.replications) {
      sum += r.delta_tilde.at(est);
      if (r.pi1_hat.at(est) == 0.0) ++zeros;
    }
    s.mean_delta = sum / sc.reps;
    if (sc.reps > 1) {
      double ss = 0.0;
      for (const auto& r : result.replications) {
        const double d = r.delta_tilde.at(est) - s.mean_delta;
        ss += d * d;
      }
      s.sd_delta = std::sqrt(ss / (sc.reps - 1));
    }
    s.zero_fraction = static_cast<double>(zeros) / sc.reps;
    result.summary.per_estimator[est] = s;
  }
  result.summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

void write_replications_csv(std::ostream& os, const Scenario& sc,
                            std::span<const ReplicationResult> reps) {
  const std::string id = sc.id();
  const std::string family = sc.family.to_string();
  os << "scenario_id,family,m,regime,rep,estimator,pi1_true,pi1_hat,delta_tilde\n";
  for (const auto& r : reps) {
    for (const EstimatorKind est : sc.estimators) {
      os << id << ',' << family << ',' << sc.m << ',' << regime_name(sc.regime)
         << ',' << r.rep_index << ',' << estimator_name(est) << ','
         << fmt(r.pi1_true) << ',' << fmt(r.pi1_hat.at(est)) << ','
         << fmt(r.delta_tilde.at(est)) << '\n';
    }
  }
}

std::string summary_json_text(const Scenario& sc, const ScenarioResult& result) {
  nlohmann::json doc;
  doc["scenario"] = {
      {"id", sc.id()},
      {"family", sc.family.to_string()},
      {"m", sc.m},
      {"regime", regime_name(sc.regime)},
      {"reps", sc.reps},
      {"seed", sc.master_seed},
      {"pi1_target", sc.pi1_target()},
  };
  // The Poisson and Gamma schedules read the realized parameter vector.
  if (sc.family.kind == FamilyKind::Poisson || sc.family.kind == FamilyKind::Gamma) {
    doc["scenario"]["tuning"] = "oracle_assisted";
  }
  nlohmann::json per;
  for (const auto& [est, s] : result.summary.per_estimator) {
    per[estimator_name(est)] = {
        {"mean_delta", s.mean_delta},
        {"sd_delta", s.sd_delta},
        {"zero_fraction", s.zero_fraction},
    };
  }
  doc["summary"] = per;
  doc["runtime_seconds"] = result.summary.runtime_seconds;
  return doc.dump(2);
}

Scenario scenario_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("scenario config is not valid JSON: ") + e.what());
  }
  Scenario sc;
  try {
    sc.family = FamilySpec::parse(doc.at("family").get<std::string>());
    sc.m = doc.at("m").get<std::size_t>();
    sc.regime = parse_regime(doc.at("regime").get<std::string>());
    if (doc.contains("reps")) sc.reps = doc.at("reps").get<int>();
    if (doc.contains("seed")) sc.master_seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("estimators")) {
      sc.estimators.clear();
      for (const auto& e : doc.at("estimators")) {
        sc.estimators.push_back(parse_estimator(e.get<std::string>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  sc.validate();
  return sc;
}

}  // namespace propphase
