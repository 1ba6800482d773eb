#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "propphase/families.hpp"

namespace propphase {

enum class Regime { Dense, ModeratelySparse, CriticallySparse, VerySparse };

enum class EstimatorKind { New, MR, Hybrid };

const char* regime_name(Regime r);
Regime parse_regime(std::string_view name);
const char* estimator_name(EstimatorKind e);
EstimatorKind parse_estimator(std::string_view name);

/// One experiment: family, problem size, sparsity regime, replication
/// count and master seed. Output is a pure function of these fields.
struct Scenario {
  FamilySpec family;
  std::size_t m = 1000;
  Regime regime = Regime::Dense;
  int reps = 100;
  std::uint64_t master_seed = 0;
  std::vector<EstimatorKind> estimators = {EstimatorKind::New, EstimatorKind::MR,
                                           EstimatorKind::Hybrid};

  double pi1_target() const;
  /// Families with a published alternative-generation recipe.
  bool canonical() const;
  std::string id() const;
  void validate() const;
};

struct ReplicationResult {
  int rep_index = 0;
  double pi1_true = 0.0;  // realized m1/m
  std::map<EstimatorKind, double> pi1_hat;      // clipped to [0,1]
  std::map<EstimatorKind, double> delta_tilde;  // pi1_hat/pi1_true - 1
};

struct EstimatorSummary {
  double mean_delta = 0.0;
  double sd_delta = 0.0;
  double zero_fraction = 0.0;
};

struct ScenarioSummary {
  std::map<EstimatorKind, EstimatorSummary> per_estimator;
  double runtime_seconds = 0.0;
};

struct ScenarioResult {
  ScenarioSummary summary;
  std::vector<ReplicationResult> replications;
};

/// True parameter vector for one replication: the first m0 entries are
/// the null parameter, the rest are drawn by the published recipe for
/// the family.
std::vector<double> gen_params(const Scenario& sc, RandomStream& rng);

/// Runs one replication on the stream child(master_seed, rep).
ReplicationResult run_replication(const Scenario& sc, int rep);

/// Runs all replications, optionally across worker threads. Results are
/// identical for any worker count.
ScenarioResult run_scenario(const Scenario& sc, int workers = 1);

/// The tuning parameter the harness uses for the New estimator, derived
/// from the realized parameter vector where the schedule requires it.
double sim_schedule_t(const FamilySpec& fam, std::size_t m,
                      std::span<const double> params);

/// Long-format CSV, one row per (replication, estimator):
/// scenario_id,family,m,regime,rep,estimator,pi1_true,pi1_hat,delta_tilde
void write_replications_csv(std::ostream& os, const Scenario& sc,
                            std::span<const ReplicationResult> reps);

/// JSON summary document with per-estimator mean/sd/zero_fraction.
std::string summary_json_text(const Scenario& sc, const ScenarioResult& result);

/// Scenario from a JSON config document (fields: family, m, regime,
/// reps, seed, estimators).
Scenario scenario_from_json_text(const std::string& text);

}  // namespace propphase
