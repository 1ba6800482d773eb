#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "propphase/errors.hpp"
#include "propphase/sim.hpp"

using namespace propphase;

namespace {

Scenario laplace_scenario(std::size_t m, Regime regime, int reps,
                          std::uint64_t seed) {
  Scenario sc;
  sc.family = FamilySpec::parse("laplace sigma=1 null=0");
  sc.m = m;
  sc.regime = regime;
  sc.reps = reps;
  sc.master_seed = seed;
  return sc;
}

}  // namespace

TEST_CASE("regime arithmetic") {
  for (const Regime r : {Regime::Dense, Regime::ModeratelySparse,
                         Regime::CriticallySparse, Regime::VerySparse}) {
    for (std::size_t m : {10u, 100u, 1000u, 10000u}) {
      Scenario sc = laplace_scenario(m, r, 1, 0);
      const double pi1 = sc.pi1_target();
      RandomStream rng(1);
      const std::vector<double> params = gen_params(sc, rng);
      std::size_t m1 = 0;
      for (const double p : params) {
        if (p != sc.family.null_param) ++m1;
      }
      CHECK(static_cast<double>(m1) / m <= pi1 + 1e-12);
      CHECK(pi1 < static_cast<double>(m1 + 1) / m);
    }
  }
  CHECK(laplace_scenario(100, Regime::CriticallySparse, 1, 0).pi1_target() ==
        doctest::Approx(0.1));
  CHECK(laplace_scenario(1000, Regime::Dense, 1, 0).pi1_target() == 0.2);
}

TEST_CASE("gen_params recipes") {
  // Dense m=10 Laplace: exactly 2 alternatives with |mu| in (0.75, 5)
  Scenario sc = laplace_scenario(10, Regime::Dense, 1, 42);
  RandomStream rng(7);
  const std::vector<double> params = gen_params(sc, rng);
  int nonzero = 0;
  for (const double p : params) {
    if (p != 0.0) {
      ++nonzero;
      CHECK(std::fabs(p) > 0.75);
      CHECK(std::fabs(p) < 5.0);
    }
  }
  CHECK(nonzero == 2);

  // Poisson alternatives are theta0*rho or theta0/rho, never theta0
  Scenario pois;
  pois.family = FamilySpec::parse("poisson null=0.08");
  pois.m = 200;
  pois.regime = Regime::Dense;
  RandomStream rng2(9);
  const std::vector<double> pp = gen_params(pois, rng2);
  int alts = 0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    if (pp[i] != 0.08) {
      ++alts;
      const bool up = pp[i] > 0.08 * 10.0 * 0.999 && pp[i] < 0.08 * 13.0 * 1.001;
      const bool down = pp[i] > 0.08 / 13.0 * 0.999 && pp[i] < 0.08 / 10.0 * 1.001;
      CHECK((up || down));
    }
  }
  CHECK(alts == 40);
  // first half of the alternatives are the up-scaled ones
  CHECK(pp[160] > 0.08 * 9.0);
  CHECK(pp[199] < 0.08 / 9.0);

  Scenario bad;
  bad.family = FamilySpec::parse("gaussian sigma=1 null=0");
  bad.m = 100;
  RandomStream rng3(1);
  CHECK_THROWS_AS(gen_params(bad, rng3), DomainError);
}

TEST_CASE("sim schedules follow the published simulation settings") {
  const double logm = std::log(1000.0);
  const std::vector<double> none;
  CHECK(sim_schedule_t(FamilySpec::parse("laplace sigma=1 null=0"), 1000, none) ==
        doctest::Approx(logm));
  CHECK(sim_schedule_t(FamilySpec::parse("cauchy sigma=1 null=0"), 1000, none) ==
        doctest::Approx(std::sqrt(logm)));
  CHECK(sim_schedule_t(FamilySpec::parse("negbinomial n=5 null=-4.5"), 1000, none) ==
        doctest::Approx(0.5 * logm));
  const std::vector<double> pois_params = {0.08, 0.8, 1.04};
  CHECK(sim_schedule_t(FamilySpec::parse("poisson null=0.08"), 1000, pois_params) ==
        doctest::Approx(std::pow(std::exp(1.04), -0.25) * std::sqrt(logm)));
  const std::vector<double> gm_params = {0.5, 0.75, 0.4};
  CHECK(sim_schedule_t(FamilySpec::parse("gamma sigma=6 null=0.5"), 1000, gm_params) ==
        doctest::Approx(0.25 * 0.25 * logm));
}

TEST_CASE("replications are deterministic") {
  Scenario sc = laplace_scenario(120, Regime::Dense, 4, 2718);
  const ReplicationResult a = run_replication(sc, 2);
  const ReplicationResult b = run_replication(sc, 2);
  CHECK(a.rep_index == b.rep_index);
  CHECK(a.pi1_true == b.pi1_true);
  for (const auto& [est, v] : a.pi1_hat) {
    CHECK(v == b.pi1_hat.at(est));
    CHECK(a.delta_tilde.at(est) == b.delta_tilde.at(est));
  }
  // distinct replications use distinct streams
  const ReplicationResult c = run_replication(sc, 3);
  CHECK(c.pi1_hat.at(EstimatorKind::New) != a.pi1_hat.at(EstimatorKind::New));
}

TEST_CASE("single-replication summary is the replication itself") {
  Scenario sc = laplace_scenario(80, Regime::Dense, 1, 5);
  sc.estimators = {EstimatorKind::New};
  const ScenarioResult r = run_scenario(sc, 1);
  REQUIRE(r.replications.size() == 1);
  const auto& s = r.summary.per_estimator.at(EstimatorKind::New);
  CHECK(s.mean_delta == r.replications[0].delta_tilde.at(EstimatorKind::New));
  CHECK(s.sd_delta == 0.0);
}

TEST_CASE("worker count does not change results") {
  Scenario sc = laplace_scenario(150, Regime::ModeratelySparse, 10, 99);
  const ScenarioResult one = run_scenario(sc, 1);
  const ScenarioResult eight = run_scenario(sc, 8);
  REQUIRE(one.replications.size() == eight.replications.size());
  for (std::size_t i = 0; i < one.replications.size(); ++i) {
    for (const auto& [est, v] : one.replications[i].delta_tilde) {
      CHECK(v == eight.replications[i].delta_tilde.at(est));
    }
  }
  for (const auto& [est, s] : one.summary.per_estimator) {
    CHECK(s.mean_delta == eight.summary.per_estimator.at(est).mean_delta);
    CHECK(s.sd_delta == eight.summary.per_estimator.at(est).sd_delta);
    CHECK(s.zero_fraction == eight.summary.per_estimator.at(est).zero_fraction);
  }
}

TEST_CASE("delta_tilde stays above -1 for clipped estimators") {
  Scenario sc = laplace_scenario(100, Regime::VerySparse, 6, 31);
  const ScenarioResult r = run_scenario(sc, 2);
  for (const auto& rep : r.replications) {
    for (const auto& [est, d] : rep.delta_tilde) {
      CHECK(d >= -1.0);
      if (rep.pi1_hat.at(est) == 0.0) CHECK(d == doctest::Approx(-1.0));
    }
  }
}

TEST_CASE("csv output is stable and well formed") {
  Scenario sc = laplace_scenario(90, Regime::Dense, 3, 13);
  const ScenarioResult r1 = run_scenario(sc, 1);
  const ScenarioResult r2 = run_scenario(sc, 3);
  std::ostringstream a, b;
  write_replications_csv(a, sc, r1.replications);
  write_replications_csv(b, sc, r2.replications);
  CHECK(a.str() == b.str());

  std::istringstream lines(a.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "scenario_id,family,m,regime,rep,estimator,pi1_true,pi1_hat,delta_tilde");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3 * 3);  // reps x estimators
}

TEST_CASE("scenario json round trip") {
  const std::string text = R"({
    "family": "negbinomial n=5 null=-4.5",
    "m": 500,
    "regime": "dense",
    "reps": 7,
    "seed": 11,
    "estimators": ["new", "mr"]
  })";
  const Scenario sc = scenario_from_json_text(text);
  CHECK(sc.family.kind == FamilyKind::NegativeBinomial);
  CHECK(sc.m == 500);
  CHECK(sc.regime == Regime::Dense);
  CHECK(sc.reps == 7);
  CHECK(sc.master_seed == 11);
  REQUIRE(sc.estimators.size() == 2);
  CHECK(sc.estimators[0] == EstimatorKind::New);
  CHECK(sc.estimators[1] == EstimatorKind::MR);
  CHECK(sc.id() == "negbinomial-m500-dense-r7-s11");

  CHECK_THROWS_AS(scenario_from_json_text("{not json"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text(R"({"family":"laplace null=0"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_regime("sideways"), ConfigError);
}
