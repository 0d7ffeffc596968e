#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "inspectfdi/errors.hpp"
#include "inspectfdi/info_cost.hpp"
#include "inspectfdi/rng.hpp"

using namespace inspectfdi;

namespace {

PointOfInterest poi_at(const Vec3& loc, double importance = 1.0, double w = 1.0,
                       double accumulated = 0.0) {
  PointOfInterest poi;
  poi.location = loc;
  poi.importance = importance;
  poi.prior_variance = w;
  poi.accumulated_information = accumulated;
  return poi;
}

AgentSensor agent_at(int id, const Vec3& position, const Vec3& pointing,
                     double half_angle = 1.0, double k = 1.0) {
  AgentSensor a;
  a.id = id;
  a.pose.position = position;
  a.pose.pointing = pointing.normalized();
  a.sensor.half_angle = half_angle;
  a.sensor.variance_gain = k;
  return a;
}

// Random sphere configuration exercising accumulation and degradation.
struct RandomWorld {
  std::vector<PointOfInterest> pois;
  std::vector<AgentSensor> agents;
};

RandomWorld random_world(RngStream& rng, std::size_t n_pois, std::size_t n_agents) {
  RandomWorld w;
  for (std::size_t s = 0; s < n_pois; ++s) {
    const Vec3 loc = Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()).normalized();
    w.pois.push_back(poi_at(loc, rng.uniform(0.1, 1.0), rng.uniform(0.5, 3.0),
                            rng.uniform(0.0, 2.0)));
  }
  for (std::size_t a = 0; a < n_agents; ++a) {
    const Vec3 pos = Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()).normalized() *
                     rng.uniform(2.0, 6.0);
    const Vec3 dir = Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()).normalized();
    AgentSensor agent = agent_at(static_cast<int>(a) + 1, pos, dir,
                                 rng.uniform(0.2, 1.2), rng.uniform(0.5, 2.0));
    agent.sensor.degradation = rng.uniform(0.3, 1.0);
    w.agents.push_back(agent);
  }
  return w;
}

}  // namespace

TEST_CASE("fusion basics") {
  CHECK(fuse_poi(5.0, {}) == doctest::Approx(5.0));
  const std::vector<double> half{0.5};
  CHECK(fuse_poi(2.0, half) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fuse_poi(0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(fuse_poi(-1.0, {}), std::invalid_argument);
  const std::vector<double> bad{-0.1};
  CHECK_THROWS_AS(fuse_poi(1.0, bad), std::invalid_argument);
}

TEST_CASE("improper prior needs at least one observation") {
  CHECK_THROWS_AS(fuse_information(0.0, {}), std::invalid_argument);
  const std::vector<double> zeros{0.0, 0.0};
  CHECK_THROWS_AS(fuse_information(0.0, zeros), std::invalid_argument);
}

TEST_CASE("improper-prior fusion of the planar geometry") {
  // Agents at x = -1.5 and x = +1.5 observing the POI at (1, 1):
  // sigma_1 = (-1.5-1)^2 + 1 = 7.25, sigma_2 = (1.5-1)^2 + 1 = 1.25.
  const AnalyticPoi poi{1.0, 1.0, 1.0, 0.0};
  CHECK(analytic_inverse_variance(-1.5, poi, 1.0) == doctest::Approx(1.0 / 7.25).epsilon(1e-15));
  CHECK(analytic_inverse_variance(1.5, poi, 1.0) == doctest::Approx(1.0 / 1.25).epsilon(1e-15));

  const std::vector<double> inv{1.0 / 7.25, 1.0 / 1.25};
  const double expected = 1.0 / (1.0 / 7.25 + 1.0 / 1.25);  // independent arithmetic
  CHECK(fuse_information(0.0, inv) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(1.06618).epsilon(1e-5));
}

TEST_CASE("consensus factor equals the squared fused variance") {
  CHECK(consensus_factor(5.0, {}) == doctest::Approx(25.0));
  const std::vector<double> half{0.5};
  CHECK(consensus_factor(2.0, half) == doctest::Approx(1.0));

  RngStream rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double w = rng.uniform(0.1, 10.0);
    std::vector<double> inv;
    const int n = static_cast<int>(rng.uniform(0.0, 6.0));
    for (int j = 0; j < n; ++j) {
      inv.push_back(rng.uniform(0.0, 3.0));
    }
    const double fused = fuse_poi(w, inv);
    const double psi = consensus_factor(w, inv);
    CHECK(std::abs(psi - fused * fused) <= 1e-14 * psi);
  }
}

TEST_CASE("fusion is monotone and bounded by the prior") {
  RngStream rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double w = rng.uniform(0.1, 10.0);
    std::vector<double> inv;
    const int n = static_cast<int>(rng.uniform(0.0, 5.0));
    for (int j = 0; j < n; ++j) {
      inv.push_back(rng.uniform(0.0, 3.0));
    }
    const double fused = fuse_poi(w, inv);
    CHECK(fused > 0.0);
    CHECK(fused <= w);

    std::vector<double> more = inv;
    more.push_back(rng.uniform(0.0, 3.0));
    CHECK(fuse_poi(w, more) <= fused);
  }
}

TEST_CASE("evaluate_cost with no visibility returns the fused priors") {
  std::vector<PointOfInterest> pois{poi_at(Vec3::UnitX(), 1.0, 2.0, 0.5),
                                    poi_at(-Vec3::UnitX(), 1.0, 2.0, 0.5)};
  // Pointing away from everything.
  std::vector<AgentSensor> agents{
      agent_at(1, Vec3(0.0, 5.0, 0.0), Vec3::UnitZ(), 0.05)};
  const CostBreakdown cost = evaluate_cost(pois, agents, Vec3::Zero());
  CHECK(cost.agent_contributions.at(1) == 0.0);
  CHECK(cost.global_cost == doctest::Approx(2.0));  // two POIs at 1/(0.5+0.5)
  CHECK(cost.prior_term == doctest::Approx(cost.global_cost));
}

TEST_CASE("decomposition identity holds on random configurations") {
  RngStream rng(404);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n_pois = 10 + static_cast<std::size_t>(rng.uniform(0.0, 200.0));
    const std::size_t n_agents = 1 + static_cast<std::size_t>(rng.uniform(0.0, 5.0));
    RandomWorld w = random_world(rng, n_pois, n_agents);
    const CostBreakdown cost = evaluate_cost(w.pois, w.agents, Vec3::Zero());

    double sum = cost.prior_term;
    for (const auto& [id, h] : cost.agent_contributions) {
      sum += h;
    }
    CHECK(std::abs(sum - cost.global_cost) <= 1e-12 * std::abs(cost.global_cost));

    double per_poi = 0.0;
    for (double v : cost.per_poi_cost) {
      per_poi += v;
    }
    CHECK(std::abs(per_poi - cost.global_cost) <= 1e-12 * std::abs(cost.global_cost));
  }
}

TEST_CASE("parallel evaluation is bit-identical to serial") {
  RngStream rng(555);
  RandomWorld w = random_world(rng, 300, 4);
  const CostEvaluation serial = evaluate_cost_detailed(w.pois, w.agents, Vec3::Zero(), false);
  const CostEvaluation parallel = evaluate_cost_detailed(w.pois, w.agents, Vec3::Zero(), true);
  CHECK(serial.breakdown.global_cost == parallel.breakdown.global_cost);
  CHECK(serial.breakdown.prior_term == parallel.breakdown.prior_term);
  CHECK(serial.breakdown.agent_contributions == parallel.breakdown.agent_contributions);
  CHECK(serial.visible == parallel.visible);
}

TEST_CASE("duplicating an agent strictly decreases the global cost") {
  std::vector<PointOfInterest> pois{poi_at(Vec3::UnitX())};
  std::vector<AgentSensor> agents{agent_at(1, Vec3(3.0, 0.0, 0.0), Vec3::UnitX())};
  const double base = evaluate_cost(pois, agents, Vec3::Zero()).global_cost;
  AgentSensor twin = agents[0];
  twin.id = 2;
  agents.push_back(twin);
  CHECK(evaluate_cost(pois, agents, Vec3::Zero()).global_cost < base);
}

TEST_CASE("planar cost of the symmetric two-agent configuration") {
  const std::vector<AnalyticPoi> pois{{1.0, 1.0, 0.5, 0.0}, {-1.0, -1.0, 0.5, 0.0}};
  const std::vector<double> xs{-1.5, 1.5};
  const std::vector<double> ks{1.0, 1.0};
  const std::vector<double> betas{1.0, 1.0};
  const double h = analytic_cost(xs, ks, betas, pois);

  const double h_poi = 1.0 / (1.0 / 7.25 + 1.0 / 1.25);
  CHECK(h == doctest::Approx(0.5 * h_poi + 0.5 * h_poi).epsilon(1e-14));

  // The (x, y) -> (-x, -y) symmetry swaps agents and POIs.
  const std::vector<AnalyticPoi> one{pois[0]};
  const std::vector<AnalyticPoi> other{pois[1]};
  CHECK(analytic_cost(xs, ks, betas, one) ==
        doctest::Approx(analytic_cost(xs, ks, betas, other)).epsilon(1e-14));
}

TEST_CASE("planar gradient matches central finite differences") {
  RngStream rng(808);
  int tested = 0;
  while (tested < 100) {
    const std::size_t n_pois = 1 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));
    std::vector<AnalyticPoi> pois;
    std::vector<double> other;
    for (std::size_t s = 0; s < n_pois; ++s) {
      AnalyticPoi poi;
      poi.sx = rng.uniform(-2.0, 2.0);
      poi.sy = rng.uniform(0.5, 2.0);
      poi.importance = rng.uniform(0.1, 1.0);
      poi.inverse_prior = rng.uniform(0.0, 1.0);
      pois.push_back(poi);
      other.push_back(rng.uniform(0.0, 1.0));
    }
    const double k = rng.uniform(0.5, 2.0);
    const double x = rng.uniform(-3.0, 3.0);

    const double g = gradient_1dof(x, other, pois, k);
    if (std::abs(g) < 1e-3) {
      continue;  // keep the relative comparison well conditioned
    }
    ++tested;

    auto cost_at = [&](double xq) {
      double h = 0.0;
      for (std::size_t s = 0; s < pois.size(); ++s) {
        const double total = pois[s].inverse_prior + other[s] +
                             analytic_inverse_variance(xq, pois[s], k);
        h += pois[s].importance / total;
      }
      return h;
    };
    const double step = 1e-5;
    const double fd = (cost_at(x + step) - cost_at(x - step)) / (2.0 * step);
    CHECK(std::abs(fd - g) <= 1e-6 * std::abs(g));
  }
}

TEST_CASE("planar gradient symmetry and zero-at-abeam") {
  const std::vector<AnalyticPoi> pois{{1.0, 1.0, 0.5, 0.0}, {-1.0, -1.0, 0.5, 0.0}};
  const double k = 1.0;
  // Other-agent totals as seen from each side of the symmetric pair.
  const std::vector<double> other_for_1{analytic_inverse_variance(1.5, pois[0], k),
                                        analytic_inverse_variance(1.5, pois[1], k)};
  const std::vector<double> other_for_2{analytic_inverse_variance(-1.5, pois[0], k),
                                        analytic_inverse_variance(-1.5, pois[1], k)};
  const double g1 = gradient_1dof(-1.5, other_for_1, pois, k);
  const double g2 = gradient_1dof(1.5, other_for_2, pois, k);
  CHECK(g1 == doctest::Approx(-g2).epsilon(1e-12));

  const std::vector<AnalyticPoi> abeam{{0.7, 1.3, 1.0, 0.5}};
  const std::vector<double> none{0.0};
  CHECK(gradient_1dof(0.7, none, abeam, k) == 0.0);
}

TEST_CASE("planar gradient rejects degenerate geometry") {
  const std::vector<AnalyticPoi> pois{{1.0, 0.0, 1.0, 0.0}};
  const std::vector<double> none{0.0};
  CHECK_THROWS_AS(gradient_1dof(1.0, none, pois, 1.0), SingularGeometryError);
}

TEST_CASE("pointing policy picks the highest-variance facing POI") {
  const Vec3 center = Vec3::Zero();
  SensorModel sensor;
  Pose agent;
  agent.position = Vec3(4.0, 0.0, 0.0);
  agent.pointing = Vec3::UnitZ();

  SUBCASE("single facing POI") {
    std::vector<PointOfInterest> pois{poi_at(Vec3(1.0, 0.2, 0.0).normalized())};
    const PointingChoice c = pointing_policy(agent, pois, sensor, center);
    REQUIRE(c.target_poi == 0);
    CHECK((c.pointing - pois[0].location.normalized()).norm() < 1e-12);
  }

  SUBCASE("argmax over variance") {
    std::vector<PointOfInterest> pois{poi_at(Vec3::UnitX(), 1.0, 2.0),
                                      poi_at(Vec3(1.0, 0.5, 0.0).normalized(), 1.0, 3.0)};
    const PointingChoice c = pointing_policy(agent, pois, sensor, center);
    CHECK(c.target_poi == 1);
  }

  SUBCASE("ties break to the lowest poi id") {
    std::vector<PointOfInterest> pois{poi_at(Vec3(1.0, 0.1, 0.0).normalized()),
                                      poi_at(Vec3(1.0, -0.1, 0.0).normalized())};
    const PointingChoice c = pointing_policy(agent, pois, sensor, center);
    CHECK(c.target_poi == 0);
  }

  SUBCASE("argmax is invariant under a common variance rescale") {
    std::vector<PointOfInterest> pois{poi_at(Vec3::UnitX(), 1.0, 2.0),
                                      poi_at(Vec3(1.0, 0.5, 0.0).normalized(), 1.0, 3.0)};
    const PointingChoice before = pointing_policy(agent, pois, sensor, center);
    for (auto& poi : pois) {
      poi.prior_variance *= 4.0;
    }
    const PointingChoice after = pointing_policy(agent, pois, sensor, center);
    CHECK(before.target_poi == after.target_poi);
  }

  SUBCASE("no facing POI keeps the previous pointing, flagged") {
    std::vector<PointOfInterest> pois{poi_at(-Vec3::UnitX())};
    const PointingChoice c = pointing_policy(agent, pois, sensor, center);
    CHECK_FALSE(c.target_poi.has_value());
    CHECK(c.pointing == agent.pointing);
  }
}

TEST_CASE("accumulation adds the information rate per visible POI") {
  const Vec3 center = Vec3::Zero();
  std::vector<PointOfInterest> pois{poi_at(Vec3::UnitX())};
  // Distance 2 with k = 0.5 gives sigma^-1 = 0.5.
  AgentSensor agent = agent_at(1, Vec3(3.0, 0.0, 0.0), Vec3::UnitX(), 1.0, 0.5);

  SUBCASE("no visibility leaves the POIs unchanged") {
    std::vector<AgentSensor> away{agent_at(1, Vec3(3.0, 0.0, 0.0), Vec3::UnitZ(), 0.05)};
    accumulate_observations(pois, away, center, 1.0);
    CHECK(pois[0].accumulated_information == 0.0);
  }

  SUBCASE("single observer") {
    std::vector<AgentSensor> agents{agent};
    accumulate_observations(pois, agents, center, 1.0);
    CHECK(pois[0].accumulated_information == doctest::Approx(0.5));
  }

  SUBCASE("two observers add independently") {
    AgentSensor second = agent;
    second.id = 2;
    std::vector<AgentSensor> agents{agent, second};
    accumulate_observations(pois, agents, center, 1.0);
    CHECK(pois[0].accumulated_information == doctest::Approx(1.0));
  }

  SUBCASE("rate_scale = 0 is the instantaneous mode") {
    std::vector<AgentSensor> agents{agent};
    accumulate_observations(pois, agents, center, 1.0, 0.0);
    CHECK(pois[0].accumulated_information == 0.0);
  }
}
