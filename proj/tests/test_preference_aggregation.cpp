#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rorlicz/errors.hpp"
#include "rorlicz/preference_aggregation.hpp"
#include "test_support.hpp"

using namespace rorlicz;

namespace {
ScenarioModel two_diracs() {
    return ScenarioModel({"w1", "w2"}, {MeasureVector{{1.0, 0.0}}, MeasureVector{{0.0, 1.0}}});
}

Agent agent(Utility u, std::vector<std::string> priors, std::map<std::string, double> c = {}) {
    return Agent{std::move(u), std::move(priors), std::move(c)};
}

} // namespace

TEST(Utility, FactoriesAndNormalisation) {
    EXPECT_EQ(Utility::linear(1.0)(-1.0), -1.0);
    EXPECT_THROW(Utility::linear(2.0), ValidationError);
    const auto c = Utility::normalised_cara(1.0);
    EXPECT_NEAR(c(-1.0), -1.0, 1e-12);
    EXPECT_NEAR(c(2.0), (1.0 - std::exp(-2.0)) / (std::exp(1.0) - 1.0), 1e-12);
    EXPECT_THROW(Utility::cara(1.0, 1.0), ValidationError);
    EXPECT_THROW(Utility::piecewise_linear({0.0}, {1.0, 2.0}), ValidationError); // convex
    const auto pl = Utility::piecewise_linear({-2.0, 0.0}, {3.0, 1.0, 0.5});
    EXPECT_EQ(pl(-1.0), -1.0);
    EXPECT_EQ(pl(-3.0), -5.0);
    EXPECT_EQ(pl(4.0), 2.0);
}

using testsupport::random_agents;
using testsupport::random_utility;

TEST(Utility, LossIsMinusUOfMinusX) {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 30; ++t) {
        const auto u = random_utility(rng);
        const auto phi = u.loss();
        for (double x : {0.0, 0.3, 1.0, 1.7, 4.0}) EXPECT_NEAR(phi(x), -u(-x), 1e-12 * (1 + std::abs(u(-x))));
    }
}

TEST(EvaluateUtility, Examples) {
    const auto m = two_diracs();
    const RandomVariable x{{1.0, 3.0}};
    EXPECT_EQ(evaluate_utility(m, agent(Utility::linear(1.0), {"P1", "P2"}), x), 1.0);
    EXPECT_EQ(evaluate_utility(m, agent(Utility::linear(1.0), {"P1", "P2"}, {{"P2", 5.0}}), x), 1.0);
    EXPECT_EQ(evaluate_utility(m, agent(Utility::linear(1.0), {"P1", "P2"}, {{"P1", 5.0}}), x), 3.0);
    const RandomVariable minus_one{{-1.0, -1.0}};
    EXPECT_NEAR(evaluate_utility(m, agent(Utility::normalised_cara(2.0), {"P1", "P2"}), minus_one), -1.0, 1e-9);
}

TEST(EvaluateUtility, AgentValidation) {
    const auto m = two_diracs();
    EXPECT_THROW(check_agent(m, agent(Utility::linear(1.0), {"P9"})), ValidationError);
    EXPECT_THROW(check_agent(m, agent(Utility::linear(1.0), {"P1"}, {{"P1", 1.0}})), ValidationError);
    EXPECT_THROW(check_agent(m, agent(Utility::linear(1.0), {"P1"}, {{"P2", 0.0}})), ValidationError);
    EXPECT_THROW(check_agent(m, agent(Utility::linear(1.0), {"P1", "P2"}, {{"P2", -1.0}})), ValidationError);
    EXPECT_NO_THROW(check_agent(m, agent(Utility::linear(1.0), {"P1", "P2"}, {{"P2", 1.0}})));
}

TEST(EvaluateUtility, MonotoneInTheQsOrder) {
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        const auto m = testsupport::random_model(rng);
        const auto agents = random_agents(rng, m);
        const auto x = testsupport::random_x(rng, m.num_atoms());
        RandomVariable y{x.values};
        for (std::size_t i = 0; i < y.size(); ++i)
            if (!m.is_polar(i)) y.values[i] += u(rng);
            else y.values[i] -= 10.0; // polar atoms do not matter
        for (const auto& a : agents) EXPECT_LE(evaluate_utility(m, a, x), evaluate_utility(m, a, y) + 1e-12);
    }
}

TEST(Aggregate, Examples) {
    const auto m = two_diracs();
    const auto cara = Utility::normalised_cara(1.0);
    auto agg = aggregate_family(m, {agent(cara, {"P1", "P2"})});
    EXPECT_NEAR(agg.phi_at_one[0], 1.0, 1e-12);
    EXPECT_NEAR(agg.family[0](0.5), std::expm1(0.5) / std::expm1(1.0), 1e-12);

    agg = aggregate_family(m, {agent(Utility::linear(1.0), {"P1", "P2"}, {{"P2", 1.0}})});
    EXPECT_NEAR(agg.family[1](3.0), 1.5, 1e-15);
    EXPECT_NEAR(agg.phi_at_one[1], 0.5, 1e-15);
    EXPECT_NEAR(agg.phi_at_one[0], 1.0, 1e-15);

    agg = aggregate_family(m, {agent(Utility::linear(1.0), {"P1", "P2"}), agent(cara, {"P1"})});
    for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(agg.family[0](x), std::max(x, std::expm1(x) / std::expm1(1.0)), 1e-12);
    EXPECT_EQ(agg.contributors[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(agg.contributors[1], (std::vector<std::size_t>{0}));

    EXPECT_THROW(aggregate_family(m, {agent(cara, {"P1"})}), ValidationError);
}

TEST(Aggregate, OrliczAxiomsAndPhiAtOne) {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 40; ++t) {
        const auto m = testsupport::random_model(rng);
        const auto agg = aggregate_family(m, random_agents(rng, m));
        for (std::size_t k = 0; k < m.num_priors(); ++k) {
            EXPECT_LE(agg.phi_at_one[k], 1.0 + 1e-9);
            const auto& phi = agg.family[k];
            EXPECT_EQ(phi(0.0), 0.0);
            double prev = 0.0;
            for (int i = 1; i <= 400; ++i) {
                const double x = 0.01 * i;
                const double v = phi(x);
                EXPECT_GE(v, prev);
                // midpoint convexity
                EXPECT_LE(phi(x - 0.005), 0.5 * (prev + v) + 1e-12 * (1 + v));
                prev = v;
            }
        }
    }
}

TEST(Aggregate, AddingAnAgentIncreasesNorms) {
    std::mt19937_64 rng(74);
    for (int t = 0; t < 30; ++t) {
        const auto m = testsupport::random_model(rng);
        auto agents = random_agents(rng, m);
        const auto f1 = aggregate_family(m, agents).family;
        auto extra = random_agents(rng, m);
        agents.push_back(extra.front());
        const auto f2 = aggregate_family(m, agents).family;
        const auto x = testsupport::random_x(rng, m.num_atoms());
        for (double s : {0.1, 1.0, 2.5})
            for (std::size_t k = 0; k < m.num_priors(); ++k) EXPECT_LE(f1[k](s), f2[k](s) * (1 + 1e-15));
        EXPECT_LE(luxemburg_norm(m, x, f1).value, luxemburg_norm(m, x, f2).value * (1 + 1e-9));
    }
}

TEST(Extension, RandomAgentsNoViolations) {
    std::mt19937_64 rng(75);
    int checks = 0;
    for (int t = 0; t < 25; ++t) {
        const auto m = testsupport::random_model(rng, 4, 4, 4);
        const auto agents = random_agents(rng, m);
        const auto f = aggregate_family(m, agents).family;
        const auto rep = verify_extension_bound(m, agents, f, 40, 100 + t);
        EXPECT_EQ(rep.violations, 0) << t;
        EXPECT_LE(rep.max_slack, 1e-10);
        checks += rep.checks;
    }
    EXPECT_GT(checks, 1000);
}

TEST(Extension, ZeroVariable) {
    const auto m = two_diracs();
    const std::vector<Agent> agents{agent(Utility::linear(1.0), {"P1", "P2"}, {{"P2", 2.0}})};
    const auto f = aggregate_family(m, agents).family;
    const auto rep = check_extension_bound(m, agents, f, RandomVariable{{0.0, 0.0}});
    EXPECT_EQ(rep.violations, 0);
    EXPECT_EQ(rep.checks, 2);
    EXPECT_DOUBLE_EQ(rep.max_slack, -1.0);
}
