#include <gtest/gtest.h>

#include "rorlicz/countable_model.hpp"
#include "rorlicz/errors.hpp"
#include "rorlicz/family.hpp"
#include "rorlicz/scenario_model.hpp"

using namespace rorlicz;

namespace {
ScenarioModel three_atoms() {
    return ScenarioModel({"a", "b", "c"}, {MeasureVector{{0.5, 0.5, 0.0}}, MeasureVector{{0.0, 1.0, 0.0}}},
                         {"P", "Q"});
}
} // namespace

TEST(ScenarioModel, ProbabilitySumFailureNamesPrior) {
    try {
        ScenarioModel({"a", "b"}, {MeasureVector{{0.5, 0.5}}, MeasureVector{{0.5, 0.4}}}, {"good", "bad"});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("'bad'"), std::string::npos);
    }
}

TEST(ScenarioModel, SmallDriftRenormalised) {
    ScenarioModel m({"a", "b"}, {MeasureVector{{0.5, 0.5 + 1e-11}}});
    EXPECT_NEAR(m.prior(0).total_mass(), 1.0, 1e-15);
}

TEST(ScenarioModel, RejectsBadInput) {
    EXPECT_THROW(ScenarioModel({}, {MeasureVector{{}}}), ValidationError);
    EXPECT_THROW(ScenarioModel({"a"}, {}), ValidationError);
    EXPECT_THROW(ScenarioModel({"a", "b"}, {MeasureVector{{1.0}}}), ValidationError);
    EXPECT_THROW(ScenarioModel({"a", "b"}, {MeasureVector{{1.5, -0.5}}}), ValidationError);
    EXPECT_THROW(ScenarioModel({"a"}, {MeasureVector{{1.0}}, MeasureVector{{1.0}}}, {"P", "P"}), ValidationError);
}

TEST(ScenarioModel, PolarSetAndCanonicalForm) {
    const auto m = three_atoms();
    EXPECT_EQ(m.polar_set(), std::vector<std::size_t>{2});
    EXPECT_EQ(m.prior_labels(), (std::vector<std::string>{"P", "Q"}));
    const auto c = canonicalize(m, RandomVariable{{1.0, -2.0, 7.0}});
    EXPECT_EQ(c.values, (std::vector<double>{1.0, -2.0, 0.0}));
    EXPECT_TRUE(qs_equal(m, RandomVariable{{1.0, 2.0, 3.0}}, RandomVariable{{1.0, 2.0, -9.0}}));
}

TEST(ScenarioModel, QuasiSureOrder) {
    const auto m = three_atoms();
    EXPECT_EQ(qs_order(m, RandomVariable{{0, 0, 5}}, RandomVariable{{1, 0, 0}}), QsOrder::Less);
    EXPECT_EQ(qs_order(m, RandomVariable{{2, 1, 0}}, RandomVariable{{1, 0, 9}}), QsOrder::Greater);
    EXPECT_EQ(qs_order(m, RandomVariable{{2, 0, 0}}, RandomVariable{{1, 1, 0}}), QsOrder::Incomparable);
    EXPECT_EQ(to_string(QsOrder::Incomparable), "incomparable");
}

TEST(ScenarioModel, ExpectationAndEssSup) {
    const auto m = three_atoms();
    const std::vector<double> g{2.0, 4.0, INFINITY};
    EXPECT_DOUBLE_EQ(expectation(m.prior(0), g), 3.0);
    EXPECT_DOUBLE_EQ(qs_ess_sup(m, RandomVariable{{-3.0, 1.0, 100.0}}), 3.0);
    EXPECT_DOUBLE_EQ(ess_sup(m.prior(1), RandomVariable{{-3.0, 1.0, 100.0}}), 1.0);
    EXPECT_THROW(expectation(MeasureVector{{-1.0, 2.0, 0.0}}, g), DomainError);
}

TEST(CountableModel, GaussianLadderShape) {
    const auto g = CountableModel::gaussian(0.01, {1.0, 2.0}, {1, 3});
    EXPECT_EQ(g.atoms_at(0), 200u);
    EXPECT_EQ(g.atoms_at(1), 400u);
    const auto l1 = g.level(1);
    EXPECT_EQ(l1.num_priors(), 3u);
    EXPECT_EQ(l1.prior_label(2), "P3");
    EXPECT_NEAR(l1.prior(0).total_mass(), 1.0, 1e-14);
    EXPECT_DOUBLE_EQ(g.values()[0], 0.005);
    EXPECT_DOUBLE_EQ(g.values()[1], -0.005);
    EXPECT_THROW(CountableModel::custom({1, 2}, {1, 1}, {2, 1}, {}), ValidationError);
    EXPECT_THROW(CountableModel::custom({1, 2}, {1, 1}, {1, 2}, {2, 1}), ValidationError);
}

TEST(Family, ResolveAgainstModel) {
    const auto m = three_atoms();
    FamilySpec s;
    s.kind = FamilySpec::Kind::ByLabel;
    s.by_label.emplace("P", OrliczFunction::power(2.0));
    s.phi = OrliczFunction::power(1.0);
    const auto f = s.resolve(m);
    EXPECT_EQ(f[0].exponent(), 2.0);
    EXPECT_EQ(f[1].exponent(), 1.0);
    s.by_label.emplace("Z", OrliczFunction::power(3.0));
    EXPECT_THROW(s.resolve(m), ValidationError);
    EXPECT_THROW(OrliczFamily::parametric(OrliczFunction::power(1.0), {0.0}, {0.0}), ValidationError);
}

TEST(Family, PhiMaxDominanceForDoublyPenalised) {
    const auto phi = OrliczFunction::exponential(1.0);
    const auto f = OrliczFamily::parametric(phi, {1.0, 2.5, 0.5}, {0.0, 1.0, 3.0});
    EXPECT_DOUBLE_EQ(f.theta_sup(), 2.5);
    const auto mx = f.phi_max();
    for (int i = 0; i <= 100; ++i) {
        const double x = 0.03 * i;
        EXPECT_LE(mx(x), phi(f.theta_sup() * x) * (1 + 1e-15));
        for (std::size_t k = 0; k < f.size(); ++k) EXPECT_GE(mx(x), f[k](x));
    }
}
