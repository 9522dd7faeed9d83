#include <gtest/gtest.h>

#include "gdag/dsep.hpp"
#include "gdag/entropy_cone.hpp"
#include "gdag/error.hpp"
#include "gdag/known_graphs.hpp"
#include "gdag/lp.hpp"
#include "support.hpp"

using namespace gdag;

namespace {

LinIneq row(int n, std::initializer_list<std::pair<SubsetMask, std::int64_t>> terms)
{
    LinIneq r(n);
    for (const auto& [s, v] : terms) {
        r.add(s, v);
    }
    return r.normalized();
}

bool equivalent(const Cone& a, const Cone& b)
{
    for (const auto& r : a.ineqs()) {
        if (!implied_by(r, b)) {
            return false;
        }
    }
    for (const auto& r : b.ineqs()) {
        if (!implied_by(r, a)) {
            return false;
        }
    }
    return true;
}

void expect_irredundant(const Cone& c)
{
    EXPECT_TRUE(testkit::irredundant(c));
}

} // namespace

TEST(LinIneq, Normalization)
{
    const LinIneq r = row(2, {{1, 4}, {3, -6}});
    EXPECT_EQ(r.coeff(1), 2);
    EXPECT_EQ(r.coeff(3), -3);
    EXPECT_EQ(row(2, {{1, -4}}).coeff(1), -1);
    const LinIneq q = LinIneq::from_rational(2, {{1, Rational(1, 2)}, {2, Rational(-1, 3)}});
    EXPECT_EQ(q.coeff(1), 3);
    EXPECT_EQ(q.coeff(2), -2);
    EXPECT_THROW(LinIneq::from_rational(2, {{4, Rational(1)}}), PreconditionError);
}

TEST(ElementalInequalities, Counts)
{
    EXPECT_EQ(elemental_inequalities({"X"}).size(), 1u);
    EXPECT_EQ(elemental_inequalities({"X", "Y"}).size(), 3u);
    EXPECT_EQ(elemental_inequalities({"X", "Y", "Z"}).size(), 9u);
    for (int n = 1; n <= 6; ++n) {
        std::vector<std::string> vars;
        for (int i = 0; i < n; ++i) {
            vars.push_back("V" + std::to_string(i));
        }
        const std::size_t expected = static_cast<std::size_t>(n) +
                                     static_cast<std::size_t>(n * (n - 1) / 2) * (std::size_t{1} << std::max(n - 2, 0));
        EXPECT_EQ(elemental_inequalities(vars).size(), n == 1 ? 1u : expected);
    }
    EXPECT_THROW(elemental_inequalities({}), PreconditionError);
    EXPECT_EQ(elemental_inequalities({"X"}).ineqs()[0], row(1, {{1, 1}}));
}

TEST(MarkovRows, Examples)
{
    const GDag chain = graphs::chain(); // X Z Y
    const auto rows = markov_constraint_rows(chain);
    // -I(Y ; X | Z) >= 0
    const LinIneq target = conditional_mutual_information_row(3, 0b100, 0b001, 0b010).negated().normalized();
    EXPECT_NE(std::find(rows.begin(), rows.end(), target), rows.end());

    const GDag pair({{"X", NodeKind::observed}, {"Y", NodeKind::observed}}, {});
    const Cone collapsed({"X", "Y"}, markov_constraint_rows(pair));
    EXPECT_EQ(collapsed.size(), 1u);
    EXPECT_TRUE(collapsed.contains(row(2, {{1, -1}, {2, -1}, {3, 1}})));

    EXPECT_TRUE(markov_constraint_rows(GDag({{"X", NodeKind::observed}}, {})).empty());
}

TEST(ImpliedBy, Examples)
{
    const Cone shannon = elemental_inequalities({"X", "Y"});
    EXPECT_TRUE(implied_by(shannon.ineqs()[0], shannon));
    EXPECT_TRUE(implied_by(row(2, {{1, 1}}), shannon));
    EXPECT_FALSE(implied_by(row(2, {{1, -1}}), shannon));
    EXPECT_THROW(implied_by(row(3, {{1, 1}}), shannon), PreconditionError);
}

TEST(LpFeasible, Examples)
{
    LpProblem infeasible;
    const int x = infeasible.add_variable("x");
    infeasible.add_constraint({{{x, Rational(1)}}, Relation::greater_equal, Rational(1)});
    infeasible.add_constraint({{{x, Rational(-1)}}, Relation::greater_equal, Rational(0)});
    EXPECT_FALSE(lp_feasible(infeasible).has_value());

    LpProblem simple;
    const int y = simple.add_variable("x");
    simple.add_constraint({{{y, Rational(1)}}, Relation::greater_equal, Rational(0)});
    const auto w = lp_feasible(simple);
    ASSERT_TRUE(w.has_value());
    EXPECT_GE((*w)[0], 0);

    LpProblem bad;
    EXPECT_THROW(bad.add_constraint({{{3, Rational(1)}}, Relation::equal, Rational(0)}), PreconditionError);
}

TEST(FourierMotzkin, Examples)
{
    // x = H(X), y = H(Y); the XY coordinate is unused
    const Cone c({"X", "Y"}, {row(2, {{1, 1}}), row(2, {{2, 1}, {1, -1}})});
    const Cone out = fourier_motzkin_eliminate(c, 1);
    EXPECT_EQ(out, Cone({"X", "Y"}, {row(2, {{2, 1}})}));

    const Cone projected = fourier_motzkin_eliminate(elemental_inequalities({"X", "Y"}), 3);
    EXPECT_EQ(projected, Cone({"X", "Y"}, {row(2, {{1, 1}}), row(2, {{2, 1}})}));

    const Cone untouched({"X", "Y"}, {row(2, {{1, 1}}), row(2, {{2, 1}})});
    EXPECT_EQ(fourier_motzkin_eliminate(untouched, 3), untouched);
    EXPECT_THROW(fourier_motzkin_eliminate(untouched, 4), PreconditionError);
    EXPECT_THROW(fourier_motzkin_eliminate(untouched, 0), PreconditionError);
}

TEST(FourierMotzkin, ProjectionMatchesExtensionOracle)
{
    testkit::Rng rng(71);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + trial % 2;
        const std::size_t dim = (std::size_t{1} << n) - 1;
        std::vector<LinIneq> rows;
        const int m = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < m; ++i) {
            std::vector<std::int64_t> c(dim);
            for (auto& x : c) {
                x = coef(rng);
            }
            rows.emplace_back(n, c);
        }
        std::vector<std::string> vars{"X", "Y", "Z"};
        vars.resize(static_cast<std::size_t>(n));
        const Cone c(vars, rows);
        const auto coord = static_cast<SubsetMask>(1 + rng() % dim);
        const Cone out = fourier_motzkin_eliminate(c, coord);
        for (const auto& r : out.ineqs()) {
            EXPECT_EQ(r.coeff(coord), 0);
        }
        for (int p = 0; p < 60; ++p) {
            std::vector<Rational> point(dim);
            for (auto& x : point) {
                x = Rational(val(rng), 1 + static_cast<int>(rng() % 3));
            }
            point[coord - 1] = 0;
            bool projected = true;
            for (const auto& r : out.ineqs()) {
                projected = projected && testkit::evaluate_exact(r, point) >= 0;
            }
            ASSERT_EQ(projected, testkit::extends_along(c.ineqs(), point, coord));
        }
    }
}

TEST(RemoveRedundant, MinimalAndEquivalent)
{
    testkit::Rng rng(73);
    std::uniform_int_distribution<int> coef(-2, 3);
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<LinIneq> rows;
        for (int i = 0; i < 8; ++i) {
            std::vector<std::int64_t> c(7);
            for (auto& x : c) {
                x = coef(rng);
            }
            rows.emplace_back(3, c);
        }
        const Cone c({"X", "Y", "Z"}, rows);
        const Cone r = remove_redundant(c);
        EXPECT_LE(r.size(), c.size());
        EXPECT_TRUE(equivalent(c, r));
        expect_irredundant(r);
    }
    expect_irredundant(remove_redundant(elemental_inequalities({"A", "B", "C", "D"})));
    EXPECT_EQ(remove_redundant(elemental_inequalities({"A", "B", "C", "D"})).size(), 28u);
}

TEST(DeriveCones, Examples)
{
    const GDag chain = graphs::chain();
    const Cone ec = derive_classical_cone(chain);
    std::vector<LinIneq> rows = elemental_inequalities({"X", "Z", "Y"}).ineqs();
    for (const auto& r : markov_constraint_rows(chain)) {
        rows.push_back(r);
    }
    EXPECT_TRUE(equivalent(ec, Cone({"X", "Z", "Y"}, rows)));
    expect_irredundant(ec);

    const GDag tri = graphs::triangle();
    const Cone ei = derive_independence_cone(tri);
    EXPECT_TRUE(equivalent(ei, elemental_inequalities({"A", "B", "C"})));

    const GDag bell = graphs::bell();
    const Cone bi = derive_independence_cone(bell);
    const LinIneq no_signal = conditional_mutual_information_row(4, bi.coordinate({"A"}), bi.coordinate({"Y"}),
                                                                 bi.coordinate({"X"}))
                                  .negated()
                                  .normalized();
    EXPECT_TRUE(implied_by(no_signal, bi));
    expect_irredundant(bi);

    const GDag single({{"X", NodeKind::observed}}, {});
    EXPECT_EQ(derive_classical_cone(single), Cone({"X"}, {row(1, {{1, 1}})}));
    EXPECT_EQ(derive_independence_cone(single), Cone({"X"}, {row(1, {{1, 1}})}));

    std::vector<Node> nodes;
    for (int i = 0; i < 7; ++i) {
        nodes.push_back({"N" + std::to_string(i), NodeKind::observed});
    }
    EXPECT_THROW(derive_classical_cone(GDag(nodes, {})), PreconditionError);
}

TEST(DeriveCones, SoundOnClassicalModels)
{
    testkit::Rng rng(79);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const GDag g = testkit::random_gdag(rng, 3 + trial % 2, 0.3, 0.5);
        if (g.observed().empty()) {
            continue;
        }
        const Cone ec = derive_classical_cone(g);
        const Cone ei = derive_independence_cone(g);
        expect_irredundant(ec);
        expect_irredundant(ei);
        // C is inside I, so every E_I row follows from E_C
        EXPECT_TRUE(non_implied_rows(ei, ec).empty());
        for (int sample = 0; sample < 5; ++sample) {
            const Distribution p = observed_from_classical_gmc(testkit::random_classical_model(rng, g, 3));
            ASSERT_TRUE(satisfies_I(g, p).holds);
            const auto h = entropy_vector(p);
            for (const auto& r : ec.ineqs()) {
                EXPECT_GE(r.evaluate(h), -1e-9);
            }
            for (const auto& r : ei.ineqs()) {
                EXPECT_GE(r.evaluate(h), -1e-9);
            }
            ++checked;
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(Cone, CoordinateNames)
{
    const Cone c({"B", "A"}, {});
    EXPECT_EQ(c.coordinate_name(3), "A,B");
    EXPECT_EQ(c.coordinate({"A"}), 2u);
    EXPECT_THROW(c.coordinate({"Q"}), UnknownNodeError);
}
