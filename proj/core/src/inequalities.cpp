#include "gdag/inequalities.hpp"

#include <algorithm>
#include <array>

#include "gdag/error.hpp"
#include "gdag/lp.hpp"

namespace gdag {

namespace {

struct Abc {
    int a;
    int b;
    int c;
};

Abc triangle_indices(const Distribution& p)
{
    if (p.variable_count() != 3) {
        throw PreconditionError("triangle tests need exactly the variables A, B, C");
    }
    try {
        return {p.index_of("A"), p.index_of("B"), p.index_of("C")};
    } catch (const UnknownNodeError&) {
        throw PreconditionError("triangle tests need exactly the variables A, B, C");
    }
}

} // namespace

double triangle_monogamy_margin(const Distribution& p)
{
    const auto [a, b, c] = triangle_indices(p);
    const NodeSet sa = NodeSet::single(a);
    const NodeSet sb = NodeSet::single(b);
    const NodeSet sc = NodeSet::single(c);
    return mutual_information(p, sa, sb) + mutual_information(p, sb, sc) - entropy(p, sb);
}

bool triangle_gpt_feasible(const Distribution& p)
{
    const auto [a, b, c] = triangle_indices(p);
    const int ka = p.variables()[static_cast<std::size_t>(a)].card;
    const int kb = p.variables()[static_cast<std::size_t>(b)].card;
    const int kc = p.variables()[static_cast<std::size_t>(c)].card;

    // Marginal tables are row-major in ascending variable index; index them
    // through the positions of a, b, c.
    auto pair_table = [&](int u, int v) {
        const auto t = p.marginal_table(NodeSet::single(u) | NodeSet::single(v));
        const int kv = p.variables()[static_cast<std::size_t>(std::max(u, v))].card;
        return [t, u, v, kv](int xu, int xv) {
            const int lo = u < v ? xu : xv;
            const int hi = u < v ? xv : xu;
            return t[static_cast<std::size_t>(lo * kv + hi)];
        };
    };
    const auto pab = pair_table(a, b);
    const auto pbc = pair_table(b, c);
    const auto pa = p.marginal_table(NodeSet::single(a));
    const auto pc = p.marginal_table(NodeSet::single(c));

    LpProblem lp;
    auto var = [&](int x, int y, int z) { return (x * kb + y) * kc + z; };
    for (int x = 0; x < ka; ++x) {
        for (int y = 0; y < kb; ++y) {
            for (int z = 0; z < kc; ++z) {
                lp.add_variable("p" + std::to_string(x) + std::to_string(y) + std::to_string(z), true);
            }
        }
    }
    for (int x = 0; x < ka; ++x) {
        for (int y = 0; y < kb; ++y) {
            LinearConstraint con{{}, Relation::equal, pab(x, y)};
            for (int z = 0; z < kc; ++z) {
                con.terms.emplace_back(var(x, y, z), 1);
            }
            lp.add_constraint(std::move(con));
        }
    }
    for (int y = 0; y < kb; ++y) {
        for (int z = 0; z < kc; ++z) {
            LinearConstraint con{{}, Relation::equal, pbc(y, z)};
            for (int x = 0; x < ka; ++x) {
                con.terms.emplace_back(var(x, y, z), 1);
            }
            lp.add_constraint(std::move(con));
        }
    }
    for (int x = 0; x < ka; ++x) {
        for (int z = 0; z < kc; ++z) {
            LinearConstraint con{{}, Relation::equal, pa[static_cast<std::size_t>(x)] * pc[static_cast<std::size_t>(z)]};
            for (int y = 0; y < kb; ++y) {
                con.terms.emplace_back(var(x, y, z), 1);
            }
            lp.add_constraint(std::move(con));
        }
    }
    return lp_feasible(lp).has_value();
}

Rational instrumental_value(const ConditionalTable& p)
{
    const auto& vars = p.variables();
    const auto& given = p.given();
    if (vars.size() != 2 || given.size() != 1 || given[0].id != "Y") {
        throw PreconditionError("instrumental value needs a table over {A, B} given {Y}");
    }
    int ia = -1;
    for (int i = 0; i < 2; ++i) {
        if (vars[static_cast<std::size_t>(i)].id == "A") {
            ia = i;
        }
    }
    if (ia < 0 || vars[static_cast<std::size_t>(1 - ia)].id != "B") {
        throw PreconditionError("instrumental value needs a table over {A, B} given {Y}");
    }
    const int ka = vars[static_cast<std::size_t>(ia)].card;
    const int kb = vars[static_cast<std::size_t>(1 - ia)].card;
    const auto ky = p.given_size();
    Rational best = -1;
    std::array<int, 2> outcome{};
    for (int b = 0; b < kb; ++b) {
        Rational sum = 0;
        for (int a = 0; a < ka; ++a) {
            outcome[static_cast<std::size_t>(ia)] = a;
            outcome[static_cast<std::size_t>(1 - ia)] = b;
            const std::size_t slice = p.slice_space().index(outcome);
            Rational m = 0;
            for (std::size_t y = 0; y < ky; ++y) {
                m = std::max(m, p.at(y, slice));
            }
            sum += m;
        }
        best = std::max(best, sum);
    }
    return best;
}

} // namespace gdag
