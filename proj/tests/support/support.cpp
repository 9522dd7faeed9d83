#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "gdag/known_graphs.hpp"

namespace gdag::testkit {

namespace {

GDag build(Rng& rng, int n, double p_unobserved, double p_edge)
{
    std::bernoulli_distribution hidden(p_unobserved);
    std::bernoulli_distribution edge(p_edge);
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) {
        nodes.push_back({"N" + std::to_string(i), hidden(rng) ? NodeKind::unobserved : NodeKind::observed});
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (edge(rng)) {
                edges.emplace_back(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
            }
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return GDag::from_indices(std::move(nodes), std::move(edges));
}

} // namespace

GDag random_gdag(Rng& rng, int n, double p_unobserved, double p_edge)
{
    return build(rng, n, p_unobserved, p_edge);
}

GDag random_dag(Rng& rng, int n, double p_edge)
{
    return build(rng, n, 0.0, p_edge);
}

std::vector<Rational> random_simplex(Rng& rng, std::size_t size)
{
    std::uniform_int_distribution<int> weight(0, 4);
    std::vector<Rational> w(size);
    Rational total = 0;
    while (total == 0) {
        total = 0;
        for (auto& x : w) {
            x = weight(rng);
            total += x;
        }
    }
    for (auto& x : w) {
        x /= total;
    }
    return w;
}

std::vector<Rational> random_kernel(Rng& rng, std::size_t rows, std::size_t width, bool allow_deterministic)
{
    std::bernoulli_distribution point(allow_deterministic ? 0.5 : 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, width - 1);
    std::vector<Rational> table;
    table.reserve(rows * width);
    for (std::size_t r = 0; r < rows; ++r) {
        if (point(rng)) {
            const std::size_t hot = pick(rng);
            for (std::size_t c = 0; c < width; ++c) {
                table.emplace_back(c == hot ? 1 : 0);
            }
        } else {
            const auto row = random_simplex(rng, width);
            table.insert(table.end(), row.begin(), row.end());
        }
    }
    return table;
}

namespace {

std::size_t product(const std::vector<int>& cards)
{
    std::size_t p = 1;
    for (int c : cards) {
        p *= static_cast<std::size_t>(c);
    }
    return p;
}

void fill_kernels(Rng& rng, ClassicalGmcModel& m)
{
    m.kernels.clear();
    for (int v = 0; v < m.gdag.size(); ++v) {
        m.kernels.push_back(random_kernel(rng, product(m.input_cards(v)), product(m.output_cards(v))));
    }
    m.validate();
}

} // namespace

ClassicalGmcModel random_classical_model(Rng& rng, const GDag& g, int max_card, int min_card)
{
    std::uniform_int_distribution<int> card(min_card, max_card);
    ClassicalGmcModel m;
    m.gdag = g;
    for (int v = 0; v < g.size(); ++v) {
        m.cards.push_back(g.is_observed(v) ? card(rng) : 1);
    }
    for (const auto& [p, c] : g.edges()) {
        if (!g.is_observed(p)) {
            m.message_cards[{p, c}] = card(rng);
        }
    }
    fill_kernels(rng, m);
    return m;
}

ClassicalGmcModel random_classical_model_fixed(Rng& rng, const GDag& g, int card, int message_card)
{
    ClassicalGmcModel m;
    m.gdag = g;
    for (int v = 0; v < g.size(); ++v) {
        m.cards.push_back(g.is_observed(v) ? card : 1);
    }
    for (const auto& [p, c] : g.edges()) {
        if (!g.is_observed(p)) {
            m.message_cards[{p, c}] = message_card;
        }
    }
    fill_kernels(rng, m);
    return m;
}

std::vector<Cpt> random_cpts(Rng& rng, const GDag& dag, const std::vector<int>& cards)
{
    std::vector<Cpt> cpts;
    for (int v = 0; v < dag.size(); ++v) {
        std::vector<Variable> given;
        std::size_t rows = 1;
        for (int p : dag.parents(v)) {
            given.push_back({dag.id(p), cards[static_cast<std::size_t>(p)]});
            rows *= static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]);
        }
        // reversed parent order so that CPT layout is not tied to index order
        std::reverse(given.begin(), given.end());
        const auto width = static_cast<std::size_t>(cards[static_cast<std::size_t>(v)]);
        cpts.emplace_back(std::vector<Variable>{{dag.id(v), cards[static_cast<std::size_t>(v)]}}, std::move(given),
                          random_kernel(rng, rows, width));
    }
    return cpts;
}

namespace {

struct PathSearch {
    const GDag& g;
    NodeSet y;
    NodeSet z;
    NodeSet an_z;

    bool blocked(int prev, int mid, int next) const
    {
        const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
        return collider ? !an_z.contains(mid) : z.contains(mid);
    }

    bool open_path(int prev, int cur, NodeSet visited) const
    {
        if (y.contains(cur)) {
            return true;
        }
        const NodeSet neighbours = g.parents(cur) | g.children(cur);
        for (int next : neighbours - visited) {
            if (prev >= 0 && blocked(prev, cur, next)) {
                continue;
            }
            if (open_path(cur, next, visited | NodeSet::single(next))) {
                return true;
            }
        }
        return false;
    }
};

} // namespace

NodeSet as_variables(const GDag& g, const Distribution& p, NodeSet nodes)
{
    NodeSet out;
    for (int v : nodes) {
        out.insert(p.index_of(g.id(v)));
    }
    return out;
}

bool path_blocking_dsep(const GDag& g, NodeSet x, NodeSet y, NodeSet z)
{
    // An(z) computed by hand rather than through the library
    NodeSet an_z = z;
    for (bool grew = true; grew;) {
        grew = false;
        for (int v : an_z) {
            if (!g.parents(v).subset_of(an_z)) {
                an_z |= g.parents(v);
                grew = true;
            }
        }
    }
    const PathSearch search{g, y, z, an_z};
    for (int a : x) {
        if (search.open_path(-1, a, NodeSet::single(a))) {
            return false;
        }
    }
    return true;
}

std::vector<CIStatement> all_triples(NodeSet members)
{
    std::vector<int> m(members.begin(), members.end());
    std::size_t codes = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
        codes *= 4;
    }
    std::vector<CIStatement> out;
    for (std::size_t code = 0; code < codes; ++code) {
        CIStatement s;
        std::size_t c = code;
        for (int v : m) {
            switch (c % 4) {
            case 1: s.x.insert(v); break;
            case 2: s.y.insert(v); break;
            case 3: s.z.insert(v); break;
            default: break;
            }
            c /= 4;
        }
        if (!s.x.empty() && !s.y.empty()) {
            out.push_back(s);
        }
    }
    return out;
}

ConditionalTable conditional_on(const Distribution& joint, const std::vector<std::string>& given)
{
    const NodeSet g = joint.var_set(given);
    const NodeSet rest = joint.all() - g;
    std::vector<Variable> gv, rv;
    for (int i = 0; i < joint.variable_count(); ++i) {
        (g.contains(i) ? gv : rv).push_back(joint.variables()[static_cast<std::size_t>(i)]);
    }
    const auto pg = joint.marginal_table(g);
    const Distribution reordered = [&] {
        // given variables first so that the joint table is already row-major in (given, rest)
        std::vector<Variable> vars = gv;
        vars.insert(vars.end(), rv.begin(), rv.end());
        std::vector<int> cards;
        for (const auto& v : vars) {
            cards.push_back(v.card);
        }
        const OutcomeSpace space(cards);
        std::vector<Rational> probs(space.size());
        std::vector<int> outcome(vars.size()), original(static_cast<std::size_t>(joint.variable_count()));
        for (std::size_t i = 0; i < space.size(); ++i) {
            space.decode(i, outcome);
            std::size_t gi = 0, ri = gv.size();
            for (int k = 0; k < joint.variable_count(); ++k) {
                original[static_cast<std::size_t>(k)] = g.contains(k) ? outcome[gi++] : outcome[ri++];
            }
            probs[i] = joint.prob(original);
        }
        return Distribution(vars, probs);
    }();
    std::size_t width = 1;
    for (const auto& v : rv) {
        width *= static_cast<std::size_t>(v.card);
    }
    std::vector<Rational> probs = reordered.probs();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] /= pg[i / width];
    }
    return ConditionalTable(rv, gv, probs);
}

ConditionalTable random_instrumental_family(Rng& rng, int max_card, int latent_card)
{
    const GDag g = graphs::instrumental(); // Y A B U
    std::uniform_int_distribution<int> card(2, max_card);
    ClassicalGmcModel m;
    m.gdag = g;
    m.cards = {card(rng), card(rng), card(rng), 1};
    const int u = g.index_of("U");
    m.message_cards = {{{u, g.index_of("A")}, latent_card}, {{u, g.index_of("B")}, latent_card}};
    for (int v = 0; v < g.size(); ++v) {
        std::size_t rows = 1, width = 1;
        for (int c : m.input_cards(v)) {
            rows *= static_cast<std::size_t>(c);
        }
        for (int c : m.output_cards(v)) {
            width *= static_cast<std::size_t>(c);
        }
        if (v == g.index_of("Y")) {
            m.kernels.emplace_back(width, Rational(1, static_cast<long>(width)));
        } else {
            m.kernels.push_back(random_kernel(rng, rows, width));
        }
    }
    const Distribution joint = observed_from_classical_gmc(m);
    return conditional_on(joint, {"Y"});
}

Distribution random_triangle_distribution(Rng& rng, int max_latent_card)
{
    const GDag g = graphs::triangle();
    std::uniform_int_distribution<int> card(2, 3);
    std::uniform_int_distribution<int> latent(1, max_latent_card);
    ClassicalGmcModel m;
    m.gdag = g;
    m.cards = {card(rng), card(rng), card(rng), 1, 1, 1};
    for (int l : g.unobserved()) {
        const int c = latent(rng);
        for (int child : g.children(l)) {
            m.message_cards[{l, child}] = c;
        }
    }
    for (int v = 0; v < g.size(); ++v) {
        std::size_t rows = 1, width = 1;
        for (int c : m.input_cards(v)) {
            rows *= static_cast<std::size_t>(c);
        }
        for (int c : m.output_cards(v)) {
            width *= static_cast<std::size_t>(c);
        }
        if (g.is_observed(v)) {
            m.kernels.push_back(random_kernel(rng, rows, width));
        } else {
            m.kernels.push_back(random_kernel(rng, 1, width, false));
        }
    }
    return observed_from_classical_gmc(m);
}

Rational evaluate_exact(const LinIneq& row, const std::vector<Rational>& point)
{
    Rational s = 0;
    for (std::size_t k = 0; k < row.dimension(); ++k) {
        s += row.coeffs()[k] * point[k];
    }
    return s;
}

bool extends_along(const std::vector<LinIneq>& rows, std::vector<Rational> point, SubsetMask coord)
{
    const std::size_t k = coord - 1;
    point[k] = 0;
    std::optional<Rational> lo, hi;
    for (const auto& r : rows) {
        const auto a = r.coeffs()[k];
        const Rational rest = evaluate_exact(r, point);
        if (a == 0) {
            if (rest < 0) {
                return false;
            }
            continue;
        }
        const Rational bound = -rest / a;
        if (a > 0 && (!lo || bound > *lo)) {
            lo = bound;
        }
        if (a < 0 && (!hi || bound < *hi)) {
            hi = bound;
        }
    }
    return !lo || !hi || *lo <= *hi;
}

bool irredundant(const Cone& c)
{
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::vector<LinIneq> rest;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j != i) {
                rest.push_back(c.ineqs()[j]);
            }
        }
        if (implied_by(c.ineqs()[i], Cone(c.variables(), rest))) {
            return false;
        }
    }
    return true;
}

} // namespace gdag::testkit
