#include "gdag/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "gdag/error.hpp"

namespace gdag {

OutcomeSpace::OutcomeSpace(std::vector<int> cards) : cards_(std::move(cards)), strides_(cards_.size())
{
    size_ = 1;
    for (std::size_t i = cards_.size(); i-- > 0;) {
        if (cards_[i] < 1) {
            throw ValidationError("cardinalities must be at least 1");
        }
        strides_[i] = size_;
        size_ *= static_cast<std::size_t>(cards_[i]);
    }
}

std::size_t OutcomeSpace::index(std::span<const int> outcome) const
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cards_.size(); ++i) {
        idx += static_cast<std::size_t>(outcome[i]) * strides_[i];
    }
    return idx;
}

void OutcomeSpace::decode(std::size_t index, std::span<int> outcome) const
{
    for (std::size_t i = 0; i < cards_.size(); ++i) {
        outcome[i] = static_cast<int>(index / strides_[i]);
        index %= strides_[i];
    }
}

namespace {

std::vector<int> cards_of(const std::vector<Variable>& vars)
{
    std::vector<int> cards;
    for (const auto& v : vars) {
        cards.push_back(v.card);
    }
    return cards;
}

void check_variable_ids(const std::vector<Variable>& vars)
{
    std::set<std::string_view> seen;
    for (const auto& v : vars) {
        if (v.id.empty()) {
            throw ValidationError("variable id must be nonempty");
        }
        if (!seen.insert(v.id).second) {
            throw ValidationError("duplicate variable '" + v.id + "'");
        }
    }
}

/// Strides of a subset's marginal table, expressed per full-space variable
/// (zero for non-members), so that a full outcome maps straight to a
/// marginal index.
std::vector<std::size_t> subset_strides(std::span<const int> cards, NodeSet subset)
{
    std::vector<std::size_t> strides(cards.size(), 0);
    std::size_t s = 1;
    for (std::size_t i = cards.size(); i-- > 0;) {
        if (subset.contains(static_cast<int>(i))) {
            strides[i] = s;
            s *= static_cast<std::size_t>(cards[i]);
        }
    }
    return strides;
}

std::size_t subset_size(std::span<const int> cards, NodeSet subset)
{
    std::size_t s = 1;
    for (int i : subset) {
        s *= static_cast<std::size_t>(cards[static_cast<std::size_t>(i)]);
    }
    return s;
}

double plogp_sum(const std::vector<Rational>& table)
{
    double h = 0.0;
    for (const auto& q : table) {
        if (sgn(q) > 0) {
            const double p = q.get_d();
            h -= p * std::log2(p);
        }
    }
    return h;
}

} // namespace

Distribution::Distribution(std::vector<Variable> variables, std::vector<Rational> probs)
    : variables_(std::move(variables)), probs_(std::move(probs)), space_(cards_of(variables_))
{
    check_variable_ids(variables_);
    if (variables_.size() > 64) {
        throw ValidationError("too many variables");
    }
    if (probs_.size() != space_.size()) {
        throw ValidationError("probability table has " + std::to_string(probs_.size()) + " entries, expected " +
                              std::to_string(space_.size()));
    }
    Rational total = 0;
    for (const auto& q : probs_) {
        if (sgn(q) < 0) {
            throw ValidationError("negative probability");
        }
        total += q;
    }
    if (total != 1) {
        throw ValidationError("probabilities sum to " + total.get_str() + ", not 1");
    }
}

int Distribution::index_of(std::string_view id) const
{
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].id == id) {
            return static_cast<int>(i);
        }
    }
    throw UnknownNodeError(std::string(id));
}

NodeSet Distribution::var_set(std::span<const std::string> ids) const
{
    NodeSet s;
    for (const auto& id : ids) {
        s.insert(index_of(id));
    }
    return s;
}

NodeSet Distribution::var_set(std::initializer_list<std::string_view> ids) const
{
    NodeSet s;
    for (auto id : ids) {
        s.insert(index_of(id));
    }
    return s;
}

std::vector<Rational> Distribution::marginal_table(NodeSet vars) const
{
    if (!vars.subset_of(all())) {
        throw PreconditionError("marginal over unknown variables");
    }
    const auto cards = space_.cards();
    const auto strides = subset_strides(cards, vars);
    std::vector<Rational> out(subset_size(cards, vars));
    std::vector<int> outcome(cards.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (sgn(probs_[i]) == 0) {
            continue;
        }
        space_.decode(i, outcome);
        std::size_t j = 0;
        for (std::size_t v = 0; v < cards.size(); ++v) {
            j += static_cast<std::size_t>(outcome[v]) * strides[v];
        }
        out[j] += probs_[i];
    }
    return out;
}

Distribution Distribution::marginal(NodeSet vars) const
{
    std::vector<Variable> kept;
    for (int i : vars) {
        kept.push_back(variables_[static_cast<std::size_t>(i)]);
    }
    return Distribution(std::move(kept), marginal_table(vars));
}

ConditionalTable::ConditionalTable(std::vector<Variable> variables, std::vector<Variable> given,
                                   std::vector<Rational> probs)
    : variables_(std::move(variables)), given_(std::move(given)), probs_(std::move(probs)),
      given_space_(cards_of(given_)), slice_space_(cards_of(variables_))
{
    std::vector<Variable> all = variables_;
    all.insert(all.end(), given_.begin(), given_.end());
    check_variable_ids(all);
    if (probs_.size() != given_space_.size() * slice_space_.size()) {
        throw ValidationError("conditional table has wrong size");
    }
    for (std::size_t g = 0; g < given_space_.size(); ++g) {
        Rational total = 0;
        for (std::size_t s = 0; s < slice_space_.size(); ++s) {
            const auto& q = at(g, s);
            if (sgn(q) < 0) {
                throw ValidationError("negative probability");
            }
            total += q;
        }
        if (total != 1) {
            throw ValidationError("conditional slice " + std::to_string(g) + " sums to " + total.get_str());
        }
    }
}

int ClassicalGmcModel::edge_card(int parent, int child) const
{
    if (gdag.is_observed(parent)) {
        return cards.at(static_cast<std::size_t>(parent));
    }
    auto it = message_cards.find({parent, child});
    if (it == message_cards.end()) {
        throw ValidationError("missing message cardinality on edge " + gdag.id(parent) + " -> " + gdag.id(child));
    }
    return it->second;
}

std::vector<int> ClassicalGmcModel::input_cards(int node) const
{
    std::vector<int> out;
    for (int p : gdag.parents(node)) {
        out.push_back(edge_card(p, node));
    }
    return out;
}

std::vector<int> ClassicalGmcModel::output_cards(int node) const
{
    if (gdag.is_observed(node)) {
        return {cards.at(static_cast<std::size_t>(node))};
    }
    std::vector<int> out;
    for (int c : gdag.children(node)) {
        out.push_back(edge_card(node, c));
    }
    return out;
}

void ClassicalGmcModel::validate() const
{
    const auto n = static_cast<std::size_t>(gdag.size());
    if (cards.size() != n || kernels.size() != n) {
        throw ValidationError("model needs one cardinality and one kernel per node");
    }
    for (int v : gdag.observed()) {
        if (cards[static_cast<std::size_t>(v)] < 1) {
            throw ValidationError("observed cardinality must be at least 1");
        }
    }
    std::size_t latent_edges = 0;
    for (auto [p, c] : gdag.edges()) {
        if (!gdag.is_observed(p)) {
            ++latent_edges;
            if (edge_card(p, c) < 1) {
                throw ValidationError("message cardinality must be at least 1");
            }
        }
    }
    if (latent_edges != message_cards.size()) {
        throw ValidationError("message cardinalities given for edges without an unobserved tail");
    }
    for (std::size_t v = 0; v < n; ++v) {
        const OutcomeSpace in(input_cards(static_cast<int>(v)));
        const OutcomeSpace out(output_cards(static_cast<int>(v)));
        const auto& k = kernels[v];
        if (k.size() != in.size() * out.size()) {
            throw ValidationError("kernel of '" + gdag.id(static_cast<int>(v)) + "' has wrong size");
        }
        for (std::size_t i = 0; i < in.size(); ++i) {
            Rational total = 0;
            for (std::size_t o = 0; o < out.size(); ++o) {
                const auto& q = k[i * out.size() + o];
                if (sgn(q) < 0) {
                    throw ValidationError("negative kernel entry");
                }
                total += q;
            }
            if (total != 1) {
                throw ValidationError("kernel slice of '" + gdag.id(static_cast<int>(v)) + "' does not sum to 1");
            }
        }
    }
}

Distribution joint_from_markov(const GDag& dag, std::span<const Cpt> cpts)
{
    if (!dag.unobserved().empty()) {
        throw PreconditionError("joint_from_markov needs an all-observed DAG");
    }
    const auto n = static_cast<std::size_t>(dag.size());
    std::vector<const Cpt*> by_node(n, nullptr);
    for (const auto& cpt : cpts) {
        if (cpt.variables().size() != 1) {
            throw PreconditionError("a CPT has exactly one variable");
        }
        const auto node = static_cast<std::size_t>(dag.index_of(cpt.variables()[0].id));
        if (by_node[node] != nullptr) {
            throw PreconditionError("duplicate CPT for '" + dag.id(static_cast<int>(node)) + "'");
        }
        by_node[node] = &cpt;
    }
    std::vector<Variable> vars;
    for (std::size_t v = 0; v < n; ++v) {
        if (by_node[v] == nullptr) {
            throw PreconditionError("missing CPT for '" + dag.id(static_cast<int>(v)) + "'");
        }
        vars.push_back(by_node[v]->variables()[0]);
    }
    // given-variable position -> node index, checked against the parent set
    std::vector<std::vector<int>> given_nodes(n);
    for (std::size_t v = 0; v < n; ++v) {
        NodeSet seen;
        for (const auto& gv : by_node[v]->given()) {
            const int p = dag.index_of(gv.id);
            if (gv.card != vars[static_cast<std::size_t>(p)].card) {
                throw PreconditionError("CPT for '" + vars[v].id + "' disagrees on the cardinality of '" + gv.id + "'");
            }
            seen.insert(p);
            given_nodes[v].push_back(p);
        }
        if (seen != dag.parents(static_cast<int>(v))) {
            throw PreconditionError("CPT for '" + vars[v].id + "' does not condition on exactly its parents");
        }
    }
    const OutcomeSpace space(cards_of(vars));
    std::vector<Rational> probs(space.size());
    std::vector<int> outcome(n);
    std::vector<int> given_outcome;
    for (std::size_t i = 0; i < space.size(); ++i) {
        space.decode(i, outcome);
        Rational p = 1;
        for (std::size_t v = 0; v < n && sgn(p) != 0; ++v) {
            given_outcome.clear();
            for (int g : given_nodes[v]) {
                given_outcome.push_back(outcome[static_cast<std::size_t>(g)]);
            }
            const auto& cpt = *by_node[v];
            p *= cpt.at(cpt.given_space().index(given_outcome), static_cast<std::size_t>(outcome[v]));
        }
        probs[i] = std::move(p);
    }
    return Distribution(std::move(vars), std::move(probs));
}

Distribution observed_from_classical_gmc(const ClassicalGmcModel& model)
{
    model.validate();
    const GDag& g = model.gdag;
    const auto n = static_cast<std::size_t>(g.size());
    const auto order = topological_order(g);

    std::vector<Variable> vars;
    std::vector<int> observed_pos(n, -1);
    for (int v : g.observed()) {
        observed_pos[static_cast<std::size_t>(v)] = static_cast<int>(vars.size());
        vars.push_back({g.id(v), model.cards[static_cast<std::size_t>(v)]});
    }
    const OutcomeSpace joint_space(cards_of(vars));
    std::vector<Rational> probs(joint_space.size());

    std::vector<OutcomeSpace> in_space(n);
    std::vector<OutcomeSpace> out_space(n);
    for (std::size_t v = 0; v < n; ++v) {
        in_space[v] = OutcomeSpace(model.input_cards(static_cast<int>(v)));
        out_space[v] = OutcomeSpace(model.output_cards(static_cast<int>(v)));
    }

    // edge_value[parent * n + child]
    std::vector<int> edge_value(n * n, 0);
    std::vector<int> observed_value(vars.size(), 0);
    std::vector<int> inputs;
    std::vector<int> outputs;

    std::function<void(std::size_t, const Rational&)> visit = [&](std::size_t step, const Rational& weight) {
        if (step == order.size()) {
            probs[joint_space.index(observed_value)] += weight;
            return;
        }
        const int v = order[step];
        const auto uv = static_cast<std::size_t>(v);
        std::vector<int> in;
        for (int p : g.parents(v)) {
            in.push_back(edge_value[static_cast<std::size_t>(p) * n + uv]);
        }
        const std::size_t row = in_space[uv].index(in);
        const std::size_t width = out_space[uv].size();
        const auto& kernel = model.kernels[uv];
        std::vector<int> out(out_space[uv].cards().size());
        for (std::size_t o = 0; o < width; ++o) {
            const auto& q = kernel[row * width + o];
            if (sgn(q) == 0) {
                continue;
            }
            out_space[uv].decode(o, out);
            if (g.is_observed(v)) {
                observed_value[static_cast<std::size_t>(observed_pos[uv])] = out[0];
                for (int c : g.children(v)) {
                    edge_value[uv * n + static_cast<std::size_t>(c)] = out[0];
                }
            } else {
                std::size_t k = 0;
                for (int c : g.children(v)) {
                    edge_value[uv * n + static_cast<std::size_t>(c)] = out[k++];
                }
            }
            visit(step + 1, weight * q);
        }
    };
    visit(0, Rational(1));
    return Distribution(std::move(vars), std::move(probs));
}

bool is_conditionally_independent(const Distribution& p, NodeSet x, NodeSet y, NodeSet z)
{
    if (!(x | y | z).subset_of(p.all())) {
        throw PreconditionError("conditional independence query refers to unknown variables");
    }
    if (x.intersects(y) || x.intersects(z) || y.intersects(z)) {
        throw PreconditionError("x, y and z must be pairwise disjoint");
    }
    const auto cards = p.space().cards();
    const NodeSet xyz = x | y | z;
    const auto t_xyz = p.marginal_table(xyz);
    const auto t_xz = p.marginal_table(x | z);
    const auto t_yz = p.marginal_table(y | z);
    const auto t_z = p.marginal_table(z);
    const auto s_xz = subset_strides(cards, x | z);
    const auto s_yz = subset_strides(cards, y | z);
    const auto s_z = subset_strides(cards, z);

    std::vector<int> sub_cards;
    std::vector<int> members = xyz.indices();
    for (int m : members) {
        sub_cards.push_back(cards[static_cast<std::size_t>(m)]);
    }
    const OutcomeSpace sub(sub_cards);
    std::vector<int> local(members.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        sub.decode(i, local);
        std::size_t ixz = 0;
        std::size_t iyz = 0;
        std::size_t iz = 0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const auto m = static_cast<std::size_t>(members[k]);
            const auto val = static_cast<std::size_t>(local[k]);
            ixz += val * s_xz[m];
            iyz += val * s_yz[m];
            iz += val * s_z[m];
        }
        if (t_xyz[i] * t_z[iz] != t_xz[ixz] * t_yz[iyz]) {
            return false;
        }
    }
    return true;
}

IndependenceReport satisfies_I(const GDag& g, const Distribution& p)
{
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<std::string> dist_ids;
    for (const auto& v : p.variables()) {
        dist_ids.push_back(v.id);
    }
    if (sorted(g.ids(g.observed())) != sorted(dist_ids)) {
        throw PreconditionError("distribution variables must be exactly the observed nodes of the graph");
    }
    auto to_vars = [&](NodeSet s) {
        NodeSet out;
        for (int i : s) {
            out.insert(p.index_of(g.id(i)));
        }
        return out;
    };
    IndependenceReport report;
    for (const auto& s : observable_ci_set(g)) {
        if (!is_conditionally_independent(p, to_vars(s.x), to_vars(s.y), to_vars(s.z))) {
            report.holds = false;
            report.violated.push_back(s);
        }
    }
    return report;
}

double entropy(const Distribution& p, NodeSet s)
{
    return plogp_sum(p.marginal_table(s));
}

double mutual_information(const Distribution& p, NodeSet s, NodeSet t)
{
    return conditional_mutual_information(p, s, t, NodeSet{});
}

double conditional_mutual_information(const Distribution& p, NodeSet s, NodeSet t, NodeSet u)
{
    if (s.intersects(t) || s.intersects(u) || t.intersects(u)) {
        throw PreconditionError("information query sets must be pairwise disjoint");
    }
    return entropy(p, s | u) + entropy(p, t | u) - entropy(p, s | t | u) - entropy(p, u);
}

std::vector<double> entropy_vector(const Distribution& p)
{
    const int n = p.variable_count();
    if (n > 20) {
        throw PreconditionError("entropy vector limited to 20 variables");
    }
    std::vector<double> h((std::size_t{1} << n) - 1);
    for (std::size_t mask = 1; mask <= h.size(); ++mask) {
        h[mask - 1] = entropy(p, NodeSet(mask));
    }
    return h;
}

} // namespace gdag
