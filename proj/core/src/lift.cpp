#include "gdag/lift.hpp"

#include <deque>
#include <functional>

#include "gdag/error.hpp"

namespace gdag {

namespace {

using Emit = std::function<void(std::span<const int>, const Rational&)>;
using NodeFn = std::function<void(std::span<const int>, const Emit&)>;

/// Position of `member` inside the ascending list of `set`.
std::size_t position(NodeSet set, int member)
{
    return static_cast<std::size_t>(std::popcount(set.mask() & ((NodeSet::Mask{1} << member) - 1)));
}

class Lifter {
public:
    Lifter(const GDag& g, const ClassicalGmcModel& on_h, std::vector<int> h_of)
        : hm_(on_h), h_of_(std::move(h_of))
    {
        gm_.gdag = g;
        gm_.cards.assign(static_cast<std::size_t>(g.size()), 1);
        for (int v = 0; v < g.size(); ++v) {
            const int hv = h_of_[static_cast<std::size_t>(v)];
            if (hv >= 0) {
                gm_.cards[static_cast<std::size_t>(v)] = hm_.cards[static_cast<std::size_t>(hv)];
            }
        }
        for (const auto& [p, c] : g.edges()) {
            if (g.is_observed(p)) {
                continue;
            }
            const int hp = h_of_[static_cast<std::size_t>(p)];
            const int hc = h_of_[static_cast<std::size_t>(c)];
            gm_.message_cards[{p, c}] = hp >= 0 && hc >= 0 && hm_.gdag.has_edge(hp, hc) ? hm_.edge_card(hp, hc) : 1;
        }
        gm_.kernels.resize(static_cast<std::size_t>(g.size()));
    }

    const GDag& g() const { return gm_.gdag; }
    const ClassicalGmcModel& h_model() const { return hm_; }
    int h(int v) const { return h_of_[static_cast<std::size_t>(v)]; }
    int& message_card(int p, int c) { return gm_.message_cards.at({p, c}); }
    int h_edge_card(int p, int c) const { return hm_.edge_card(h(p), h(c)); }

    /// H kernel row of node hv at the given H input tuple.
    std::span<const Rational> h_row(int hv, std::span<const int> hin) const
    {
        const OutcomeSpace in(hm_.input_cards(hv));
        const std::size_t out = OutcomeSpace(hm_.output_cards(hv)).size();
        const auto& k = hm_.kernels[static_cast<std::size_t>(hv)];
        return std::span<const Rational>(k).subspan(in.index(hin) * out, out);
    }

    /// Calls f(output tuple, probability) for every H output of hv with nonzero probability.
    void for_each_h_output(int hv, std::span<const int> hin,
                           const std::function<void(std::vector<int>&, const Rational&)>& f) const
    {
        const OutcomeSpace out(hm_.output_cards(hv));
        const auto row = h_row(hv, hin);
        std::vector<int> tuple;
        for (std::size_t o = 0; o < row.size(); ++o) {
            if (sgn(row[o]) == 0) {
                continue;
            }
            // callbacks may reshape the tuple
            tuple.assign(out.cards().size(), 0);
            out.decode(o, tuple);
            f(tuple, row[o]);
        }
    }

    NodeFn passthrough(int v) const
    {
        return [this, v](std::span<const int> gin, const Emit& emit) {
            for_each_h_output(h(v), gin, [&](std::vector<int>& out, const Rational& q) { emit(out, q); });
        };
    }

    void set(int v, NodeFn fn) { fns_[v] = std::move(fn); }

    ClassicalGmcModel finish()
    {
        const GDag& g = gm_.gdag;
        for (int v = 0; v < g.size(); ++v) {
            auto it = fns_.find(v);
            const NodeFn fn = it != fns_.end() ? it->second : passthrough(v);
            const OutcomeSpace in(gm_.input_cards(v));
            const OutcomeSpace out(gm_.output_cards(v));
            std::vector<Rational> k(in.size() * out.size());
            std::vector<int> gin(in.cards().size());
            for (std::size_t i = 0; i < in.size(); ++i) {
                in.decode(i, gin);
                fn(gin, [&](std::span<const int> gout, const Rational& q) { k[i * out.size() + out.index(gout)] += q; });
            }
            gm_.kernels[static_cast<std::size_t>(v)] = std::move(k);
        }
        gm_.validate();
        return std::move(gm_);
    }

private:
    const ClassicalGmcModel& hm_;
    std::vector<int> h_of_;
    ClassicalGmcModel gm_;
    std::map<int, NodeFn> fns_;
};

std::vector<int> identity_map(int n)
{
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        m[static_cast<std::size_t>(i)] = i;
    }
    return m;
}

ClassicalGmcModel lift_remove_edge(const GDag& g, int a, int b, const ClassicalGmcModel& hm)
{
    Lifter L(g, hm, identity_map(g.size()));
    const std::size_t a_pos = position(g.parents(b), a);
    L.set(b, [&L, b, a_pos](std::span<const int> gin, const Emit& emit) {
        std::vector<int> hin(gin.begin(), gin.end());
        hin.erase(hin.begin() + static_cast<std::ptrdiff_t>(a_pos));
        L.for_each_h_output(b, hin, [&](std::vector<int>& out, const Rational& q) { emit(out, q); });
    });
    if (!g.is_observed(a)) {
        const std::size_t b_pos = position(g.children(a), b);
        L.set(a, [&L, a, b_pos](std::span<const int> gin, const Emit& emit) {
            L.for_each_h_output(a, gin, [&](std::vector<int>& out, const Rational& q) {
                out.insert(out.begin() + static_cast<std::ptrdiff_t>(b_pos), 0);
                emit(out, q);
            });
        });
    }
    return L.finish();
}

ClassicalGmcModel lift_remove_isolated(const GDag& g, int a, const ClassicalGmcModel& hm)
{
    std::vector<int> h_of(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) {
        h_of[static_cast<std::size_t>(v)] = v < a ? v : (v == a ? -1 : v - 1);
    }
    Lifter L(g, hm, std::move(h_of));
    L.set(a, [](std::span<const int>, const Emit& emit) { emit({}, Rational(1)); });
    return L.finish();
}

/// a = path[0] -> path[1] -> ... -> path.back() = b, all interior nodes unobserved.
std::vector<int> latent_path(const GDag& g, int a, int b)
{
    std::vector<int> prev(static_cast<std::size_t>(g.size()), -1);
    std::deque<int> queue{a};
    NodeSet seen = NodeSet::single(a);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int c : g.children(u)) {
            if (seen.contains(c) || (u == a && c == b)) {
                continue;
            }
            seen.insert(c);
            prev[static_cast<std::size_t>(c)] = u;
            if (c == b) {
                std::vector<int> path{b};
                for (int v = u; v != a; v = prev[static_cast<std::size_t>(v)]) {
                    path.push_back(v);
                }
                path.push_back(a);
                return {path.rbegin(), path.rend()};
            }
            if (!g.is_observed(c)) {
                queue.push_back(c);
            }
        }
    }
    throw PreconditionError("no latent path between the endpoints");
}

ClassicalGmcModel lift_unobserved_path(const GDag& g, int a, int b, const ClassicalGmcModel& hm)
{
    Lifter L(g, hm, identity_map(g.size()));
    const auto path = latent_path(g, a, b);
    const std::size_t k = path.size() - 2;
    const int cv = hm.edge_card(a, b);
    const bool a_observed = g.is_observed(a);

    // Enlarge every message on the path that must carry the copy.
    for (std::size_t i = a_observed ? 1 : 0; i + 1 < path.size(); ++i) {
        L.message_card(path[i], path[i + 1]) *= cv;
    }
    const int z1 = path[1];
    const int zk = path[k];

    if (!a_observed) {
        const std::size_t hb = position(hm.gdag.children(a), b);
        const std::size_t hz = position(hm.gdag.children(a), z1);
        L.set(a, [&L, a, hb, hz, cv](std::span<const int> gin, const Emit& emit) {
            L.for_each_h_output(a, gin, [&](std::vector<int>& out, const Rational& q) {
                const int v = out[hb];
                out[hz] = out[hz] * cv + v;
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(hb));
                emit(out, q);
            });
        });
    }
    for (std::size_t i = 1; i <= k; ++i) {
        const int z = path[i];
        const int prev = path[i - 1];
        const int next = path[i + 1];
        const std::size_t in_pos = position(g.parents(z), prev);
        const bool raw = i == 1 && a_observed;
        const std::size_t out_pos = position(g.children(z), next);
        L.set(z, [&L, z, in_pos, raw, out_pos, cv](std::span<const int> gin, const Emit& emit) {
            std::vector<int> hin(gin.begin(), gin.end());
            int v = 0;
            if (raw) {
                v = gin[in_pos];
            } else {
                v = gin[in_pos] % cv;
                hin[in_pos] = gin[in_pos] / cv;
            }
            L.for_each_h_output(z, hin, [&](std::vector<int>& out, const Rational& q) {
                out[out_pos] = out[out_pos] * cv + v;
                emit(out, q);
            });
        });
    }
    const NodeSet h_parents = hm.gdag.parents(b);
    const std::size_t zk_pos = position(g.parents(b), zk);
    L.set(b, [&L, b, a, zk, zk_pos, h_parents, cv, &g](std::span<const int> gin, const Emit& emit) {
        std::vector<int> hin;
        for (int p : h_parents) {
            if (p == a) {
                hin.push_back(gin[zk_pos] % cv);
            } else if (p == zk) {
                hin.push_back(gin[zk_pos] / cv);
            } else {
                hin.push_back(gin[position(g.parents(b), p)]);
            }
        }
        L.for_each_h_output(b, hin, [&](std::vector<int>& out, const Rational& q) { emit(out, q); });
    });
    return L.finish();
}

ClassicalGmcModel lift_parent_subset(const GDag& g, int a, int b, const ClassicalGmcModel& hm)
{
    Lifter L(g, hm, identity_map(g.size()));
    const NodeSet pa = g.parents(a);
    const NodeSet latent_pa = pa & g.unobserved();
    const int z = latent_pa.front();

    const OutcomeSpace a_in(hm.input_cards(a));
    const OutcomeSpace a_out(hm.output_cards(a));
    const std::size_t table_entries = a_in.size();
    double table_count = 1.0;
    for (std::size_t i = 0; i < table_entries; ++i) {
        table_count *= static_cast<double>(a_out.size());
    }
    if (table_count > static_cast<double>(1 << 20)) {
        throw PreconditionError("response table too large to lift this model");
    }
    const OutcomeSpace tables(std::vector<int>(table_entries, static_cast<int>(a_out.size())));
    const int nr = static_cast<int>(tables.size());

    // Probability of each response table: independent draws per input.
    std::vector<Rational> table_prob(tables.size());
    std::vector<std::vector<int>> table_digits(tables.size(), std::vector<int>(table_entries));
    for (std::size_t r = 0; r < tables.size(); ++r) {
        tables.decode(r, table_digits[r]);
        Rational q = 1;
        for (std::size_t i = 0; i < table_entries && sgn(q) != 0; ++i) {
            q *= hm.kernels[static_cast<std::size_t>(a)][i * a_out.size() + static_cast<std::size_t>(table_digits[r][i])];
        }
        table_prob[r] = q;
    }

    // Message sizes: z -> a gains the table; every latent parent of a copies
    // its message to a into its message to b; z -> b also carries the table.
    std::map<int, int> copy_card;
    for (int p : latent_pa) {
        copy_card[p] = hm.edge_card(p, a);
        L.message_card(p, b) *= copy_card[p];
    }
    L.message_card(z, a) *= nr;
    L.message_card(z, b) *= nr;

    const bool a_observed = g.is_observed(a);
    const std::size_t a_out_to_b = a_observed ? 0 : position(hm.gdag.children(a), b);

    for (int p : latent_pa) {
        const std::size_t to_a = position(g.children(p), a);
        const std::size_t to_b = position(g.children(p), b);
        const int ca = copy_card[p];
        const bool is_z = p == z;
        L.set(p, [&L, p, to_a, to_b, ca, is_z, nr, &table_prob](std::span<const int> gin, const Emit& emit) {
            L.for_each_h_output(p, gin, [&](std::vector<int>& out, const Rational& q) {
                const int ma = out[to_a];
                const int mb = out[to_b];
                if (!is_z) {
                    out[to_b] = mb * ca + ma;
                    emit(out, q);
                    return;
                }
                for (int r = 0; r < nr; ++r) {
                    if (sgn(table_prob[static_cast<std::size_t>(r)]) == 0) {
                        continue;
                    }
                    out[to_a] = ma * nr + r;
                    out[to_b] = (mb * ca + ma) * nr + r;
                    emit(out, q * table_prob[static_cast<std::size_t>(r)]);
                }
            });
        });
    }

    const std::size_t z_in_a = position(pa, z);
    L.set(a, [&, z_in_a, nr, a_observed, a_out_to_b](std::span<const int> gin, const Emit& emit) {
        std::vector<int> hin(gin.begin(), gin.end());
        const int r = gin[z_in_a] % nr;
        hin[z_in_a] = gin[z_in_a] / nr;
        std::vector<int> out(a_out.cards().size());
        a_out.decode(static_cast<std::size_t>(table_digits[static_cast<std::size_t>(r)][a_in.index(hin)]), out);
        if (!a_observed) {
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(a_out_to_b));
        }
        emit(out, Rational(1));
    });

    const NodeSet gb = g.parents(b);
    const NodeSet hb = hm.gdag.parents(b);
    L.set(b, [&, gb, hb, pa, latent_pa, nr, a_observed, a_out_to_b](std::span<const int> gin, const Emit& emit) {
        // Recover what a saw, the table, and b's own original messages.
        std::vector<int> a_inputs;
        std::map<int, int> own;
        int r = 0;
        for (int p : gb) {
            int value = gin[position(gb, p)];
            if (latent_pa.contains(p)) {
                if (p == z) {
                    r = value % nr;
                    value /= nr;
                }
                own[p] = value / copy_card.at(p);
                value %= copy_card.at(p);
            } else {
                own[p] = value;
            }
            if (pa.contains(p)) {
                a_inputs.push_back(value);
            }
        }
        std::vector<int> a_value(a_out.cards().size());
        a_out.decode(static_cast<std::size_t>(table_digits[static_cast<std::size_t>(r)][a_in.index(a_inputs)]), a_value);
        std::vector<int> hin;
        for (int p : hb) {
            hin.push_back(p == a ? a_value[a_observed ? 0 : a_out_to_b] : own.at(p));
        }
        L.for_each_h_output(b, hin, [&](std::vector<int>& out, const Rational& q) { emit(out, q); });
    });
    return L.finish();
}

} // namespace

ClassicalGmcModel lift_model(const GDag& g, const Transformation& t, const ClassicalGmcModel& on_h)
{
    const GDag h = apply_transformation(g, t);
    if (!(on_h.gdag == h)) {
        throw PreconditionError("model is not defined on the transformed graph");
    }
    on_h.validate();
    const int a = g.index_of(t.a);
    switch (t.kind) {
    case TransformKind::remove_edge:
        return lift_remove_edge(g, a, g.index_of(t.b), on_h);
    case TransformKind::remove_isolated_unobserved:
        return lift_remove_isolated(g, a, on_h);
    case TransformKind::add_edge_unobserved_path:
        return lift_unobserved_path(g, a, g.index_of(t.b), on_h);
    case TransformKind::add_edge_parent_subset:
        return lift_parent_subset(g, a, g.index_of(t.b), on_h);
    }
    throw PreconditionError("unknown transformation");
}

} // namespace gdag
