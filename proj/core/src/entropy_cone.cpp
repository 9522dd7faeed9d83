#include "gdag/entropy_cone.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "gdag/dsep.hpp"
#include "gdag/error.hpp"
#include "gdag/lp.hpp"

namespace gdag {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("entropy coefficient overflow");
    }
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("entropy coefficient overflow");
    }
    return r;
}

std::size_t dimension_for(int n)
{
    if (n < 0 || n > max_cone_variables) {
        throw PreconditionError("entropy cones support at most " + std::to_string(max_cone_variables) +
                                " variables");
    }
    return (std::size_t{1} << n) - 1;
}

void normalize_in_place(std::vector<std::int64_t>& c)
{
    std::int64_t g = 0;
    for (auto v : c) {
        g = std::gcd(g, v < 0 ? -v : v);
    }
    if (g > 1) {
        for (auto& v : c) {
            v /= g;
        }
    }
}

struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// ---------------------------------------------------------------------------
// Conic membership: is target a nonnegative combination of the generators?
//
// A floating-point phase-1 simplex proposes an answer together with a
// certificate (a combination, or a separating entropy vector); the
// certificate is checked in exact integer arithmetic. Anything that does
// not verify falls back to the exact rational simplex.

using Coeffs = std::span<const std::int64_t>;

bool exact_conic(std::span<const Coeffs> gens, Coeffs target, std::span<const std::size_t> coords)
{
    std::vector<std::vector<Rational>> a(coords.size(), std::vector<Rational>(gens.size()));
    std::vector<Rational> b(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = 0; j < gens.size(); ++j) {
            a[i][j] = static_cast<long>(gens[j][coords[i]]);
        }
        b[i] = static_cast<long>(target[coords[i]]);
    }
    return standard_form_feasible(a, b).has_value();
}

/// Best rational approximation with denominator at most `limit`.
std::pair<std::int64_t, std::int64_t> rationalize(double x, std::int64_t limit)
{
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(v);
        if (std::abs(a) > 1e15) {
            break;
        }
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t q2 = q0 + ai * q1;
        if (q2 > limit) {
            break;
        }
        const std::int64_t p2 = p0 + ai * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = v - a;
        if (frac < 1e-12) {
            break;
        }
        v = 1.0 / frac;
    }
    if (q1 == 0) {
        return {static_cast<std::int64_t>(std::llround(x)), 1};
    }
    return {p1, q1};
}

bool verify_combination(std::span<const Coeffs> gens, Coeffs target, std::span<const std::size_t> coords,
                        const std::vector<std::pair<std::size_t, double>>& lambda)
{
    std::vector<std::pair<std::size_t, std::pair<std::int64_t, std::int64_t>>> rat;
    std::int64_t den = 1;
    for (auto [j, value] : lambda) {
        if (value < -1e-9) {
            return false;
        }
        if (value < 1e-12) {
            continue;
        }
        auto r = rationalize(value, 1 << 20);
        if (r.first <= 0) {
            continue;
        }
        den = std::lcm(den, r.second);
        if (den > (std::int64_t{1} << 40)) {
            return false;
        }
        rat.push_back({j, r});
    }
    for (std::size_t c : coords) {
        __int128 sum = 0;
        for (const auto& [j, r] : rat) {
            sum += static_cast<__int128>(gens[j][c]) * r.first * (den / r.second);
        }
        if (sum != static_cast<__int128>(target[c]) * den) {
            return false;
        }
    }
    return true;
}

bool verify_separator(std::span<const Coeffs> gens, Coeffs target, std::span<const std::size_t> coords,
                      const std::vector<double>& h)
{
    double scale = 0.0;
    for (double v : h) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) {
        return false;
    }
    for (int bits : {20, 30, 40}) {
        std::vector<std::int64_t> hi(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            hi[i] = std::llround(h[i] / scale * std::ldexp(1.0, bits));
        }
        auto dot = [&](Coeffs row) {
            __int128 s = 0;
            for (std::size_t i = 0; i < coords.size(); ++i) {
                s += static_cast<__int128>(row[coords[i]]) * hi[i];
            }
            return s;
        };
        if (dot(target) >= 0) {
            continue;
        }
        bool ok = true;
        for (const auto& g : gens) {
            if (dot(g) < 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

/// Returns a verified answer, or nothing if the float route was inconclusive.
std::optional<bool> float_conic(std::span<const Coeffs> gens, Coeffs target, std::span<const std::size_t> coords)
{
    const std::size_t m = coords.size();
    const std::size_t n = gens.size();
    const std::size_t cols = n + m + 1;
    const std::size_t rhs = cols - 1;
    std::vector<double> t(m * cols, 0.0);
    std::vector<double> flip(m, 1.0);
    std::vector<std::size_t> basis(m);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return t[i * cols + j]; };
    for (std::size_t i = 0; i < m; ++i) {
        const auto c = coords[i];
        flip[i] = target[c] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            at(i, j) = flip[i] * static_cast<double>(gens[j][c]);
        }
        at(i, n + i) = 1.0;
        at(i, rhs) = flip[i] * static_cast<double>(target[c]);
        basis[i] = n + i;
    }
    std::vector<double> cost(cols, 0.0);
    for (std::size_t j = n; j < n + m; ++j) {
        cost[j] = 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            cost[j] -= at(i, j);
        }
    }
    constexpr double eps = 1e-9;
    const std::size_t max_iter = 20 * (m + n) + 100;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // Dantzig pricing, switching to Bland's rule to escape stalling.
        const bool bland = iter > 4 * (m + 10);
        std::size_t enter = cols;
        double best = -eps;
        for (std::size_t j = 0; j < rhs; ++j) {
            if (cost[j] < best) {
                enter = j;
                if (bland) {
                    break;
                }
                best = cost[j];
            }
        }
        if (enter == cols) {
            break;
        }
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = at(i, enter);
            if (a > eps) {
                const double ratio = at(i, rhs) / a;
                if (leave == m || ratio < best_ratio - 1e-12 ||
                    (ratio <= best_ratio + 1e-12 && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) {
            return std::nullopt;
        }
        const double pivot = at(leave, enter);
        double* prow = &t[leave * cols];
        for (std::size_t j = 0; j < cols; ++j) {
            prow[j] /= pivot;
        }
        prow[enter] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) {
                continue;
            }
            double* row = &t[i * cols];
            const double f = row[enter];
            if (f != 0.0) {
                for (std::size_t j = 0; j < cols; ++j) {
                    row[j] -= f * prow[j];
                }
                row[enter] = 0.0;
            }
        }
        const double f = cost[enter];
        for (std::size_t j = 0; j < cols; ++j) {
            cost[j] -= f * prow[j];
        }
        cost[enter] = 0.0;
        basis[leave] = enter;
    }
    if (iter == max_iter) {
        return std::nullopt;
    }
    const double objective = -cost[rhs];
    if (objective < 1e-7) {
        std::vector<std::pair<std::size_t, double>> lambda;
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) {
                lambda.emplace_back(basis[i], at(i, rhs));
            }
        }
        if (verify_combination(gens, target, coords, lambda)) {
            return true;
        }
        return std::nullopt;
    }
    // Duals of the phase-1 optimum give h with gens . h >= 0 > target . h.
    std::vector<double> h(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double y = 1.0 - cost[n + i];
        h[i] = -flip[i] * y;
    }
    if (verify_separator(gens, target, coords, h)) {
        return false;
    }
    return std::nullopt;
}

bool in_conic_hull(std::span<const Coeffs> gens, Coeffs target)
{
    const std::size_t dim = target.size();
    std::vector<std::size_t> coords;
    bool target_zero = true;
    for (std::size_t c = 0; c < dim; ++c) {
        bool used = target[c] != 0;
        target_zero = target_zero && !used;
        if (!used) {
            for (const auto& g : gens) {
                if (g[c] != 0) {
                    used = true;
                    break;
                }
            }
        } else {
            bool covered = false;
            for (const auto& g : gens) {
                if (g[c] != 0) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                return false;
            }
        }
        if (used) {
            coords.push_back(c);
        }
    }
    if (target_zero) {
        return true;
    }
    if (gens.empty()) {
        return false;
    }
    if (auto answer = float_conic(gens, target, coords)) {
        return *answer;
    }
    return exact_conic(gens, target, coords);
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin with derivation histories (Kohler's criterion): after k
// eliminations, a row combining more than k + 1 original rows is redundant.

class History {
public:
    History() = default;
    History(std::size_t bits, std::size_t set_bit) : words_((bits + 63) / 64, 0)
    {
        words_[set_bit / 64] |= std::uint64_t{1} << (set_bit % 64);
    }

    History operator|(const History& o) const
    {
        History r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            r.words_[i] |= o.words_[i];
        }
        return r;
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    std::size_t union_count(const History& o) const
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            c += static_cast<std::size_t>(std::popcount(words_[i] | o.words_[i]));
        }
        return c;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct TrackedRow {
    std::vector<std::int64_t> coeffs;
    History history;
};

class Eliminator {
public:
    explicit Eliminator(const Cone& cone) : n_(cone.variable_count())
    {
        const auto& rows = cone.ineqs();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows_.push_back({std::vector<std::int64_t>(rows[i].coeffs().begin(), rows[i].coeffs().end()),
                             History(rows.size(), i)});
        }
    }

    void eliminate(SubsetMask coord)
    {
        const std::size_t c = coord - 1;
        ++eliminated_;
        std::vector<TrackedRow> pos;
        std::vector<TrackedRow> neg;
        std::vector<TrackedRow> next;
        for (auto& r : rows_) {
            if (r.coeffs[c] > 0) {
                pos.push_back(std::move(r));
            } else if (r.coeffs[c] < 0) {
                neg.push_back(std::move(r));
            } else {
                next.push_back(std::move(r));
            }
        }
        std::unordered_map<std::vector<std::int64_t>, std::size_t, VectorHash> index;
        for (std::size_t i = 0; i < next.size(); ++i) {
            index.emplace(next[i].coeffs, i);
        }
        const std::size_t limit = eliminated_ + 1;
        for (const auto& p : pos) {
            for (const auto& q : neg) {
                if (p.history.union_count(q.history) > limit) {
                    continue;
                }
                const std::int64_t a = p.coeffs[c];
                const std::int64_t b = -q.coeffs[c];
                std::vector<std::int64_t> combo(p.coeffs.size());
                bool zero = true;
                for (std::size_t k = 0; k < combo.size(); ++k) {
                    combo[k] = checked_add(checked_mul(b, p.coeffs[k]), checked_mul(a, q.coeffs[k]));
                    zero = zero && combo[k] == 0;
                }
                combo[c] = 0;
                if (zero) {
                    continue;
                }
                normalize_in_place(combo);
                History h = p.history | q.history;
                auto [it, inserted] = index.emplace(combo, next.size());
                if (inserted) {
                    next.push_back({std::move(combo), std::move(h)});
                } else if (h.count() < next[it->second].history.count()) {
                    next[it->second].history = std::move(h);
                }
            }
        }
        rows_ = std::move(next);
        sort_rows();
        drop_redundant();
    }

    void drop_redundant()
    {
        std::vector<bool> alive(rows_.size(), true);
        std::vector<Coeffs> gens;
        for (std::size_t i = rows_.size(); i-- > 0;) {
            gens.clear();
            for (std::size_t j = 0; j < rows_.size(); ++j) {
                if (j != i && alive[j]) {
                    gens.emplace_back(rows_[j].coeffs);
                }
            }
            if (in_conic_hull(gens, rows_[i].coeffs)) {
                alive[i] = false;
            }
        }
        std::vector<TrackedRow> kept;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (alive[i]) {
                kept.push_back(std::move(rows_[i]));
            }
        }
        rows_ = std::move(kept);
    }

    std::size_t size() const { return rows_.size(); }

    std::vector<LinIneq> rows() const
    {
        std::vector<LinIneq> out;
        for (const auto& r : rows_) {
            out.emplace_back(n_, r.coeffs);
        }
        return out;
    }

private:
    void sort_rows()
    {
        std::sort(rows_.begin(), rows_.end(),
                  [](const TrackedRow& a, const TrackedRow& b) { return a.coeffs < b.coeffs; });
    }

    int n_;
    std::vector<TrackedRow> rows_;
    std::size_t eliminated_ = 0;
};

std::vector<Coeffs> spans_of(const std::vector<LinIneq>& rows)
{
    std::vector<Coeffs> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.emplace_back(r.coeffs());
    }
    return out;
}

SubsetMask remap_mask(SubsetMask s, const std::vector<int>& old_to_new)
{
    SubsetMask out = 0;
    for (std::size_t i = 0; i < old_to_new.size(); ++i) {
        if (((s >> i) & 1U) && old_to_new[i] >= 0) {
            out |= SubsetMask{1} << old_to_new[i];
        }
    }
    return out;
}

} // namespace

LinIneq::LinIneq(int variable_count) : n_(variable_count), coeffs_(dimension_for(variable_count), 0) {}

LinIneq::LinIneq(int variable_count, std::vector<std::int64_t> coeffs) : n_(variable_count), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != dimension_for(variable_count)) {
        throw PreconditionError("coefficient vector has the wrong dimension");
    }
    normalize_in_place(coeffs_);
}

LinIneq LinIneq::from_rational(int variable_count, const std::map<SubsetMask, Rational>& terms)
{
    const auto dim = dimension_for(variable_count);
    mpz_class den = 1;
    for (const auto& [mask, q] : terms) {
        if (mask == 0 || mask > dim) {
            throw PreconditionError("coordinate outside the variable range");
        }
        den = lcm(den, mpz_class(q.get_den()));
    }
    std::vector<std::int64_t> coeffs(dim, 0);
    for (const auto& [mask, q] : terms) {
        mpz_class v = q.get_num() * (den / q.get_den());
        if (!v.fits_slong_p()) {
            throw std::overflow_error("coefficient too large");
        }
        coeffs[mask - 1] = checked_add(coeffs[mask - 1], v.get_si());
    }
    return LinIneq(variable_count, std::move(coeffs));
}

bool LinIneq::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](auto v) { return v == 0; });
}

LinIneq& LinIneq::add(SubsetMask s, std::int64_t value)
{
    if (s == 0 || s > coeffs_.size()) {
        throw PreconditionError("coordinate outside the variable range");
    }
    coeffs_[s - 1] = checked_add(coeffs_[s - 1], value);
    return *this;
}

LinIneq LinIneq::normalized() const
{
    return LinIneq(n_, coeffs_);
}

LinIneq LinIneq::negated() const
{
    auto c = coeffs_;
    for (auto& v : c) {
        v = -v;
    }
    return LinIneq(n_, std::move(c));
}

LinIneq LinIneq::operator+(const LinIneq& other) const
{
    if (other.n_ != n_) {
        throw PreconditionError("adding rows of different dimension");
    }
    auto c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = checked_add(c[i], other.coeffs_[i]);
    }
    return LinIneq(n_, std::move(c));
}

double LinIneq::evaluate(std::span<const double> h) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0) {
            s += static_cast<double>(coeffs_[i]) * h[i];
        }
    }
    return s;
}

LinIneq conditional_mutual_information_row(int variable_count, SubsetMask s, SubsetMask t, SubsetMask u)
{
    LinIneq row(variable_count);
    auto term = [&](SubsetMask m, std::int64_t v) {
        if (m != 0) {
            row.add(m, v);
        }
    };
    term(s | u, 1);
    term(t | u, 1);
    term(s | t | u, -1);
    term(u, -1);
    return row.normalized();
}

Cone::Cone(std::vector<std::string> variables, std::vector<LinIneq> ineqs)
    : variables_(std::move(variables))
{
    const int n = variable_count();
    dimension_for(n);
    for (auto& r : ineqs) {
        if (r.variable_count() != n) {
            throw PreconditionError("row dimension does not match the cone's variables");
        }
        if (!r.is_zero()) {
            ineqs_.push_back(r.normalized());
        }
    }
    std::sort(ineqs_.begin(), ineqs_.end());
    ineqs_.erase(std::unique(ineqs_.begin(), ineqs_.end()), ineqs_.end());
}

bool Cone::contains(const LinIneq& row) const
{
    return std::binary_search(ineqs_.begin(), ineqs_.end(), row.normalized());
}

SubsetMask Cone::coordinate(std::span<const std::string> ids) const
{
    SubsetMask m = 0;
    for (const auto& id : ids) {
        auto it = std::find(variables_.begin(), variables_.end(), id);
        if (it == variables_.end()) {
            throw UnknownNodeError(id);
        }
        m |= SubsetMask{1} << (it - variables_.begin());
    }
    return m;
}

SubsetMask Cone::coordinate(std::initializer_list<std::string_view> ids) const
{
    std::vector<std::string> v(ids.begin(), ids.end());
    return coordinate(v);
}

std::string Cone::coordinate_name(SubsetMask s) const
{
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if ((s >> i) & 1U) {
            ids.push_back(variables_[i]);
        }
    }
    std::sort(ids.begin(), ids.end());
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) {
            out += ',';
        }
        out += id;
    }
    return out;
}

Cone elemental_inequalities(const std::vector<std::string>& variables)
{
    const int n = static_cast<int>(variables.size());
    if (n == 0 || n > 8) {
        throw PreconditionError("elemental inequalities need between 1 and 8 variables");
    }
    const SubsetMask all = (SubsetMask{1} << n) - 1;
    std::vector<LinIneq> rows;
    for (int x = 0; x < n; ++x) {
        const SubsetMask rest = all & ~(SubsetMask{1} << x);
        LinIneq row(n);
        row.add(all, 1);
        if (rest != 0) {
            row.add(rest, -1);
        }
        rows.push_back(row.normalized());
    }
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            const SubsetMask rest = all & ~(SubsetMask{1} << x) & ~(SubsetMask{1} << y);
            // all subsets z of rest, including the empty set
            SubsetMask z = 0;
            do {
                rows.push_back(conditional_mutual_information_row(n, SubsetMask{1} << x, SubsetMask{1} << y, z));
                z = (z - rest) & rest;
            } while (z != 0);
        }
    }
    return Cone(variables, std::move(rows));
}

std::vector<LinIneq> markov_constraint_rows(const GDag& g)
{
    const int n = g.size();
    dimension_for(n);
    std::vector<LinIneq> rows;
    for (int x = 0; x < n; ++x) {
        const NodeSet pa = g.parents(x);
        const NodeSet nd = g.all() - NodeSet::single(x) - pa - descendants(g, x);
        if (nd.empty()) {
            continue;
        }
        rows.push_back(conditional_mutual_information_row(n, SubsetMask{1} << x, static_cast<SubsetMask>(nd.mask()),
                                                          static_cast<SubsetMask>(pa.mask()))
                           .negated());
    }
    return rows;
}

bool implied_by(const LinIneq& ineq, const Cone& cone)
{
    if (ineq.variable_count() != cone.variable_count()) {
        throw PreconditionError("inequality and cone live over different variable sets");
    }
    const auto gens = spans_of(cone.ineqs());
    return in_conic_hull(gens, ineq.coeffs());
}

Cone remove_redundant(const Cone& cone)
{
    const auto& rows = cone.ineqs();
    std::vector<bool> alive(rows.size(), true);
    std::vector<Coeffs> gens;
    for (std::size_t i = rows.size(); i-- > 0;) {
        gens.clear();
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j != i && alive[j]) {
                gens.emplace_back(rows[j].coeffs());
            }
        }
        if (in_conic_hull(gens, rows[i].coeffs())) {
            alive[i] = false;
        }
    }
    std::vector<LinIneq> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (alive[i]) {
            kept.push_back(rows[i]);
        }
    }
    return Cone(cone.variables(), std::move(kept));
}

Cone fourier_motzkin_eliminate(const Cone& cone, SubsetMask coord)
{
    const auto dim = dimension_for(cone.variable_count());
    if (coord == 0 || coord > dim) {
        throw PreconditionError("unknown coordinate");
    }
    Eliminator e(cone);
    e.eliminate(coord);
    return Cone(cone.variables(), e.rows());
}

Cone restrict_to(const Cone& cone, const std::vector<std::string>& kept)
{
    std::vector<int> old_to_new(cone.variables().size(), -1);
    SubsetMask kept_mask = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        auto it = std::find(cone.variables().begin(), cone.variables().end(), kept[k]);
        if (it == cone.variables().end()) {
            throw UnknownNodeError(kept[k]);
        }
        const auto i = static_cast<std::size_t>(it - cone.variables().begin());
        old_to_new[i] = static_cast<int>(k);
        kept_mask |= SubsetMask{1} << i;
    }
    const int n = static_cast<int>(kept.size());
    std::vector<LinIneq> rows;
    for (const auto& r : cone.ineqs()) {
        LinIneq out(n);
        for (SubsetMask s = 1; s <= r.dimension(); ++s) {
            const auto v = r.coeff(s);
            if (v == 0) {
                continue;
            }
            if ((s & ~kept_mask) != 0) {
                throw PreconditionError("row mentions coordinate " + cone.coordinate_name(s) +
                                        " outside the kept variables");
            }
            out.add(remap_mask(s, old_to_new), v);
        }
        rows.push_back(out.normalized());
    }
    return Cone(kept, std::move(rows));
}

Cone derive_classical_cone(const GDag& g, const DeriveOptions& options)
{
    if (g.size() > 6 && !options.long_run) {
        throw PreconditionError("derive_classical_cone is limited to 6 nodes without the long-run flag");
    }
    if (g.observed().empty()) {
        throw PreconditionError("graph has no observed nodes");
    }
    std::vector<std::string> ids = g.ids(g.all());
    auto rows = elemental_inequalities(ids).ineqs();
    for (auto& r : markov_constraint_rows(g)) {
        rows.push_back(std::move(r));
    }
    Cone start(ids, std::move(rows));

    const auto latent = static_cast<SubsetMask>(g.unobserved().mask());
    std::vector<SubsetMask> order;
    for (SubsetMask s = 1; s <= static_cast<SubsetMask>((1U << g.size()) - 1); ++s) {
        if ((s & latent) != 0) {
            order.push_back(s);
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [](SubsetMask a, SubsetMask b) { return std::popcount(a) < std::popcount(b); });

    Eliminator e(remove_redundant(start));
    for (std::size_t i = 0; i < order.size(); ++i) {
        e.eliminate(order[i]);
        if (options.progress) {
            options.progress(i + 1, order.size(), e.size());
        }
    }
    Cone projected(ids, e.rows());
    return remove_redundant(restrict_to(projected, g.ids(g.observed())));
}

Cone derive_independence_cone(const GDag& g, const DeriveOptions& options)
{
    if (g.size() > 6 && !options.long_run) {
        throw PreconditionError("derive_independence_cone is limited to 6 nodes without the long-run flag");
    }
    const auto obs = g.observed().indices();
    if (obs.empty()) {
        throw PreconditionError("graph has no observed nodes");
    }
    std::vector<int> position(static_cast<std::size_t>(g.size()), -1);
    for (std::size_t k = 0; k < obs.size(); ++k) {
        position[static_cast<std::size_t>(obs[k])] = static_cast<int>(k);
    }
    auto local = [&](NodeSet s) {
        SubsetMask m = 0;
        for (int i : s) {
            m |= SubsetMask{1} << position[static_cast<std::size_t>(i)];
        }
        return m;
    };
    const int n = static_cast<int>(obs.size());
    const auto ids = g.ids(g.observed());
    auto rows = elemental_inequalities(ids).ineqs();
    for (const auto& s : observable_ci_set(g)) {
        rows.push_back(conditional_mutual_information_row(n, local(s.x), local(s.y), local(s.z)).negated());
    }
    return remove_redundant(Cone(ids, std::move(rows)));
}

std::vector<LinIneq> non_implied_rows(const Cone& candidates, const Cone& reference)
{
    if (candidates.variables() != reference.variables()) {
        throw PreconditionError("cones compare only over identical variable lists");
    }
    std::vector<LinIneq> out;
    for (const auto& r : candidates.ineqs()) {
        if (!implied_by(r, reference)) {
            out.push_back(r);
        }
    }
    return out;
}

} // namespace gdag
