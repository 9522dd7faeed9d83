#include "lab.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdag/classify.hpp"
#include "gdag/dsep.hpp"
#include "gdag/entropy_cone.hpp"
#include "gdag/enumerate.hpp"
#include "gdag/error.hpp"
#include "gdag/inequalities.hpp"
#include "gdag/io.hpp"
#include "gdag/known_graphs.hpp"
#include "gdag/models.hpp"

namespace gdag::lab {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double margin_slack = 1e-9;

std::vector<std::string> split_ids(const std::string& text)
{
    std::vector<std::string> ids;
    std::stringstream ss(text);
    for (std::string id; std::getline(ss, id, ',');) {
        if (id.empty()) {
            throw PreconditionError("empty node id in set argument '" + text + "'");
        }
        ids.push_back(id);
    }
    return ids;
}

NodeSet set_arg(const GDag& g, const std::string& text)
{
    return text.empty() ? NodeSet() : g.node_set(split_ids(text));
}

Distribution renamed(const Distribution& p, const std::vector<std::pair<std::string, std::string>>& names)
{
    auto vars = p.variables();
    for (auto& v : vars) {
        for (const auto& [from, to] : names) {
            if (v.id == from) {
                v.id = to;
                break;
            }
        }
    }
    return Distribution(std::move(vars), p.probs());
}

std::optional<ConditionalTable> conditional_family(const Distribution& joint, const std::string& y,
                                                   const std::string& a, const std::string& b)
{
    const int iy = joint.index_of(y);
    const int ia = joint.index_of(a);
    const int ib = joint.index_of(b);
    const auto& vars = joint.variables();
    const int ky = vars[static_cast<std::size_t>(iy)].card;
    const int ka = vars[static_cast<std::size_t>(ia)].card;
    const int kb = vars[static_cast<std::size_t>(ib)].card;
    const auto py = joint.marginal_table(NodeSet::single(iy));
    std::vector<int> outcome(vars.size(), 0);
    std::vector<Rational> probs;
    for (int yv = 0; yv < ky; ++yv) {
        if (sgn(py[static_cast<std::size_t>(yv)]) == 0) {
            return std::nullopt;
        }
        for (int av = 0; av < ka; ++av) {
            for (int bv = 0; bv < kb; ++bv) {
                outcome[static_cast<std::size_t>(iy)] = yv;
                outcome[static_cast<std::size_t>(ia)] = av;
                outcome[static_cast<std::size_t>(ib)] = bv;
                probs.push_back(joint.prob(outcome) / py[static_cast<std::size_t>(yv)]);
            }
        }
    }
    return ConditionalTable({{"A", ka}, {"B", kb}}, {{"Y", ky}}, std::move(probs));
}

ojson set_json(const GDag& g, NodeSet s)
{
    return g.ids(s);
}

int cmd_dsep(const std::string& graph, const std::string& x, const std::string& y, const std::string& z,
             bool witness, std::ostream& out)
{
    const GDag g = parse_gdag(read_file(graph));
    const NodeSet sx = set_arg(g, x);
    const NodeSet sy = set_arg(g, y);
    const NodeSet sz = set_arg(g, z);
    if (sx.empty() || sy.empty()) {
        throw PreconditionError("--x and --y must be nonempty");
    }
    const bool sep = d_separated(g, sx, sy, sz);
    out << (sep ? "true" : "false") << "\n";
    if (witness && sep) {
        const auto w = d_separated_via_partition(g, sx, sy, sz);
        ojson j;
        j["u"] = set_json(g, w->u);
        j["v"] = set_json(g, w->v);
        j["z"] = set_json(g, w->z);
        j["w"] = set_json(g, w->w);
        out << j.dump() << "\n";
    }
    return 0;
}

int cmd_check_dist(const std::string& graph, const std::string& dist, std::ostream& out)
{
    const GDag g = parse_gdag(read_file(graph));
    const Distribution p = parse_distribution(read_file(dist));
    const auto report = satisfies_I(g, p);
    bool ok = report.holds;

    ojson j;
    j["holds"] = report.holds;
    ojson violated = ojson::array();
    for (const auto& s : report.violated) {
        violated.push_back(ojson::parse(serialize(g, s)));
    }
    j["violated"] = std::move(violated);

    const auto form = canonical_form(g);
    const auto obs = g.ids(g.observed());
    if (g.size() <= max_enumeration_nodes && form == canonical_form(graphs::triangle())) {
        ojson rows = ojson::array();
        for (std::size_t m = 0; m < 3; ++m) {
            const std::string& mid = obs[m];
            const std::string& left = obs[(m + 1) % 3];
            const std::string& right = obs[(m + 2) % 3];
            const Distribution q = renamed(p, {{left, "A"}, {mid, "B"}, {right, "C"}});
            const double margin = triangle_monogamy_margin(q);
            const bool feasible = triangle_gpt_feasible(q);
            ok = ok && margin <= margin_slack && feasible;
            ojson row;
            row["middle"] = mid;
            row["monogamy_margin"] = margin;
            row["gpt_feasible"] = feasible;
            rows.push_back(std::move(row));
        }
        j["triangle"] = std::move(rows);
    } else if (g.size() <= max_enumeration_nodes && form == canonical_form(graphs::instrumental())) {
        int y = -1;
        for (int v : g.observed()) {
            if (g.parents(v).empty()) {
                y = v;
            }
        }
        const int b = (g.children(y) & g.observed()).front();
        const int a = (g.observed() - NodeSet::single(y) - NodeSet::single(b)).front();
        const auto family = conditional_family(p, g.id(y), g.id(a), g.id(b));
        ojson row;
        row["y"] = g.id(y);
        row["a"] = g.id(a);
        row["b"] = g.id(b);
        if (family) {
            const Rational value = instrumental_value(*family);
            ok = ok && value <= 1;
            row["instrumental_value"] = to_string(value);
        } else {
            row["instrumental_value"] = nullptr;
        }
        j["instrumental"] = std::move(row);
    }
    out << j.dump() << "\n";
    return ok ? 0 : 1;
}

int cmd_ineq(const std::string& which, const std::string& dist, std::ostream& out)
{
    ojson j;
    bool ok = true;
    if (which == "triangle") {
        const Distribution p = parse_distribution(read_file(dist));
        const double margin = triangle_monogamy_margin(p);
        const bool feasible = triangle_gpt_feasible(p);
        ok = margin <= margin_slack && feasible;
        j["monogamy_margin"] = margin;
        j["gpt_feasible"] = feasible;
    } else {
        const ConditionalTable t = parse_conditional_table(read_file(dist));
        const Rational value = instrumental_value(t);
        ok = value <= 1;
        j["instrumental_value"] = to_string(value);
    }
    out << j.dump() << "\n";
    return ok ? 0 : 1;
}

int cmd_classify(const std::string& graph, std::ostream& out)
{
    const GDag g = parse_gdag(read_file(graph));
    const auto cert = sufficient_condition_holds(g);
    if (!cert) {
        out << "unknown\n";
        return 1;
    }
    out << serialize(*cert) << "\n";
    return 0;
}

int cmd_census(int n, bool long_run, bool header, bool list, std::ostream& out)
{
    CensusOptions options;
    options.long_run = long_run;
    std::vector<std::string> survivors;
    if (list) {
        options.on_survivor = [&](const GDag& g) { survivors.push_back(serialize(g)); };
    }
    const auto report = classification_census(n, options);
    if (header) {
        out << census_csv_header << "\n";
    }
    out << to_csv_row(report) << "\n";
    for (const auto& s : survivors) {
        out << s << "\n";
    }
    return 0;
}

int cmd_entropic(const std::string& graph, bool compare, bool long_run, bool verbose, std::ostream& out,
                 std::ostream& err)
{
    const GDag g = parse_gdag(read_file(graph));
    DeriveOptions options;
    options.long_run = long_run;
    if (verbose) {
        options.progress = [&err](std::size_t done, std::size_t total, std::size_t rows) {
            err << "eliminated " << done << "/" << total << ", " << rows << " rows\n";
        };
    }
    const Cone ec = derive_classical_cone(g, options);
    const Cone ei = derive_independence_cone(g, options);
    ojson j;
    j["E_C"] = ojson::parse(serialize(ec));
    j["E_I"] = ojson::parse(serialize(ei));
    if (compare) {
        const Cone extra(ec.variables(), non_implied_rows(ec, ei));
        j["non_implied"] = ojson::parse(serialize(extra))["ineqs"];
    }
    out << j.dump() << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Generalized Bayesian network toolkit", "gdag-lab"};
    app.require_subcommand(1);

    bool deterministic = false;
    int jobs = 1;
    app.add_flag("--deterministic", deterministic, "Single-threaded reproducible mode");
    app.add_option("--jobs", jobs, "Worker count (overridden by GDAG_LAB_JOBS)")->check(CLI::PositiveNumber);

    std::string graph, dist, x, y, z, which;
    bool witness = false, compare = false, long_run = false, header = false, list = false, verbose = false;
    int n = 0;

    auto* dsep = app.add_subcommand("dsep", "Is x d-separated from y given z?");
    dsep->add_option("graph", graph, "GDAG JSON file")->required();
    dsep->add_option("--x", x, "Comma-separated node ids")->required();
    dsep->add_option("--y", y, "Comma-separated node ids")->required();
    dsep->add_option("--z", z, "Comma-separated node ids (omit for the empty set)");
    dsep->add_flag("--witness", witness, "Also print the U/V/Z/W partition");

    auto* ci = app.add_subcommand("ci-set", "All observable d-separation statements");
    ci->add_option("graph", graph, "GDAG JSON file")->required();

    auto* check = app.add_subcommand("check-dist", "Check a distribution against a GDAG");
    check->add_option("graph", graph, "GDAG JSON file")->required();
    check->add_option("dist", dist, "Distribution JSON file")->required();

    auto* ineq = app.add_subcommand("ineq", "Evaluate a theory-independent inequality");
    ineq->add_option("which", which, "triangle | instrumental")
        ->required()
        ->check(CLI::IsMember({"triangle", "instrumental"}));
    ineq->add_option("dist", dist, "Distribution (triangle) or conditional table (instrumental)")->required();

    auto* classify = app.add_subcommand("classify", "Search for a certificate that C = I");
    classify->add_option("graph", graph, "GDAG JSON file")->required();

    auto* reduce_cmd = app.add_subcommand("reduce", "Apply reduction rules to a fixpoint");
    reduce_cmd->add_option("graph", graph, "GDAG JSON file")->required();

    auto* census = app.add_subcommand("census", "Classify every GDAG with n nodes");
    census->add_option("--n", n, "Node count")->required()->check(CLI::Range(1, max_enumeration_nodes));
    census->add_flag("--long-run", long_run, "Allow n >= 6");
    census->add_flag("--header", header, "Print the CSV header first");
    census->add_flag("--list-survivors", list, "Print each irreducible failing GDAG after the row");

    auto* entropic = app.add_subcommand("entropic", "Derive the classical and independence entropy cones");
    entropic->add_option("graph", graph, "GDAG JSON file")->required();
    entropic->add_flag("--compare", compare, "List rows of E_C not implied by E_I");
    entropic->add_flag("--long-run", long_run, "Allow graphs above six nodes");
    entropic->add_flag("--verbose", verbose, "Report elimination progress on stderr");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "gdag-lab: " << e.what() << "\n";
        return 2;
    }

    if (const char* env = std::getenv("GDAG_LAB_JOBS")) {
        try {
            jobs = std::stoi(env);
        } catch (const std::exception&) {
            err << "gdag-lab: GDAG_LAB_JOBS must be a positive integer\n";
            return 2;
        }
        if (jobs < 1) {
            err << "gdag-lab: GDAG_LAB_JOBS must be a positive integer\n";
            return 2;
        }
    }
    if (deterministic) {
        jobs = 1;
    }

    try {
        if (dsep->parsed()) {
            return cmd_dsep(graph, x, y, z, witness, out);
        }
        if (ci->parsed()) {
            const GDag g = parse_gdag(read_file(graph));
            out << serialize(g, observable_ci_set(g)) << "\n";
            return 0;
        }
        if (check->parsed()) {
            return cmd_check_dist(graph, dist, out);
        }
        if (ineq->parsed()) {
            return cmd_ineq(which, dist, out);
        }
        if (classify->parsed()) {
            return cmd_classify(graph, out);
        }
        if (reduce_cmd->parsed()) {
            out << serialize(reduce(parse_gdag(read_file(graph)))) << "\n";
            return 0;
        }
        if (census->parsed()) {
            return cmd_census(n, long_run, header, list, out);
        }
        if (entropic->parsed()) {
            return cmd_entropic(graph, compare, long_run, verbose, out, err);
        }
    } catch (const std::exception& e) {
        err << "gdag-lab: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace gdag::lab
