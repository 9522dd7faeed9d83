#include "gdag/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gdag/error.hpp"

namespace gdag {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

const json& field(const json& obj, const char* name)
{
    if (!obj.is_object()) {
        throw ParseError(std::string("expected an object with field '") + name + "'");
    }
    auto it = obj.find(name);
    if (it == obj.end()) {
        throw ParseError(std::string("missing field '") + name + "'");
    }
    return *it;
}

const json& array_field(const json& obj, const char* name)
{
    const json& v = field(obj, name);
    if (!v.is_array()) {
        throw ParseError(std::string("field '") + name + "' must be an array");
    }
    return v;
}

std::string string_of(const json& v, const char* what)
{
    if (!v.is_string()) {
        throw ParseError(std::string(what) + " must be a string");
    }
    return v.get<std::string>();
}

int int_of(const json& v, const char* what)
{
    if (!v.is_number_integer()) {
        throw ParseError(std::string(what) + " must be an integer");
    }
    return v.get<int>();
}

Rational rational_of(const json& v)
{
    if (v.is_number_integer()) {
        return Rational(v.get<long>());
    }
    return parse_rational(string_of(v, "probability"));
}

ojson gdag_json(const GDag& g)
{
    ojson nodes = ojson::array();
    for (const auto& n : g.nodes()) {
        ojson node;
        node["id"] = n.id;
        node["kind"] = std::string(to_string(n.kind));
        nodes.push_back(std::move(node));
    }
    ojson edges = ojson::array();
    for (const auto& [p, c] : g.edges()) {
        edges.push_back(ojson::array({g.id(p), g.id(c)}));
    }
    ojson out;
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    return out;
}

GDag gdag_from_json(const json& j)
{
    std::vector<Node> nodes;
    for (const auto& n : array_field(j, "nodes")) {
        const std::string kind = string_of(field(n, "kind"), "node kind");
        NodeKind k;
        if (kind == "observed") {
            k = NodeKind::observed;
        } else if (kind == "unobserved") {
            k = NodeKind::unobserved;
        } else {
            throw ParseError("node kind must be \"observed\" or \"unobserved\", got \"" + kind + "\"");
        }
        nodes.push_back({string_of(field(n, "id"), "node id"), k});
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : array_field(j, "edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw ParseError("edge must be a [parent, child] pair");
        }
        edges.emplace_back(string_of(e[0], "edge endpoint"), string_of(e[1], "edge endpoint"));
    }
    return GDag(std::move(nodes), edges);
}

std::vector<Variable> variables_of(const json& arr)
{
    std::vector<Variable> vars;
    for (const auto& v : arr) {
        vars.push_back({string_of(field(v, "id"), "variable id"), int_of(field(v, "card"), "cardinality")});
    }
    return vars;
}

ojson variables_json(const std::vector<Variable>& vars)
{
    ojson out = ojson::array();
    for (const auto& v : vars) {
        ojson item;
        item["id"] = v.id;
        item["card"] = v.card;
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<Rational> probs_of(const json& arr)
{
    std::vector<Rational> probs;
    for (const auto& p : arr) {
        probs.push_back(rational_of(p));
    }
    return probs;
}

ojson probs_json(const std::vector<Rational>& probs)
{
    ojson out = ojson::array();
    for (const auto& p : probs) {
        out.push_back(to_string(p));
    }
    return out;
}

ojson statement_json(const GDag& g, const CIStatement& s)
{
    ojson out;
    out["x"] = g.ids(s.x);
    out["y"] = g.ids(s.y);
    out["z"] = g.ids(s.z);
    return out;
}

std::vector<std::string> id_list(const json& arr)
{
    if (!arr.is_array()) {
        throw ParseError("expected an array of ids");
    }
    std::vector<std::string> ids;
    for (const auto& v : arr) {
        ids.push_back(string_of(v, "id"));
    }
    return ids;
}

} // namespace

GDag parse_gdag(std::string_view text)
{
    return gdag_from_json(parse_json(text));
}

std::string serialize(const GDag& g)
{
    return gdag_json(g).dump();
}

CISet parse_ci_set(const GDag& g, std::string_view text)
{
    const json j = parse_json(text);
    if (!j.is_array()) {
        throw ParseError("CI set must be an array");
    }
    std::vector<CIStatement> out;
    for (const auto& s : j) {
        out.push_back({g.node_set(id_list(field(s, "x"))), g.node_set(id_list(field(s, "y"))),
                       g.node_set(id_list(field(s, "z")))});
    }
    return CISet(std::move(out));
}

std::string serialize(const GDag& g, const CISet& s)
{
    ojson out = ojson::array();
    for (const auto& st : s) {
        out.push_back(statement_json(g, st));
    }
    return out.dump();
}

std::string serialize(const GDag& g, const CIStatement& s)
{
    return statement_json(g, s).dump();
}

Distribution parse_distribution(std::string_view text)
{
    const json j = parse_json(text);
    return Distribution(variables_of(array_field(j, "variables")), probs_of(array_field(j, "probs")));
}

std::string serialize(const Distribution& p)
{
    ojson out;
    out["variables"] = variables_json(p.variables());
    out["probs"] = probs_json(p.probs());
    return out.dump();
}

ConditionalTable parse_conditional_table(std::string_view text)
{
    const json j = parse_json(text);
    std::vector<Variable> given;
    if (j.is_object() && j.contains("given")) {
        given = variables_of(array_field(j, "given"));
    }
    return ConditionalTable(variables_of(array_field(j, "variables")), std::move(given),
                            probs_of(array_field(j, "probs")));
}

std::string serialize(const ConditionalTable& t)
{
    ojson out;
    out["variables"] = variables_json(t.variables());
    out["given"] = variables_json(t.given());
    out["probs"] = probs_json(t.probs());
    return out.dump();
}

Cone parse_cone(std::string_view text)
{
    const json j = parse_json(text);
    std::vector<std::string> vars = id_list(array_field(j, "variables"));
    if (vars.empty() || static_cast<int>(vars.size()) > max_cone_variables) {
        throw ParseError("cone needs between 1 and " + std::to_string(max_cone_variables) + " variables");
    }
    const Cone shape(vars, {});
    std::vector<LinIneq> rows;
    for (const auto& row : array_field(j, "ineqs")) {
        const json& coeffs = field(row, "coeffs");
        if (!coeffs.is_object()) {
            throw ParseError("coeffs must be an object");
        }
        std::map<SubsetMask, Rational> terms;
        for (const auto& [key, value] : coeffs.items()) {
            std::vector<std::string> ids;
            std::stringstream ss(key);
            for (std::string id; std::getline(ss, id, ',');) {
                ids.push_back(id);
            }
            const SubsetMask m = shape.coordinate(ids);
            if (m == 0) {
                throw ParseError("empty coordinate in cone row");
            }
            terms[m] += rational_of(value);
        }
        rows.push_back(LinIneq::from_rational(shape.variable_count(), terms));
    }
    return Cone(std::move(vars), std::move(rows));
}

std::string serialize(const Cone& c)
{
    ojson rows = ojson::array();
    for (const auto& r : c.ineqs()) {
        ojson coeffs = ojson::object();
        for (SubsetMask s = 1; s <= r.dimension(); ++s) {
            if (r.coeff(s) != 0) {
                coeffs[c.coordinate_name(s)] = to_string(Rational(static_cast<long>(r.coeff(s))));
            }
        }
        ojson row;
        row["coeffs"] = std::move(coeffs);
        rows.push_back(std::move(row));
    }
    ojson out;
    out["variables"] = c.variables();
    out["ineqs"] = std::move(rows);
    return out.dump();
}

Certificate parse_certificate(std::string_view text)
{
    const json j = parse_json(text);
    Certificate c{gdag_from_json(field(j, "source")), {}, gdag_from_json(field(j, "final"))};
    for (const auto& s : array_field(j, "steps")) {
        Transformation t;
        t.kind = parse_transform_kind(string_of(field(s, "op"), "op"));
        t.a = string_of(field(s, "a"), "a");
        if (s.contains("b")) {
            t.b = string_of(s["b"], "b");
        }
        c.steps.push_back(std::move(t));
    }
    return c;
}

std::string serialize(const Certificate& c)
{
    ojson steps = ojson::array();
    for (const auto& t : c.steps) {
        ojson s;
        s["op"] = std::string(to_string(t.kind));
        s["a"] = t.a;
        if (t.kind != TransformKind::remove_isolated_unobserved) {
            s["b"] = t.b;
        }
        steps.push_back(std::move(s));
    }
    ojson out;
    out["source"] = gdag_json(c.source);
    out["steps"] = std::move(steps);
    out["final"] = gdag_json(c.final);
    return out.dump();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace gdag
