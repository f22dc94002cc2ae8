#include "linf/model_io.hpp"

#include "linf/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace linf {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

std::string get_string(const json& j, const char* what)
{
    if (!j.is_string())
        throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

int get_int(const json& j, const char* what)
{
    if (!j.is_number_integer())
        throw ParseError(std::string(what) + " must be an integer");
    return j.get<int>();
}

Q get_coeff(const json& j)
{
    if (j.is_number_integer())
        return Q(j.get<long>());
    return parse_rational(get_string(j, "coeff"));
}

struct NamedBasis {
    std::vector<std::string> names;
    std::vector<int> degrees;

    std::size_t index(const std::string& name) const
    {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return i;
        throw ParseError("unknown basis element \"" + name + "\"");
    }
};

std::vector<std::pair<std::size_t, Q>> parse_output(const json& out, const NamedBasis& b)
{
    if (!out.is_array())
        throw ParseError("output must be a list");
    std::vector<std::pair<std::size_t, Q>> terms;
    for (const auto& t : out)
        terms.emplace_back(b.index(get_string(require(t, "name"), "name")), get_coeff(require(t, "coeff")));
    return terms;
}

json output_json(const Vector& v, const std::vector<std::string>& names)
{
    json out = json::array();
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!is_zero(v[k]))
            out.push_back({{"name", names[k]}, {"coeff", to_string(v[k])}});
    return out;
}

json output_json(const std::vector<std::pair<std::size_t, Q>>& terms, const std::vector<std::string>& names)
{
    json out = json::array();
    for (const auto& [k, c] : terms)
        out.push_back({{"name", names[k]}, {"coeff", to_string(c)}});
    return out;
}

ModelKind parse_kind(const std::string& s)
{
    if (s == "lie")
        return ModelKind::lie;
    if (s == "linfty")
        return ModelKind::linfty;
    if (s == "cdga")
        return ModelKind::cdga;
    if (s == "presented-lie")
        return ModelKind::presented_lie;
    throw ParseError("unknown kind \"" + s + "\"");
}

Vector dense(const std::vector<std::pair<std::size_t, Q>>& terms, std::size_t n)
{
    Vector v(n);
    for (const auto& [k, c] : terms)
        v[k] += c;
    return v;
}

/// Homological degree of a declared degree.
int homological(Grading g, int d)
{
    return g == Grading::homological ? d : -d;
}

void build_lie(Model& m, const NamedBasis& b, const json& ops, const json& diff)
{
    const std::size_t n = b.names.size();
    GradedLie g;
    for (std::size_t i = 0; i < n; ++i)
        g.basis.push_back({b.names[i], homological(m.grading, b.degrees[i])});
    g.brackets.assign(n, std::vector<Vector>(n, Vector(n)));
    g.differential.assign(n, Vector(n));
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (const auto& op : ops) {
        if (get_int(require(op, "arity"), "arity") != 2)
            throw ParseError("a lie model only has binary brackets");
        const auto& in = require(op, "inputs");
        if (!in.is_array() || in.size() != 2)
            throw ParseError("a bracket needs two inputs");
        std::size_t i = b.index(get_string(in[0], "input")), j = b.index(get_string(in[1], "input"));
        if (seen[i][j])
            throw ValidationError("bracket [" + b.names[i] + "," + b.names[j] + "] given twice");
        seen[i][j] = seen[j][i] = true;
        Vector v = dense(parse_output(require(op, "output"), b), n);
        g.brackets[i][j] = v;
        const int s = -parity_sign(static_cast<long long>(g.degree(i)) * g.degree(j));
        for (auto& x : v)
            x *= s;
        if (i != j)
            g.brackets[j][i] = v;
        else if (g.brackets[i][i] != v)
            throw ValidationError("[" + b.names[i] + "," + b.names[i] + "] must vanish for an even element");
    }
    for (const auto& d : diff)
        g.differential[b.index(get_string(require(d, "input"), "input"))] =
            dense(parse_output(require(d, "output"), b), n);
    g.validate();
    m.structure = g.to_linfty(m.caps.weight.value_or(3));
}

void build_linfty(Model& m, const NamedBasis& b, const json& ops, const json& diff)
{
    std::vector<BasisElement> basis;
    for (std::size_t i = 0; i < b.names.size(); ++i)
        basis.push_back({b.names[i], b.degrees[i]});
    std::vector<BracketEntry> entries;
    int max_arity = 2;
    for (const auto& op : ops) {
        const int arity = get_int(require(op, "arity"), "arity");
        const auto& in = require(op, "inputs");
        if (!in.is_array() || static_cast<int>(in.size()) != arity)
            throw ParseError("inputs do not match the arity");
        BracketEntry e;
        for (const auto& x : in)
            e.inputs.push_back(b.index(get_string(x, "input")));
        e.output = parse_output(require(op, "output"), b);
        entries.push_back(std::move(e));
        max_arity = std::max(max_arity, arity);
    }
    for (const auto& d : diff)
        entries.push_back({{b.index(get_string(require(d, "input"), "input"))}, parse_output(require(d, "output"), b)});
    const int cap = m.caps.weight.value_or(std::max(3, max_arity));
    m.structure = LInftyStructure::from_brackets(GradedSpace(basis, m.grading), entries, cap);
    auto report = check_linfty(*m.structure);
    if (!report.ok)
        throw ValidationError("[m,m] != 0 in weight " + std::to_string(report.first_failing_weight.value_or(0)) +
                              ": " + report.residual);
}

void build_cdga(Model& m, const NamedBasis& b, const json& ops, const json& diff)
{
    const std::size_t n = b.names.size();
    std::vector<int> degrees;
    for (int d : b.degrees)
        degrees.push_back(m.grading == Grading::cohomological ? d : -d);
    std::vector<NilpotentBase::Product> products;
    for (const auto& op : ops) {
        if (get_int(require(op, "arity"), "arity") != 2)
            throw ParseError("a cdga model only has binary products");
        const auto& in = require(op, "inputs");
        if (!in.is_array() || in.size() != 2)
            throw ParseError("a product needs two inputs");
        products.push_back({b.index(get_string(in[0], "input")), b.index(get_string(in[1], "input")),
                            parse_output(require(op, "output"), b)});
    }
    std::vector<Vector> d(n, Vector(n));
    for (const auto& x : diff)
        d[b.index(get_string(require(x, "input"), "input"))] = dense(parse_output(require(x, "output"), b), n);
    m.base = NilpotentBase(b.names, degrees, products, d);
}

void build_presented(Model& m, const NamedBasis& b, const json& j, const json& diff)
{
    std::vector<BasisElement> gens;
    for (std::size_t i = 0; i < b.names.size(); ++i)
        gens.push_back({b.names[i], homological(m.grading, b.degrees[i])});
    FreeLie f(gens);
    std::vector<TensorPoly> rel;
    if (j.contains("relations"))
        for (const auto& r : j.at("relations")) {
            m.relation_text.push_back(get_string(r, "relation"));
            rel.push_back(f.parse(m.relation_text.back()));
        }
    std::vector<TensorPoly> d(gens.size());
    for (const auto& x : diff) {
        const std::string input = get_string(require(x, "input"), "input");
        const std::string expr = get_string(require(x, "expr"), "expr");
        d[b.index(input)] = f.parse(expr);
        m.differential_text.emplace_back(input, expr);
    }
    if (m.caps.length)
        m.presented = presented_dgla(f, rel, d, static_cast<std::size_t>(*m.caps.length));
    else if (m.caps.degree)
        m.presented = presented_dgla_degree_cap(f, rel, d, *m.caps.degree);
    else
        throw ParseError("a presented-lie model needs caps.degree or caps.length");
    m.structure = m.presented->to_linfty(m.caps.weight.value_or(3));
}

}  // namespace

std::string kind_name(ModelKind k)
{
    switch (k) {
    case ModelKind::lie: return "lie";
    case ModelKind::linfty: return "linfty";
    case ModelKind::cdga: return "cdga";
    case ModelKind::presented_lie: return "presented-lie";
    }
    return "?";
}

Model parse_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte) + ": " + e.what());
    }
    Model m;
    m.kind = parse_kind(get_string(require(j, "kind"), "kind"));
    const std::string grading = j.contains("grading") ? get_string(j.at("grading"), "grading") : "homological";
    if (grading == "homological")
        m.grading = Grading::homological;
    else if (grading == "cohomological")
        m.grading = Grading::cohomological;
    else
        throw ParseError("grading must be homological or cohomological");

    if (j.contains("caps")) {
        const auto& c = j.at("caps");
        if (c.contains("weight"))
            m.caps.weight = get_int(c.at("weight"), "caps.weight");
        if (c.contains("degree"))
            m.caps.degree = get_int(c.at("degree"), "caps.degree");
        if (c.contains("length"))
            m.caps.length = get_int(c.at("length"), "caps.length");
        if (c.contains("window")) {
            const auto& w = c.at("window");
            if (!w.is_array() || w.size() != 2)
                throw ParseError("caps.window must be [lo, hi]");
            m.caps.window = std::make_pair(get_int(w[0], "window"), get_int(w[1], "window"));
        }
    }

    NamedBasis b;
    const auto& basis = require(j, "basis");
    if (!basis.is_array())
        throw ParseError("basis must be a list");
    for (const auto& e : basis) {
        b.names.push_back(get_string(require(e, "name"), "name"));
        b.degrees.push_back(get_int(require(e, "degree"), "degree"));
    }
    const json ops = j.contains("ops") ? j.at("ops") : json::array();
    const json diff = j.contains("differential") ? j.at("differential") : json::array();
    if (!ops.is_array() || !diff.is_array())
        throw ParseError("ops and differential must be lists");

    switch (m.kind) {
    case ModelKind::lie: build_lie(m, b, ops, diff); break;
    case ModelKind::linfty: build_linfty(m, b, ops, diff); break;
    case ModelKind::cdga: build_cdga(m, b, ops, diff); break;
    case ModelKind::presented_lie: build_presented(m, b, j, diff); break;
    }
    return m;
}

Model load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const Model& m)
{
    json j;
    j["kind"] = kind_name(m.kind);
    json caps = json::object();
    if (m.caps.degree)
        caps["degree"] = *m.caps.degree;
    if (m.caps.length)
        caps["length"] = *m.caps.length;
    if (m.caps.window)
        caps["window"] = {m.caps.window->first, m.caps.window->second};

    json basis = json::array();
    json ops = json::array();
    json diff = json::array();
    if (m.kind == ModelKind::cdga) {
        const auto& a = *m.base;
        j["grading"] = "cohomological";
        for (std::size_t i = 0; i < a.dim(); ++i)
            basis.push_back({{"name", a.name(i)}, {"degree", a.degree(i)}});
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (std::size_t k = i; k < a.dim(); ++k)
                if (auto out = output_json(a.product(i, k), a.names()); !out.empty())
                    ops.push_back({{"arity", 2}, {"inputs", {a.name(i), a.name(k)}}, {"output", out}});
            if (auto out = output_json(a.differential(i), a.names()); !out.empty())
                diff.push_back({{"input", a.name(i)}, {"output", out}});
        }
    } else if (m.kind == ModelKind::presented_lie) {
        const auto& f = m.presented->presentation->free;
        j["grading"] = "homological";
        for (std::size_t i = 0; i < f.generators(); ++i)
            basis.push_back({{"name", f.generator(i).name}, {"degree", f.generator(i).degree}});
        j["relations"] = m.relation_text;
        for (const auto& [input, expr] : m.differential_text)
            diff.push_back({{"input", input}, {"expr", expr}});
        caps["weight"] = m.structure->weight_cap();
    } else {
        const auto& v = *m.structure;
        j["grading"] = "homological";
        std::vector<std::string> names;
        for (std::size_t i = 0; i < v.dim(); ++i) {
            basis.push_back({{"name", v.space()[i].name}, {"degree", v.degree(i)}});
            names.push_back(v.space()[i].name);
        }
        for (const auto& e : v.to_brackets()) {
            json inputs = json::array();
            for (auto i : e.inputs)
                inputs.push_back(names[i]);
            if (e.inputs.size() == 1)
                diff.push_back({{"input", names[e.inputs[0]]}, {"output", output_json(e.output, names)}});
            else
                ops.push_back({{"arity", e.inputs.size()}, {"inputs", inputs}, {"output", output_json(e.output, names)}});
        }
        caps["weight"] = v.weight_cap();
    }
    j["basis"] = basis;
    j["ops"] = ops;
    j["differential"] = diff;
    j["caps"] = caps;
    return j.dump(2) + "\n";
}

}  // namespace linf
