#include "linf/ce.hpp"
#include "linf/cup_def.hpp"
#include "linf/errors.hpp"
#include "linf/extensions.hpp"
#include "linf/lie_models.hpp"
#include "linf/model_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace linf;
using nlohmann::json;

namespace {

struct Options {
    std::string model_path;
    std::string window;
    std::optional<int> weight_cap;
    std::optional<int> degree_cap;
    std::string json_path;
    bool truncated = false;
    std::string base_path;
    std::string ideal;
};

std::pair<int, int> parse_window(const std::string& text)
{
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw ParseError("window must look like lo..hi, got \"" + text + "\"");
    try {
        std::size_t used = 0;
        int lo = std::stoi(text.substr(0, dots), &used);
        if (used != dots)
            throw std::invalid_argument("lo");
        std::string rest = text.substr(dots + 2);
        int hi = std::stoi(rest, &used);
        if (used != rest.size())
            throw std::invalid_argument("hi");
        if (lo > hi)
            throw ParseError("window lo > hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ParseError("window must look like lo..hi, got \"" + text + "\"");
    }
}

std::pair<int, int> window_of(const Options& o, const Model& m, std::pair<int, int> fallback)
{
    if (!o.window.empty())
        return parse_window(o.window);
    return m.caps.window.value_or(fallback);
}

LInftyStructure structure_of(const Options& o, const Model& m)
{
    if (!m.structure)
        throw ValidationError("this command needs a lie, linfty or presented-lie model");
    return o.weight_cap ? m.structure->with_cap(*o.weight_cap) : *m.structure;
}

json vector_json(const Vector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

json dims_json(const std::map<int, std::size_t>& dims)
{
    json a = json::array();
    for (const auto& [k, d] : dims)
        a.push_back({{"degree", k}, {"dim", d}});
    return a;
}

std::string dims_text(const std::map<int, std::size_t>& dims)
{
    std::ostringstream s;
    for (const auto& [k, d] : dims)
        s << "  " << k << ": " << d << "\n";
    return s.str();
}

json rows_json(const std::vector<CERow>& rows)
{
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"derivation_degree", r.derivation_degree},
                     {"ce_degree", r.ce_degree},
                     {"dim", r.dim},
                     {"chains", r.chain_dim},
                     {"safe", r.safe}});
    return a;
}

void print_rows(std::ostream& out, const std::vector<CERow>& rows)
{
    out << "derivation-degree  ce-degree  dim  chains  safe\n";
    for (const auto& r : rows)
        out << r.derivation_degree << "  " << r.ce_degree << "  " << r.dim << "  " << r.chain_dim << "  "
            << (r.safe ? "yes" : "NO (truncation suspect)") << "\n";
}

json cmd_check(const Options&, const Model& m, std::ostream& out)
{
    if (m.kind == ModelKind::cdga) {
        out << "cdga: OK (dim " << m.base->dim() << ", nilpotency order " << m.base->nilpotency_order() << ")\n";
        return {{"ok", true}, {"kind", "cdga"}, {"dim", m.base->dim()}};
    }
    out << "L∞/Jacobi: OK\n";
    out << "dim " << m.structure->dim() << ", weight cap " << m.structure->weight_cap() << "\n";
    return {{"ok", true}, {"kind", kind_name(m.kind)}, {"dim", m.structure->dim()}};
}

json cmd_cohomology(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    auto [lo, hi] = window_of(o, m, {-1, 3});
    CEOptions opts;
    opts.truncated = o.truncated;
    opts.brackets = false;
    auto t = ce_cohomology(v, lo, hi, opts);
    out << (o.truncated ? "truncated " : "") << "CE cohomology, weight cap " << t.weight_cap << "\n";
    print_rows(out, t.rows);
    return {{"truncated", o.truncated}, {"weight_cap", t.weight_cap}, {"rows", rows_json(t.rows)}};
}

json cmd_baut(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    auto [lo, hi] = window_of(o, m, {-3, 3});
    CEOptions opts;
    opts.truncated = o.truncated;
    auto b = baut_model(v, lo, hi, 1, opts);
    out << "Whitehead table of the derivation dgla, weight cap " << b.full.weight_cap << "\n";
    print_rows(out, b.full.rows);
    out << "connected cover (homological degree j = -derivation degree, n = " << b.n << ")\n";
    for (const auto& r : b.cover_rows)
        out << "  j=" << -r.derivation_degree << ": " << r.dim << (r.safe ? "" : " (truncation suspect)") << "\n";
    out << "action of the Euler-degree classes:\n";
    json action = json::array();
    for (const auto& a : b.action) {
        out << "  [h" << a.h1_index << ", class " << a.target_index << " in degree " << a.target_degree
            << "] = " << format_vector(a.value) << "\n";
        action.push_back({{"h1", a.h1_index},
                          {"target_degree", a.target_degree},
                          {"target", a.target_index},
                          {"value", vector_json(a.value)}});
    }
    json cover = json::array();
    for (const auto& r : b.cover_rows)
        cover.push_back({{"j", -r.derivation_degree}, {"dim", r.dim}, {"safe", r.safe}});
    return {{"rows", rows_json(b.full.rows)}, {"cover", cover}, {"action", action}};
}

json cmd_harrison(const Options& o, const Model& m, std::ostream& out)
{
    auto [lo, hi] = window_of(o, m, {-2, 2});
    HarrisonTable h;
    if (m.kind == ModelKind::cdga) {
        std::size_t len = static_cast<std::size_t>(m.caps.length.value_or(3));
        if (o.degree_cap) {
            int least = 0;
            for (std::size_t i = 0; i < m.base->dim(); ++i) {
                const int d = m.base->degree(i) - 1;
                if (d <= 0)
                    throw InfinitePerDegree("a degree cap needs all suspended generators in positive degree");
                least = (i == 0) ? d : std::min(least, d);
            }
            len = static_cast<std::size_t>(std::max(1, *o.degree_cap / std::max(1, least)));
        }
        h = harrison_cohomology(*m.base, lo, hi, len);
    } else if (m.presented) {
        h = harrison_cohomology(*m.presented, lo, hi);
    } else {
        throw ValidationError("harrison needs a cdga or presented-lie model");
    }
    out << "truncated Harrison cohomology (Der of the Quillen model), by derivation degree\n"
        << dims_text(h.truncated);
    out << "full Harrison cohomology (tau-derivations), by derivation degree\n" << dims_text(h.full);
    out << "homology of the Lie model, by cohomological degree\n" << dims_text(h.lie_homology);
    out << "long exact sequence: " << (h.les_consistent ? "consistent" : "INCONSISTENT") << "\n";
    json unsafe = h.unsafe;
    if (!h.unsafe.empty()) {
        out << "truncation-suspect degrees:";
        for (int k : h.unsafe)
            out << " " << k;
        out << "\n";
    }
    return {{"truncated", dims_json(h.truncated)},
            {"full", dims_json(h.full)},
            {"lie_homology", dims_json(h.lie_homology)},
            {"les_consistent", h.les_consistent},
            {"unsafe", unsafe}};
}

json cmd_extend(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    if (o.ideal.empty())
        throw ValidationError("extend needs --ideal=name,name,...");
    std::vector<Vector> ideal;
    std::stringstream ss(o.ideal);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto idx = v.space().index_of(name);
        if (!idx)
            throw ParseError("unknown basis element \"" + name + "\" in --ideal");
        Vector e(v.dim());
        e[*idx] = 1;
        ideal.push_back(e);
    }
    auto e = mc_from_extension(v, ideal);
    out << "base dim " << e.base.dim() << ", fiber dim " << e.fiber.dim() << "\n";
    out << "xi = " << e.xi.format() << "\n";
    const bool split = has_section(e);
    out << "split: " << (split ? "yes" : "no") << "\n";
    json r{{"base_dim", e.base.dim()}, {"fiber_dim", e.fiber.dim()}, {"xi", e.xi.format()}, {"split", split}};
    try {
        auto c = classical_components(e);
        out << "classical: action is a Lie map " << (c.action_is_lie_map ? "yes" : "no") << ", 2-cocycle "
            << (c.cocycle ? "yes" : "no") << ", reconstructs " << (c.reconstructs ? "yes" : "no") << "\n";
        json f2 = json::array();
        for (const auto& [uv, val] : c.f2) {
            out << "  f2(" << e.base.space()[uv.first].name << "," << e.base.space()[uv.second].name
                << ") = " << format_vector(val) << "\n";
            f2.push_back({{"inputs", {uv.first, uv.second}}, {"value", vector_json(val)}});
        }
        r["classical"] = {{"action_is_lie_map", c.action_is_lie_map},
                          {"cocycle", c.cocycle},
                          {"reconstructs", c.reconstructs},
                          {"f2", f2}};
    } catch (const AritySupport& err) {
        out << "classical components: not applicable (" << err.what() << ")\n";
    } catch (const SupportOutsideAffine& err) {
        out << "classical components: not applicable (" << err.what() << ")\n";
    }
    return r;
}

json cmd_universal(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    auto u = universal_extension(v, o.truncated);
    out << "universal extension" << (o.truncated ? " (truncated base)" : "") << ": base dim "
        << u.extension.base.dim() << "\n";
    out << "m1 maps the suspended fiber isomorphically onto I: " << (u.m1_iso_on_suspension ? "yes" : "no")
        << "\n";
    out << "homology of the total space, by homological degree\n" << dims_text(u.total_homology);
    out << "homology of the truncated derivation complex\n" << dims_text(u.truncated_homology);
    out << "inclusion is a quasi-isomorphism: " << (u.quasi_isomorphism ? "yes" : "no") << "\n";
    return {{"base_dim", u.extension.base.dim()},
            {"m1_iso", u.m1_iso_on_suspension},
            {"total_homology", dims_json(u.total_homology)},
            {"truncated_homology", dims_json(u.truncated_homology)},
            {"quasi_isomorphism", u.quasi_isomorphism}};
}

json cmd_deform(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    if (o.base_path.empty())
        throw ValidationError("deform needs --base=<cdga model>");
    Model b = load_model(o.base_path);
    if (!b.base)
        throw ValidationError("--base must be a cdga model");
    auto r = deformation_set(v, *b.base);
    out << "Def dimension: " << r.dimension << "\n";
    out << "base is infinitesimal: " << (r.infinitesimal ? "yes" : "no") << "\n";
    if (!r.infinitesimal) {
        std::size_t lifted = 0;
        for (int lvl : r.obstructed_at)
            lifted += (lvl == 0);
        out << "first-order deformations lifting to the whole base: " << lifted << " of " << r.obstructed_at.size()
            << "\n";
    }
    if (!r.safe)
        out << "warning: some degrees are truncation suspect\n";
    return {{"dimension", r.dimension},
            {"infinitesimal", r.infinitesimal},
            {"obstructed_at", r.obstructed_at},
            {"safe", r.safe}};
}

json cmd_cup_table(const Options& o, const Model& m, std::ostream& out)
{
    auto v = structure_of(o, m);
    auto [lo, hi] = window_of(o, m, {-1, 3});
    CEOptions opts;
    opts.truncated = o.truncated;
    auto t = ce_cohomology(v, lo, hi, opts);
    print_rows(out, t.rows);
    out << "brackets of cohomology classes (derivation degrees):\n";
    json a = json::array();
    for (const auto& b : t.brackets) {
        out << "  [" << b.left_degree << "#" << b.left << ", " << b.right_degree << "#" << b.right << "] -> "
            << b.result_degree << ": " << (b.value ? format_vector(*b.value) : std::string("outside window")) << "\n";
        json e{{"left", {b.left_degree, b.left}}, {"right", {b.right_degree, b.right}}, {"result_degree", b.result_degree}};
        e["value"] = b.value ? vector_json(*b.value) : json(nullptr);
        a.push_back(e);
    }
    return {{"rows", rows_json(t.rows)}, {"brackets", a}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations with truncated L-infinity algebras over Q"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", o.model_path, "model file (JSON)")->required();
        sub->add_option("--window", o.window, "derivation-degree window lo..hi");
        sub->add_option("--weight-cap", o.weight_cap, "weight cap of the representing algebra");
        sub->add_option("--degree-cap", o.degree_cap, "internal degree cap for free Lie models");
        sub->add_option("--json", o.json_path, "also write the report as JSON");
        sub->add_flag("--truncated", o.truncated, "use the truncated complex");
        return sub;
    };

    using Handler = json (*)(const Options&, const Model&, std::ostream&);
    std::vector<std::pair<CLI::App*, Handler>> commands = {
        {add_common(app.add_subcommand("check", "parse and validate a model")), cmd_check},
        {add_common(app.add_subcommand("cohomology", "windowed CE cohomology")), cmd_cohomology},
        {add_common(app.add_subcommand("baut", "Whitehead table and Euler action")), cmd_baut},
        {add_common(app.add_subcommand("harrison", "Harrison cohomology of a cdga")), cmd_harrison},
        {add_common(app.add_subcommand("extend", "extension by an ideal as an MC element")), cmd_extend},
        {add_common(app.add_subcommand("universal-ext", "universal extension")), cmd_universal},
        {add_common(app.add_subcommand("deform", "deformations over a nilpotent base")), cmd_deform},
        {add_common(app.add_subcommand("cup-table", "brackets of cohomology classes")), cmd_cup_table},
    };
    commands[4].first->add_option("--ideal", o.ideal, "comma-separated basis names spanning the ideal");
    commands[6].first->add_option("--base", o.base_path, "cdga model of the base")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [sub, handler] : commands) {
            if (!sub->parsed())
                continue;
            Model m = load_model(o.model_path);
            std::ostringstream text;
            json report = handler(o, m, text);
            std::cout << text.str();
            if (!o.json_path.empty()) {
                report["command"] = sub->get_name();
                report["model"] = o.model_path;
                std::ofstream f(o.json_path);
                if (!f)
                    throw ParseError("cannot write " + o.json_path);
                f << report.dump(2) << "\n";
            }
        }
    } catch (const UnsafeWindow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
