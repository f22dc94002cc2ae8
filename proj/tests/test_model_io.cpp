#include "doctest.h"

#include "linf/model_io.hpp"

#include <filesystem>

using namespace linf;

namespace {

std::string fixture(const std::string& name)
{
    return std::string(LINF_FIXTURE_DIR) + "/" + name;
}

bool same_model(const Model& a, const Model& b)
{
    if (a.kind != b.kind)
        return false;
    if (a.structure.has_value() != b.structure.has_value() || a.base.has_value() != b.base.has_value())
        return false;
    if (a.structure && !(*a.structure == *b.structure))
        return false;
    if (a.base) {
        if (a.base->names() != b.base->names())
            return false;
        for (std::size_t i = 0; i < a.base->dim(); ++i) {
            if (a.base->degree(i) != b.base->degree(i) || a.base->differential(i) != b.base->differential(i))
                return false;
            for (std::size_t j = 0; j < a.base->dim(); ++j)
                if (a.base->product(i, j) != b.base->product(i, j))
                    return false;
        }
    }
    if (a.presented)
        return b.presented && a.presented->brackets == b.presented->brackets &&
               a.presented->basis == b.presented->basis;
    return true;
}

}  // namespace

TEST_CASE("every shipped fixture parses and round-trips")
{
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(LINF_FIXTURE_DIR)) {
        const std::string name = entry.path().filename().string();
        CAPTURE(name);
        if (name == "jacobi-violation.json")
            continue;
        Model m = load_model(entry.path().string());
        Model again = parse_model(serialize_model(m));
        CHECK(same_model(m, again));
        CHECK(serialize_model(again) == serialize_model(m));
        ++seen;
    }
    CHECK(seen >= 8);
}

TEST_CASE("fixture contents")
{
    auto sl2 = load_model(fixture("sl2.json"));
    REQUIRE(sl2.structure);
    CHECK(sl2.structure->dim() == 3);
    CHECK(sl2.kind == ModelKind::lie);

    auto s2 = load_model(fixture("s2-model.json"));
    CHECK(s2.structure->weight_cap() == 4);
    REQUIRE(s2.caps.window);
    CHECK(*s2.caps.window == std::make_pair(-3, 3));

    auto t3 = load_model(fixture("t3-base.json"));
    REQUIRE(t3.base);
    CHECK(t3.base->nilpotency_order() == 3);

    auto wedge = load_model(fixture("wedge-n3-N1.json"));
    REQUIRE(wedge.presented);
    CHECK(wedge.presented->dim() == 2);
}

TEST_CASE("negative fixture names the Jacobi triple")
{
    try {
        load_model(fixture("jacobi-violation.json"));
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(x,y,z)") != std::string::npos);
    }
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_AS(parse_model("{\"kind\": \"lie\", "), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"kind": "group", "basis": []})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"kind": "lie"})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"kind": "lie", "basis": [{"name": "x", "degree": 0}],
        "ops": [{"arity": 2, "inputs": ["x", "y"], "output": []}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_model(R"({"kind": "lie", "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}],
        "ops": [{"arity": 2, "inputs": ["x", "y"], "output": [{"name": "x", "coeff": "0.5"}]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_model(R"({"kind": "presented-lie", "basis": [{"name": "p", "degree": 2}]})"), ParseError);
    try {
        parse_model("{\"kind\": ");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("validation errors")
{
    // degree mismatch: [x,y] of degree 0 cannot land on a degree-1 element
    CHECK_THROWS_AS(parse_model(R"({"kind": "lie", "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0},
        {"name": "w", "degree": 1}],
        "ops": [{"arity": 2, "inputs": ["x", "y"], "output": [{"name": "w", "coeff": "1"}]}]})"),
                    DegreeMismatch);
    CHECK_THROWS_AS(parse_model(R"({"kind": "cdga", "grading": "cohomological", "basis": [{"name": "u", "degree": 1},
        {"name": "w", "degree": 2}],
        "ops": [{"arity": 2, "inputs": ["u", "u"], "output": [{"name": "w", "coeff": "1"}]}]})"),
                    ValidationError);
}

TEST_CASE("empty basis is the zero algebra")
{
    auto m = parse_model(R"({"kind": "lie", "basis": [], "ops": []})");
    REQUIRE(m.structure);
    CHECK(m.structure->dim() == 0);
    auto l = parse_model(R"({"kind": "linfty", "grading": "cohomological", "basis": []})");
    CHECK(l.structure->dim() == 0);
}

TEST_CASE("cohomological grading is converted")
{
    auto m = parse_model(R"({"kind": "linfty", "grading": "cohomological",
        "basis": [{"name": "a", "degree": -1}, {"name": "b", "degree": -2}],
        "ops": [{"arity": 2, "inputs": ["a", "a"], "output": [{"name": "b", "coeff": "-2"}]}],
        "caps": {"weight": 4}})");
    auto s2 = load_model(fixture("s2-model.json"));
    CHECK(*m.structure == *s2.structure);
}
