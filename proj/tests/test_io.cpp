#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "cuntz/error.hpp"
#include "cuntz/io.hpp"
#include "support.hpp"

using namespace cuntz;
using namespace cuntz::test;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_system(text, "test.json");
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("every fixture round-trips")
{
    for (const char* name : {"mu4", "mu4_l03", "twocycle", "twocycle_planar", "invariant_line", "noninjective_walk",
                             "walsh2", "walsh3x2", "l2q"}) {
        CAPTURE(name);
        const SystemConfig cfg = load_fixture(name);
        const std::string text = to_json_text(cfg);
        const SystemConfig again = parse_system(text, "roundtrip");
        CHECK(same_config(cfg, again));
        CHECK(to_json_text(again) == text);
        if (cfg.filter) {
            CHECK(same_system(*cfg.filter, *parse_system(to_json_text(*cfg.filter)).filter));
        }
        if (cfg.walk) {
            const SystemConfig w = parse_system(to_json_text(*cfg.walk));
            REQUIRE(w.walk.has_value());
            CHECK(*w.walk == *cfg.walk);
        }
    }
}

TEST_CASE("fixture contents")
{
    CHECK(load_fixture("walsh2").kind == ConfigKind::Walsh);
    CHECK(load_fixture("l2q").kind == ConfigKind::L2Q);
    CHECK(load_fixture("noninjective_walk").kind == ConfigKind::Walk);
    const SystemConfig planar = load_fixture("twocycle_planar");
    CHECK(planar.kind == ConfigKind::Filter);
    REQUIRE(planar.candidate_sets.size() == 2);
    CHECK(planar.candidate_sets[1].size() == 2);
    const SystemConfig two = load_fixture("twocycle");
    REQUIRE(two.filter->alpha().has_value());
    CHECK(std::abs((*two.filter->alpha())[1] - Complex(0.5, 0.5)) < 1e-15);
}

TEST_CASE("accepted shorthands")
{
    const auto cfg = parse_system(R"({"R": 4, "B": [0, 2], "l": [0, 1], "alpha": [1, "1"]})");
    REQUIRE(cfg.filter.has_value());
    CHECK(cfg.filter->dim() == 1);
    CHECK(cfg.filter->coefficients()(1, 1) == Complex(1.0));

    const auto walk = parse_system(
        R"({"kind": "walk", "vertices": ["a", "b"], "edges": [["b", "a"]], "weights": [[1, [0, 1]]]})");
    REQUIRE(walk.walk.has_value());
    CHECK(walk.walk->target(0, 0) == 1);
    CHECK(walk.walk->weight(0, 1) == Complex(0.0, 1.0));
}

TEST_CASE("input errors name the field")
{
    CHECK(contains(error_of(R"({"R": [[1]], "B": [[0], [1]], "l": [[0], [1]], "alpha": [1, 1]})"), "not expansive"));
    CHECK(contains(error_of(R"({"R": [[1]], "B": [[0], [1]], "l": [[0], [1]], "alpha": [1, 1]})"), "field 'R'"));
    CHECK(contains(error_of(R"({"R": 4, "B": [0, 2], "l": [0, 1], "a": [[1, 1], [1]]})"), "field 'a[1]'"));
    CHECK(contains(error_of(R"({"R": 4, "B": [0, 2], "l": [0, 1], "a": [[1, 1]]})"), "field 'a'"));
    CHECK(contains(error_of(R"({"R": 4, "B": [0, "x"], "l": [0, 1], "alpha": [1, 1]})"), "field 'B[1]'"));
    CHECK(contains(error_of(R"({"R": 4, "B": [0, 2], "l": [0, 1]})"), "exactly one of 'a' and 'alpha'"));
    CHECK(contains(error_of(R"({"R": 4, "l": [0, 1], "alpha": [1, 1]})"), "field 'B': missing"));
    CHECK(contains(error_of(R"({"R": [[4, 0], [0]], "B": [0, 2], "l": [0, 1], "alpha": [1, 1]})"), "square"));
    CHECK(contains(error_of(R"({"R": 4, "B": [0, 2], "l": [0, 1], "alpha": [1, [1, 2, 3]]})"), "alpha[1]"));
    CHECK(contains(error_of(R"({"kind": "spline"})"), "field 'kind'"));
    CHECK(contains(error_of(R"({"kind": "walk", "vertices": ["a"], "edges": [["z"]], "weights": [[1]]})"),
                   "unknown vertex"));

    const std::string malformed = error_of("{\n  \"R\": 4,\n  \"B\": [0, 2\n}");
    CHECK(contains(malformed, "test.json: malformed JSON"));
    CHECK(contains(malformed, "line 4"));

    CHECK_THROWS_AS(load_system("/nonexistent/system.json"), InputError);
}
