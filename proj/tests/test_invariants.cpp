#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>
#include <set>

#include "cuntz/error.hpp"
#include "cuntz/invariants.hpp"
#include "support.hpp"

using namespace cuntz;
using namespace cuntz::test;

namespace {

std::vector<std::string> as_strings(const MinimalSet& s)
{
    std::vector<std::string> out;
    for (const auto& p : s.points)
        out.push_back(p.to_string());
    return out;
}

FilterSystem system_1d(std::int64_t r, std::vector<std::int64_t> digits, std::vector<std::int64_t> freqs,
                       std::vector<Complex> alpha)
{
    std::vector<IntVector> b, l;
    for (auto d : digits)
        b.push_back({d});
    for (auto f : freqs)
        l.push_back({f});
    return FilterSystem::from_alpha(IFSSpec(IntMatrix::from_rows({{r}}), b), l, alpha);
}

// Closure under possible transitions by breadth-first search; empty when it exceeds the cap.
std::set<RationalPoint> closure(const FilterSystem& fs, const RationalPoint& t, std::size_t cap = 300)
{
    std::set<RationalPoint> seen{t};
    std::deque<RationalPoint> todo{t};
    while (!todo.empty()) {
        const RationalPoint p = todo.front();
        todo.pop_front();
        for (const auto& tr : spectral_transition(fs, p))
            if (std::abs(tr.weight) > 1e-9 && seen.insert(tr.target).second) {
                if (seen.size() > cap)
                    return {};
                todo.push_back(tr.target);
            }
    }
    return seen;
}

// Minimal sets met by lattice points k/g with |k/g| <= bound: closures equal to the closure of each member.
std::set<std::set<RationalPoint>> minimal_sets_oracle(const FilterSystem& fs, std::int64_t g, std::int64_t bound)
{
    std::set<std::set<RationalPoint>> out;
    for (std::int64_t k = -bound * g; k <= bound * g; ++k) {
        const auto c = closure(fs, RationalPoint({Rational(k, g)}));
        if (c.empty())
            continue;
        bool minimal = true;
        for (const auto& p : c)
            if (closure(fs, p) != c) {
                minimal = false;
                break;
            }
        if (minimal)
            out.insert(c);
    }
    return out;
}

std::set<std::set<RationalPoint>> as_set(const std::vector<MinimalSet>& sets)
{
    std::set<std::set<RationalPoint>> out;
    for (const auto& s : sets)
        out.insert(std::set<RationalPoint>(s.points.begin(), s.points.end()));
    return out;
}

} // namespace

TEST_CASE("minimal sets in dimension one")
{
    SUBCASE("two-cycle system")
    {
        const auto sets = find_minimal_sets_1d(load_filter("twocycle"));
        REQUIRE(sets.size() == 2);
        CHECK(as_strings(sets[0]) == std::vector<std::string>{"0"});
        CHECK(as_strings(sets[1]) == std::vector<std::string>{"-4", "-1"});
    }
    SUBCASE("mu_4")
    {
        const auto sets = find_minimal_sets_1d(load_filter("mu4"));
        REQUIRE(sets.size() == 1);
        CHECK(as_strings(sets[0]) == std::vector<std::string>{"0"});
    }
    SUBCASE("L = {0, 3}")
    {
        const auto sets = find_minimal_sets_1d(load_filter("mu4_l03"));
        REQUIRE(sets.size() == 2);
        CHECK(as_strings(sets[0]) == std::vector<std::string>{"0"});
        CHECK(as_strings(sets[1]) == std::vector<std::string>{"-1"});
    }
    SUBCASE("b-dependent coefficients are refused")
    {
        CHECK_THROWS_AS(find_minimal_sets_1d(load_filter("walsh3x2")), PreconditionError);
    }
}

TEST_CASE("minimal sets against a brute-force lattice scan")
{
    const std::vector<FilterSystem> systems{
        load_filter("twocycle"),
        load_filter("mu4"),
        load_filter("mu4_l03"),
        system_1d(4, {0, 2}, {0, 5}, {1, 1}),
        system_1d(4, {0, 2}, {0, -3}, {1, 1}),
        system_1d(-4, {0, 2}, {0, 3}, {1, 1}),
        system_1d(6, {0, 2, 4}, {0, 1, 2}, {1, 1, 1}),
        system_1d(3, {0, 1, 2}, {0, 4, 8}, {1, 1, 1}),
    };
    for (const auto& fs : systems) {
        const auto sets = find_minimal_sets_1d(fs);
        std::int64_t g = 0;
        for (const auto& b : fs.ifs().digits())
            g = std::gcd(g, b[0]);
        CHECK(as_set(sets) == minimal_sets_oracle(fs, g, 12));

        std::set<RationalPoint> seen;
        for (const auto& s : sets) {
            const auto chk = verify_invariant(fs, s.points);
            CHECK(chk.invariant);
            CHECK(chk.minimal);
            CHECK(chk.extreme);
            for (const auto& p : s.points) {
                CHECK(seen.insert(p).second);
                CHECK(is_integral_for_digits(fs.ifs().digits(), p));
                CHECK(std::abs(std::abs(eval_mB(fs.ifs().digits(), p)) - 1.0) < 1e-12);
            }
            const WalkGraph w = walk_from_minimal_set(fs, s);
            const auto r = analyze(w);
            CHECK(r.normalized);
            CHECK(r.irreducible);
            if (r.injective) {
                CHECK(r.separating);
                CHECK(r.simple);
            }
        }
    }
}

TEST_CASE("verify_invariant on the planar two-cycle system")
{
    const FilterSystem fs = load_filter("twocycle_planar");
    const auto pair = verify_invariant(fs, {pt("(-4, 0)"), pt("(-1, 0)")});
    CHECK(pair.invariant);
    CHECK(pair.minimal);
    CHECK(pair.extreme);
    const auto zero = verify_invariant(fs, {pt("(0, 0)")});
    CHECK(zero.invariant);
    CHECK(zero.minimal);
    CHECK(zero.extreme);

    const auto lone = verify_invariant(fs, {pt("(-4, 0)")});
    CHECK_FALSE(lone.invariant);
    REQUIRE(lone.escapes.size() == 1);
    CHECK(lone.escapes[0].letter == 0);
    CHECK(lone.escapes[0].target == pt("(-1, 0)"));
    CHECK(std::abs(std::abs(lone.escapes[0].weight) - 1.0) < 1e-12);

    const auto union_ = verify_invariant(fs, {pt("(0, 0)"), pt("(-1, 0)"), pt("(-4, 0)")});
    CHECK(union_.invariant);
    CHECK_FALSE(union_.minimal);

    const auto half = verify_invariant(load_filter("twocycle"), {pt("-1/4")});
    CHECK_FALSE(half.extreme);
}

TEST_CASE("orbit closure")
{
    const FilterSystem fs = load_filter("twocycle");
    const auto orbit = orbit_closure(fs, pt("-1"));
    CHECK(orbit == std::vector<RationalPoint>{pt("-4"), pt("-1")});
    CHECK_THROWS_AS(orbit_closure(fs, pt("-5"), 1), PreconditionError);
}

TEST_CASE("invariant line y = -2/3")
{
    const SystemConfig cfg = load_fixture("invariant_line");
    const FilterSystem& fs = *cfg.filter;
    const AffineLine line{pt("(0, -2/3)"), pt("(1, 0)")};
    const auto rep = sample_line_invariance(fs, line, Rational(-4, 9), Rational(2, 9), 100);
    CHECK(rep.samples == 100);
    CHECK(rep.stays_on_line());
    CHECK(rep.letters == std::vector<int>{2, 3});
    REQUIRE(rep.maps.size() == 2);
    CHECK(rep.maps[0].slope == Rational(1, 4));
    CHECK(rep.maps[0].offset == Rational(1, 6));
    CHECK(rep.maps[1].slope == Rational(1, 4));
    CHECK(rep.maps[1].offset == Rational(-1, 3));
    for (int letter : {0, 1})
        for (const char* x : {"0", "1/7", "-3/5", "11"}) {
            const RationalPoint p({parse_rational(x), Rational(-2, 3)});
            CHECK(std::abs(spectral_transition(fs, p)[static_cast<std::size_t>(letter)].weight) < 1e-12);
        }

    REQUIRE(cfg.lines.size() == 1);
    CHECK(cfg.lines[0].samples == 100);

    const auto other = sample_line_invariance(fs, AffineLine{pt("(0, 0)"), pt("(1, 0)")}, Rational(-1), Rational(1), 50);
    CHECK(other.letters != rep.letters);

    const auto empty = sample_line_invariance(fs, line, Rational(0), Rational(1), 0);
    CHECK(empty.samples == 0);
    CHECK(empty.letters.empty());
    CHECK(empty.escapes.empty());
}

TEST_CASE("Ruelle operator")
{
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> num(-500, 500), den(1, 97);
    for (const char* name : {"mu4", "twocycle", "invariant_line", "twocycle_planar"}) {
        const FilterSystem fs = load_filter(name);
        std::vector<RationalPoint> points;
        for (int k = 0; k < 1000; ++k) {
            std::vector<Rational> coords;
            for (std::size_t d = 0; d < fs.dim(); ++d)
                coords.emplace_back(num(rng), den(rng));
            points.emplace_back(coords);
        }
        CHECK(ruelle_check(fs, points) < 1e-12);
    }
    const FilterSystem two = load_filter("twocycle");
    CHECK(ruelle_check(two, orbit_closure(two, pt("-1"))) < 1e-12);

    const FilterSystem mu4 = load_filter("mu4");
    const auto indicator = [](const RationalPoint& p) { return p.is_zero() ? Complex(1.0) : Complex(0.0); };
    CHECK(std::abs(apply_ruelle(mu4, indicator, pt("0")) - Complex(1.0)) < 1e-15);
}

TEST_CASE("walks from minimal sets")
{
    const FilterSystem l03 = load_filter("mu4_l03");
    const WalkGraph g = walk_from_minimal_set(l03, MinimalSet{{pt("-1")}});
    REQUIRE(g.vertex_count() == 1);
    CHECK(std::abs(g.weight(1, 0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(g.weight(0, 0)) < 1e-12);
    CHECK(g.reversing() == std::optional<bool>(true));

    const FilterSystem mu4 = load_filter("mu4");
    const WalkGraph h = walk_from_minimal_set(mu4, MinimalSet{{pt("0")}});
    REQUIRE(h.vertex_count() == 1);
    CHECK(std::abs(h.weight(0, 0) - Complex(1.0)) < 1e-12);

    const FilterSystem two = load_filter("twocycle");
    const WalkGraph w = walk_from_minimal_set(two, MinimalSet{{pt("-4"), pt("-1")}});
    const std::size_t c = vertex(w, pt("-1"));
    std::set<std::string> cycles;
    for (const auto& cw : enumerate_cycle_words(w, c, 4))
        cycles.insert(cw.word.to_string());
    CHECK(cycles == std::set<std::string>{"1", "30"});
    CHECK(w.vertex(c).id == "-1");
}
