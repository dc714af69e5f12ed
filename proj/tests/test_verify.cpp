#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cuntz/error.hpp"
#include "cuntz/frames.hpp"
#include "cuntz/verify.hpp"
#include "support.hpp"

using namespace cuntz;
using namespace cuntz::test;

namespace {

StepFunction random_step(std::mt19937_64& rng, std::size_t base, std::size_t level)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t cells = 1;
    for (std::size_t k = 0; k < level; ++k)
        cells *= base;
    std::vector<Complex> v(cells);
    for (auto& x : v)
        x = {u(rng), u(rng)};
    return StepFunction(base, level, v);
}

std::vector<FourierAtom> atoms_at(const FilterSystem& fs, const char* base, std::size_t lmax)
{
    const RationalPoint c = pt(base);
    const WalkGraph g = walk_through(fs, c);
    return frame_atoms(fs, g, vertex(g, c), lmax);
}

} // namespace

TEST_CASE("Gram matrices of Fourier atoms")
{
    const FilterSystem mu4 = load_filter("mu4");
    auto atoms = atoms_at(mu4, "0", 6);
    REQUIRE(atoms.size() == 64);

    const auto g40 = gram(mu4, atoms, 40);
    CHECK(g40.size == 64);
    CHECK(g40.depth == 40);
    CHECK(g40.max_off_diagonal < 1e-8);
    CHECK(g40.max_diagonal_defect < 1e-8);
    CHECK(gram(mu4, atoms, 15).max_deviation() < 1e-4);

    // entries against <e_a, e_b> = mu_hat(a - b)
    for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t k = 0; k < 10; ++k) {
            const Complex expected =
                atoms[j].weight * std::conj(atoms[k].weight) * mu_hat(mu4, atoms[j].label - atoms[k].label, 40);
            CHECK(std::abs(g40.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) - expected) < 1e-15);
        }
    CHECK((g40.matrix - g40.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

    const auto single = gram(mu4, {atoms[5]}, 40);
    CHECK(single.size == 1);
    CHECK(std::abs(single.matrix(0, 0) - Complex(1.0)) < 1e-15);

    SUBCASE("two basepoints of the L = {0, 3} system together")
    {
        const FilterSystem l03 = load_filter("mu4_l03");
        auto both = atoms_at(l03, "-1", 5);
        const auto zero = atoms_at(l03, "0", 5);
        both.insert(both.end(), zero.begin(), zero.end());
        const auto rep = gram(l03, both, 40);
        CHECK(rep.max_deviation() < 1e-8);
    }
}

TEST_CASE("Parseval profiles")
{
    const FilterSystem mu4 = load_filter("mu4");
    const WalkGraph g = walk_through(mu4, pt("0"));

    SUBCASE("an atom's own frequency")
    {
        // label 5 = 1 + 4 * 1 comes from the word "11"
        const auto p = parseval_profile(mu4, g, 0, pt("5"), 6, 40);
        CHECK(p.sums[0] < 1e-12);
        CHECK(p.sums[1] < 1e-12);
        for (std::size_t n = 2; n <= 6; ++n)
            CHECK(p.sums[n] == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("generic frequency is monotone and Bessel")
    {
        const auto p = parseval_profile(mu4, g, 0, pt("1/3"), 10, 40);
        CHECK(p.sums.size() == 11);
        CHECK(p.monotone);
        CHECK(p.bessel);
        for (std::size_t n = 1; n < p.sums.size(); ++n)
            CHECK(p.sums[n] >= p.sums[n - 1] - 1e-15);
        CHECK(p.sums.back() <= 1.0 + 1e-8);
        CHECK(p.depth == 40);
        CHECK(p.max_tail_deviation < 1e-12);
    }
    SUBCASE("overload building the walk from the basepoint")
    {
        const FilterSystem two = load_filter("twocycle");
        const auto p = parseval_profile(two, pt("-1"), pt("7/5"), 8);
        CHECK(p.monotone);
        CHECK(p.bessel);
    }
    SUBCASE("Walsh profile reaches the norm at the level of f")
    {
        std::mt19937_64 rng(43);
        const Eigen::MatrixXcd h = load_filter("walsh2").coefficients();
        const StepFunction f = random_step(rng, 2, 4);
        const auto p = walsh_parseval_profile(h, f, 6);
        CHECK(p.target == doctest::Approx(f.norm2()));
        CHECK(p.monotone);
        CHECK(p.bessel);
        CHECK(p.sums[3] < p.target - 1e-6);
        for (std::size_t n = 4; n <= 6; ++n)
            CHECK(std::abs(p.sums[n] - p.target) < 1e-12);
        CHECK_THROWS_AS(walsh_parseval_profile(h, f, 3), PreconditionError);
    }
}

TEST_CASE("exact Walsh Parseval identity")
{
    std::mt19937_64 rng(47);
    const Eigen::MatrixXcd h = load_filter("walsh2").coefficients();
    const Eigen::MatrixXcd iso = load_filter("walsh3x2").coefficients();
    CHECK(walsh_parseval_exact(h, 0, StepFunction::constant(2)) < 1e-15);
    CHECK(walsh_parseval_exact(h, 3, StepFunction::constant(2)) < 1e-15);
    for (int k = 0; k < 100; ++k)
        CHECK(walsh_parseval_exact(h, 6, random_step(rng, 2, 6)) < 1e-10);
    for (int k = 0; k < 100; ++k)
        CHECK(walsh_parseval_exact(iso, 5, random_step(rng, 2, 5)) < 1e-10);
}

TEST_CASE("frame bounds")
{
    SUBCASE("mu_4 atoms tested on their own labels")
    {
        const FilterSystem mu4 = load_filter("mu4");
        const auto atoms = atoms_at(mu4, "0", 6);
        std::vector<RationalPoint> tests;
        for (std::size_t k = 0; k < 8; ++k)
            tests.push_back(atoms[k].label);
        const auto b = frame_bounds(mu4, atoms, tests, 40);
        CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-8));
        CHECK_THROWS_AS(frame_bounds(mu4, atoms, {}, 40), InputError);
    }
    SUBCASE("Walsh level 4")
    {
        std::mt19937_64 rng(53);
        const Eigen::MatrixXcd h = load_filter("walsh2").coefficients();
        std::vector<StepFunction> tests;
        for (int k = 0; k < 10; ++k)
            tests.push_back(random_step(rng, 2, 4));
        const auto b = frame_bounds(walsh_atoms(h, 4), tests);
        CHECK(std::abs(b.lower - 1.0) < 1e-10);
        CHECK(std::abs(b.upper - 1.0) < 1e-10);
    }
    SUBCASE("l2(Q) family is not a frame")
    {
        const auto b = l2q_frame_bounds(10);
        REQUIRE(b.ratios.size() == 10);
        for (unsigned m = 1; m <= 10; ++m)
            CHECK(std::abs(b.ratios[m - 1] - std::pow(0.5, m + 1)) < 1e-12);
        for (std::size_t k = 1; k < b.ratios.size(); ++k)
            CHECK(b.ratios[k] < b.ratios[k - 1]);
        CHECK(b.lower <= std::pow(0.5, 11) + 1e-15);
    }
}

TEST_CASE("incompleteness check")
{
    const FilterSystem two = load_filter("twocycle");
    const WalkGraph g = walk_through(two, pt("-1"));
    const auto rep = incompleteness_check(g, vertex(g, pt("-1")));
    CHECK(rep.multi_cycle);
    CHECK_FALSE(rep.single_cycle);
    REQUIRE(rep.branching_vertex.has_value());
    CHECK(g.vertex(*rep.branching_vertex).id == "-1");
    CHECK(rep.branching_letters == std::vector<int>{1, 3});
    CHECK_FALSE(rep.verdict.empty());

    const auto loop = incompleteness_check(single_vertex(2, 0), 0);
    CHECK(loop.single_cycle);
    CHECK_FALSE(loop.multi_cycle);

    const WalkGraph mc = *load_fixture("noninjective_walk").walk;
    CHECK(incompleteness_check(mc, 0).multi_cycle);
}

TEST_CASE("reversing identity on the L = {0, 3} system")
{
    const FilterSystem fs = load_filter("mu4_l03");
    const RationalPoint c = pt("-1");
    const WalkGraph g = walk_through(fs, c);
    const std::size_t v = vertex(g, c);
    CHECK(analyze(g).reversing == std::optional<bool>(true));
    const auto cycles = enumerate_cycle_words(g, v, 3);
    REQUIRE_FALSE(cycles.empty());
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> num(-200, 200), den(1, 30);
    for (const auto& w0 : enumerate_frame_words(g, v, 3))
        for (const auto& beta : cycles) {
            const auto atoms = fourier_atoms(fs, c, {w0, w0 + beta.word});
            for (int k = 0; k < 5; ++k) {
                const RationalPoint t({Rational(num(rng), den(rng))});
                const double lhs = std::abs(fourier_pairing(fs, atoms[1], t));
                const double rhs = std::abs(beta.weight) * std::abs(fourier_pairing(fs, atoms[0], t));
                CHECK(std::abs(lhs - rhs) < 1e-8);
            }
        }
}

TEST_CASE("unitary filter matrices give orthonormal Walsh atoms")
{
    const FilterSystem fs = load_filter("walsh2");
    REQUIRE(check_filter_matrix(fs).kind == FilterMatrixKind::Unitary);
    std::vector<StepFunction> fns;
    for (auto& a : walsh_atoms(fs.coefficients(), 6))
        fns.push_back(a.function);
    const auto rep = gram(fns);
    CHECK(rep.size == 64);
    CHECK(rep.depth == 0);
    CHECK(rep.max_deviation() < 1e-12);
}
