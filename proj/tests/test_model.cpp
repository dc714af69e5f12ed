#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cuntz/error.hpp"
#include "cuntz/model.hpp"
#include "support.hpp"

using namespace cuntz;
using namespace cuntz::test;

namespace {

IFSSpec ifs_1d(std::int64_t r, std::vector<std::int64_t> digits)
{
    std::vector<IntVector> b;
    for (auto d : digits)
        b.push_back({d});
    return IFSSpec(IntMatrix::from_rows({{r}}), b);
}

std::vector<IntVector> column(std::vector<std::int64_t> values)
{
    std::vector<IntVector> out;
    for (auto v : values)
        out.push_back({v});
    return out;
}

// prod_k m_B((R^T)^{-k} xi) with every contraction step done in exact rationals.
Complex mu_hat_oracle(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth)
{
    Complex prod = 1.0;
    RationalPoint x = xi;
    for (std::size_t k = 0; k < depth; ++k) {
        x = fs.ifs().dual_contraction().apply(x);
        Complex sum = 0.0;
        for (const auto& b : fs.ifs().digits())
            sum += unit_phase(dot(b, x));
        prod *= sum / static_cast<double>(fs.digit_count());
    }
    return prod;
}

} // namespace

TEST_CASE("IFS validation")
{
    CHECK_THROWS_AS(IFSSpec(IntMatrix::from_rows({{1}}), column({0, 1})), InputError);
    CHECK_THROWS_AS(IFSSpec(IntMatrix::from_rows({{1, 0}, {0, 3}}), {{0, 0}, {1, 0}}), InputError);
    CHECK_THROWS_AS(IFSSpec(IntMatrix::from_rows({{4}}), column({1, 2})), InputError);
    CHECK_THROWS_AS(IFSSpec(IntMatrix::from_rows({{4}}), column({0, 2, 2})), InputError);
    CHECK(is_expansive(IntMatrix::from_rows({{4, 0}, {1, 4}})));
    CHECK_FALSE(is_expansive(IntMatrix::from_rows({{2, 0}, {0, 1}})));
    CHECK(is_expansive(IntMatrix::from_rows({{-3}})));
}

TEST_CASE("dual contraction as integer numerators over a common denominator")
{
    const FilterSystem fs = load_filter("invariant_line");
    const auto& ifs = fs.ifs();
    CHECK(ifs.dual_contraction()(0, 0) == Rational(1, 4));
    CHECK(ifs.dual_contraction()(0, 1) == Rational(-1, 16));
    CHECK(ifs.dual_contraction()(1, 0) == 0);
    CHECK(ifs.dual_contraction()(1, 1) == Rational(1, 4));
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(Rational(ifs.dual_numerators()(r, c), ifs.dual_denominator()) == ifs.dual_contraction()(r, c));
}

TEST_CASE("filter matrix classification")
{
    SUBCASE("planar two-cycle system is unitary")
    {
        const FilterSystem fs = load_filter("twocycle_planar");
        const auto chk = check_filter_matrix(fs);
        CHECK(chk.kind == FilterMatrixKind::Unitary);
        CHECK(chk.max_column_defect < 1e-10);
        CHECK(chk.max_row_defect < 1e-10);
    }
    SUBCASE("2x2 mu_4 case is unitary")
    {
        const FilterSystem fs = load_filter("mu4");
        CHECK(check_filter_matrix(fs).kind == FilterMatrixKind::Unitary);
        // (1/sqrt 2) e^{2 pi i b l / 4} by hand: b in {0, 2}, l in {0, 1}
        const Eigen::MatrixXcd f = filter_matrix(fs);
        const double s = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(f(0, 0) - Complex(s, 0)) < 1e-15);
        CHECK(std::abs(f(0, 1) - Complex(s, 0)) < 1e-15);
        CHECK(std::abs(f(1, 0) - Complex(s, 0)) < 1e-15);
        CHECK(std::abs(f(1, 1) - Complex(-s, 0)) < 1e-15);
    }
    SUBCASE("column scaled by 2 is invalid with defect 3")
    {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Ones(2, 2);
        a.col(1) *= 2.0;
        const FilterSystem fs(ifs_1d(4, {0, 2}), column({0, 1}), a);
        const auto chk = check_filter_matrix(fs);
        CHECK(chk.kind == FilterMatrixKind::Invalid);
        CHECK(chk.max_column_defect == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("three filters over two digits form an isometry")
    {
        const FilterSystem fs = load_filter("walsh3x2");
        CHECK(check_filter_matrix(fs).kind == FilterMatrixKind::Isometry);
    }
}

TEST_CASE("m_B values")
{
    const auto digits = column({0, 2});
    CHECK(std::abs(eval_mB(digits, pt("0")) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(eval_mB(digits, pt("1/4"))) < 1e-15);
    CHECK(std::abs(eval_mB(digits, pt("-1")) - Complex(1.0)) < 1e-15);
    CHECK(is_integral_for_digits(digits, pt("-1/2")));
    CHECK_FALSE(is_integral_for_digits(digits, pt("1/4")));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 200; ++k) {
        const std::vector<double> t{u(rng)};
        CHECK(std::abs(eval_mB(digits, t)) <= 1.0 + 1e-15);
    }
}

TEST_CASE("spectral transitions")
{
    SUBCASE("planar two-cycle system at (-1, 0)")
    {
        const FilterSystem fs = load_filter("twocycle_planar");
        const auto tr = spectral_transition(fs, pt("(-1, 0)"));
        REQUIRE(tr.size() == 4);
        CHECK(std::abs(tr[0].weight) < 1e-12);
        CHECK(std::abs(tr[2].weight) < 1e-12);
        CHECK(std::norm(tr[1].weight) + std::norm(tr[3].weight) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(tr[1].weight - std::conj(Complex(0.5, 0.5))) < 1e-12);
        CHECK(std::abs(tr[3].weight - std::conj(Complex(0.5, -0.5))) < 1e-12);
        CHECK(tr[1].target == pt("(-1, 0)"));
        CHECK(tr[3].target == pt("(-4, 0)"));
    }
    SUBCASE("mu_4 at 0")
    {
        const FilterSystem fs = load_filter("mu4");
        const auto tr = spectral_transition(fs, pt("0"));
        CHECK(tr[0].target == pt("0"));
        CHECK(std::abs(tr[0].weight - Complex(1.0)) < 1e-15);
        CHECK(std::abs(tr[1].weight) < 1e-15);
        CHECK(tr[1].target == pt("-1/4"));
    }
    SUBCASE("rows are normalized at random points")
    {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> num(-300, 300), den(1, 60);
        for (const char* name : {"mu4", "mu4_l03", "twocycle", "twocycle_planar", "invariant_line", "walsh2", "walsh3x2"}) {
            const FilterSystem fs = load_filter(name);
            for (int k = 0; k < 200; ++k) {
                std::vector<Rational> coords;
                for (std::size_t d = 0; d < fs.dim(); ++d)
                    coords.emplace_back(num(rng), den(rng));
                double total = 0.0;
                for (const auto& t : spectral_transition(fs, RationalPoint(coords)))
                    total += std::norm(t.weight);
                CHECK(std::abs(total - 1.0) < 1e-10);
            }
        }
    }
}

TEST_CASE("mu_hat")
{
    const FilterSystem mu4 = load_filter("mu4");
    CHECK(mu_hat(mu4, pt("0"), 0) == Complex(1.0));
    CHECK(mu_hat(mu4, pt("0"), 40) == Complex(1.0));
    CHECK(mu_hat(mu4, pt("0"), 7) == Complex(1.0));

    SUBCASE("orthogonality of the mu_4 spectrum up to length 3")
    {
        std::vector<std::int64_t> spectrum;
        for (int bits = 0; bits < 8; ++bits)
            spectrum.push_back((bits & 1) + 4 * ((bits >> 1) & 1) + 16 * ((bits >> 2) & 1));
        for (auto a : spectrum)
            for (auto b : spectrum) {
                const Complex v = mu_hat(mu4, RationalPoint({Rational(a - b)}), 40);
                if (a == b)
                    CHECK(std::abs(v - Complex(1.0)) < 1e-15);
                else
                    CHECK(std::abs(v) < 1e-8);
            }
    }
    SUBCASE("agrees with an exact-rational product")
    {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<int> num(-5000, 5000), den(1, 97);
        for (const char* name : {"mu4", "twocycle", "invariant_line", "twocycle_planar"}) {
            const FilterSystem fs = load_filter(name);
            for (int k = 0; k < 100; ++k) {
                std::vector<Rational> coords;
                for (std::size_t d = 0; d < fs.dim(); ++d)
                    coords.emplace_back(num(rng), den(rng));
                const RationalPoint xi(coords);
                CHECK(std::abs(mu_hat(fs, xi, 40) - mu_hat_oracle(fs, xi, 40)) < 1e-12);
            }
        }
    }
    SUBCASE("huge denominators use the rational path")
    {
        const RationalPoint xi({Rational(BigInt(1) << 70, BigInt(3))});
        CHECK(std::abs(mu_hat(mu4, xi, 40) - mu_hat_oracle(mu4, xi, 40)) < 1e-9);
    }
    SUBCASE("truncation tail shrinks with depth")
    {
        const RationalPoint xi = pt("37/3");
        const auto e20 = mu_hat_estimate(mu4, xi, 20);
        const auto e40 = mu_hat_estimate(mu4, xi, 40);
        CHECK(e40.last_factor_deviation < e20.last_factor_deviation);
        CHECK(std::abs(e20.value - mu_hat(mu4, xi, 30)) < 1e-9);
        CHECK(std::abs(e40.value - mu_hat(mu4, xi, 50)) < 1e-20);
        CHECK(std::abs(e40.value) <= 1.0);
    }
}

TEST_CASE("no-overlap congruence test")
{
    CHECK(check_no_overlap(FilterSystem::from_alpha(ifs_1d(4, {0, 2}), column({0, 1}), std::vector<Complex>{1, 1})));
    CHECK_FALSE(check_no_overlap(FilterSystem::from_alpha(ifs_1d(2, {0, 2}), column({0, 1}), std::vector<Complex>{1, 1})));
    CHECK(check_no_overlap(load_filter("invariant_line")));
    CHECK(check_no_overlap(load_filter("twocycle_planar")));
}
