#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "cuntz/error.hpp"
#include "cuntz/walkgraph.hpp"
#include "cuntz/word.hpp"
#include "support.hpp"

using namespace cuntz;
using namespace cuntz::test;

namespace {

std::set<std::string> words_of(const std::vector<CycleWord>& cw)
{
    std::set<std::string> out;
    for (const auto& c : cw)
        out.insert(c.word.to_string());
    return out;
}

std::vector<std::string> strings(const std::vector<Word>& words)
{
    std::vector<std::string> out;
    for (const auto& w : words)
        out.push_back(w.to_string());
    return out;
}

// Kernel dimension of T -> sum_i nu_i(c') conj(nu_i(c)) T_{g_i c, g_i c'} - T_{c,c'} on vec(T).
std::size_t sigma_fixed_oracle(const WalkGraph& g)
{
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    Eigen::MatrixXcd map = -Eigen::MatrixXcd::Identity(n * n, n * n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index d = 0; d < n; ++d)
            for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
                const int letter = static_cast<int>(i);
                const auto gc = static_cast<Eigen::Index>(g.target(letter, static_cast<std::size_t>(c)));
                const auto gd = static_cast<Eigen::Index>(g.target(letter, static_cast<std::size_t>(d)));
                map(c * n + d, gc * n + gd) +=
                    g.weight(letter, static_cast<std::size_t>(d)) * std::conj(g.weight(letter, static_cast<std::size_t>(c)));
            }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(map);
    const auto& s = svd.singularValues();
    std::size_t nullity = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) < 1e-8 * std::max(1.0, s(0)))
            ++nullity;
    return nullity;
}

// Sum of |nu_w(t)|^2 over all words of length <= lmax whose path hits c first at its end.
double first_passage_oracle(const WalkGraph& g, std::size_t t, std::size_t c, std::size_t lmax)
{
    double total = 0.0;
    for_each_word(g.alphabet_size(), lmax, [&](const Word& w) {
        if (w.empty())
            return;
        std::size_t v = t;
        Complex weight = 1.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            weight *= g.weight(w[k], v);
            v = g.target(w[k], v);
            if (v == c && k + 1 < w.size())
                return;
        }
        if (v == c && std::abs(weight) > 1e-9)
            total += std::norm(weight);
    });
    return total;
}

WalkGraph random_walk(std::mt19937_64& rng, std::size_t n, std::size_t letters, double p)
{
    std::uniform_int_distribution<std::size_t> vertex(0, n - 1);
    std::uniform_int_distribution<std::size_t> letter(0, letters - 1);
    std::normal_distribution<double> gauss;
    std::bernoulli_distribution keep(p);
    std::vector<WalkVertex> vertices;
    for (std::size_t c = 0; c < n; ++c)
        vertices.push_back({std::to_string(c), std::nullopt});
    std::vector<std::vector<std::size_t>> targets(letters, std::vector<std::size_t>(n));
    std::vector<std::vector<Complex>> weights(letters, std::vector<Complex>(n));
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t forced = letter(rng);
        double total = 0.0;
        for (std::size_t i = 0; i < letters; ++i) {
            targets[i][c] = vertex(rng);
            if (i == forced || keep(rng)) {
                weights[i][c] = {gauss(rng), gauss(rng)};
                total += std::norm(weights[i][c]);
            }
        }
        for (std::size_t i = 0; i < letters; ++i)
            weights[i][c] /= std::sqrt(total);
    }
    return WalkGraph(vertices, targets, weights);
}

// Number of ways to write w = head b1 ... bn with cycle words b_k and head not ending in one.
std::size_t factorizations(const Word& w, const std::set<std::string>& cycles)
{
    std::size_t count = 0;
    bool ends_in_cycle = false;
    for (std::size_t len = 1; len <= w.size(); ++len)
        if (cycles.count(w.suffix(len).to_string())) {
            ends_in_cycle = true;
            count += factorizations(w.prefix(w.size() - len), cycles);
        }
    return count + (ends_in_cycle ? 0 : 1);
}

} // namespace

TEST_CASE("non-injective 2x2 walk")
{
    const WalkGraph g = *load_fixture("noninjective_walk").walk;
    const auto r = analyze(g);
    CHECK(r.normalized);
    CHECK(r.irreducible);
    CHECK_FALSE(r.injective);
    CHECK_FALSE(r.separating);
    CHECK(r.sigma_fixed_dim == 1);
    CHECK(r.simple);
    CHECK_FALSE(r.reversing.has_value());
    CHECK(sigma_fixed_oracle(g) == 1);

    const std::size_t one = vertex(g, std::string("1"));
    CHECK(words_of(enumerate_cycle_words(g, one, 2)) == std::set<std::string>{"0", "10"});
    CHECK_THROWS_AS(ends_in_cycle_word(g, one, Word::parse("1010")), PreconditionError);
    CHECK_THROWS_AS(enumerate_frame_words(g, one, 3), PreconditionError);
}

TEST_CASE("single vertex self-loop")
{
    const WalkGraph g = single_vertex(2, 0);
    const auto r = analyze(g);
    CHECK(r.irreducible);
    CHECK(r.injective);
    CHECK(r.separating);
    CHECK(r.simple);
    CHECK(words_of(enumerate_cycle_words(g, 0, 4)) == std::set<std::string>{"0"});
    CHECK(strings(enumerate_frame_words(g, 0, 2)) == std::vector<std::string>{"", "1", "01", "11"});
    CHECK(strings(enumerate_frame_words(g, 0, 0)) == std::vector<std::string>{""});
    CHECK_FALSE(ends_in_cycle_word(g, 0, Word{}));
}

TEST_CASE("two-cycle walk on {-4, -1}")
{
    const FilterSystem fs = load_filter("twocycle");
    const WalkGraph g = walk_through(fs, pt("-1"));
    const std::size_t c = vertex(g, pt("-1"));
    REQUIRE(g.vertex_count() == 2);

    const auto r = analyze(g);
    CHECK(r.irreducible);
    CHECK(r.injective);
    CHECK(r.separating);
    CHECK(r.simple);
    CHECK(sigma_fixed_oracle(g) == 1);

    const auto cycles = enumerate_cycle_words(g, c, 2);
    CHECK(words_of(cycles) == std::set<std::string>{"1", "30"});
    for (const auto& cw : cycles) {
        const auto path = g.follow(c, cw.word);
        CHECK(path.end == c);
        CHECK(std::abs(path.weight - cw.weight) < 1e-15);
    }

    CHECK(ends_in_cycle_word(g, c, Word::parse("231")));
    CHECK_FALSE(ends_in_cycle_word(g, c, Word::parse("13")));
    CHECK(strings(enumerate_frame_words(g, c, 1)) == std::vector<std::string>{"", "0", "2", "3"});

    CHECK(first_passage_mass(g, c, c, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(first_passage_oracle(g, c, c, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cycle decomposition is unique on injective fixtures")
{
    const FilterSystem fs = load_filter("twocycle");
    const WalkGraph g = walk_through(fs, pt("-1"));
    const std::size_t c = vertex(g, pt("-1"));
    std::set<std::string> cycles;
    for (const auto& cw : enumerate_cycle_words(g, c, 8))
        cycles.insert(cw.word.to_string());
    std::size_t frame_words = 0;
    for_each_word(4, 8, [&](const Word& w) {
        CHECK(factorizations(w, cycles) == 1);
        const auto d = decompose_cycles(g, c, w);
        Word joined = d.head;
        for (const auto& b : d.cycles) {
            CHECK(cycles.count(b.to_string()) == 1);
            joined = joined + b;
        }
        CHECK(joined == w);
        CHECK_FALSE(ends_in_cycle_word(g, c, d.head));
        if (!ends_in_cycle_word(g, c, w))
            ++frame_words;
    });
    CHECK(enumerate_frame_words(g, c, 8).size() == frame_words);
}

TEST_CASE("first-passage mass against word enumeration")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const WalkGraph g = random_walk(rng, 2 + static_cast<std::size_t>(trial % 3), 2, 0.5);
        for (std::size_t t = 0; t < g.vertex_count(); ++t)
            for (std::size_t c = 0; c < g.vertex_count(); ++c) {
                double previous = 0.0;
                for (std::size_t lmax = 0; lmax <= 8; ++lmax) {
                    const double m = first_passage_mass(g, t, c, lmax);
                    CHECK(m == doctest::Approx(first_passage_oracle(g, t, c, lmax)).epsilon(1e-12));
                    CHECK(m >= previous - 1e-15);
                    CHECK(m <= 1.0 + 1e-10);
                    previous = m;
                }
            }
    }

    // no path from vertex 1 to vertex 0
    const WalkGraph g({{"a", std::nullopt}, {"b", std::nullopt}}, {{1, 1}}, {{1.0, 1.0}});
    CHECK(first_passage_mass(g, 1, 0, 10) == 0.0);
}

TEST_CASE("irreducible and separating walks are simple")
{
    std::mt19937_64 rng(23);
    std::size_t qualifying = 0;
    std::size_t checked = 0;
    for (int attempt = 0; attempt < 20000 && qualifying < 50; ++attempt) {
        const WalkGraph g = random_walk(rng, 2 + static_cast<std::size_t>(attempt % 3), 2 + static_cast<std::size_t>(attempt % 3), 0.3);
        const auto r = analyze(g);
        CHECK(r.sigma_fixed_dim == sigma_fixed_oracle(g));
        CHECK(r.simple == (r.sigma_fixed_dim == 1));
        ++checked;
        if (r.irreducible && r.separating) {
            CHECK(r.sigma_fixed_dim == 1);
            ++qualifying;
        }
    }
    CHECK(qualifying == 50);
    CHECK(checked >= 50);
}

TEST_CASE("separating decision on small graphs")
{
    const double s = std::sqrt(0.5);
    // two vertices swapped by both letters: the pair (0, 1) cycles forever
    const WalkGraph swap({{"0", std::nullopt}, {"1", std::nullopt}}, {{1, 0}, {1, 0}}, {{s, s}, {s, s}});
    CHECK_FALSE(is_separating(swap));
    CHECK(is_irreducible(swap));
    CHECK(sigma_fixed_dimension(swap) == sigma_fixed_oracle(swap));
    // letter k only possible at vertex k: no long simultaneous words
    const WalkGraph split({{"0", std::nullopt}, {"1", std::nullopt}}, {{0, 0}, {1, 1}}, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(is_separating(split));
    CHECK_FALSE(is_irreducible(split));
}

TEST_CASE("words and Omega_beta")
{
    CHECK(strings(enumerate_omega_beta(2, Word{0}, 2)) == std::vector<std::string>{"", "1", "01", "11"});
    CHECK(strings(enumerate_omega_beta(2, Word{1, 0}, 2)) ==
          std::vector<std::string>{"", "0", "1", "00", "01", "11"});
    CHECK_THROWS_AS(enumerate_omega_beta(2, Word::parse("1010"), 4), PreconditionError);
    CHECK_FALSE(is_irreducible(Word::parse("1010")));
    CHECK(is_irreducible(Word::parse("1011")));
    CHECK_FALSE(is_irreducible(Word{}));

    std::vector<Word> all;
    for_each_word(3, 3, [&](const Word& w) { all.push_back(w); });
    CHECK(all.size() == 1 + 3 + 9 + 27);
    CHECK(std::is_sorted(all.begin(), all.end(), LengthLexLess{}));
    CHECK(Word::parse("10.3").letters() == std::vector<Letter>{10, 3});
    CHECK(Word::parse("-").empty());
}

TEST_CASE("periodic walks")
{
    const FilterSystem l03 = load_filter("mu4_l03");
    const WalkGraph g = build_periodic_walk(l03, pt("-1"), Word{1});
    REQUIRE(g.vertex_count() == 1);
    CHECK(std::abs(g.weight(1, 0) - Complex(1.0)) < 1e-12);

    const FilterSystem mu4 = load_filter("mu4");
    const WalkGraph h = build_periodic_walk(mu4, pt("0"), Word{0});
    REQUIRE(h.vertex_count() == 1);
    CHECK(std::abs(h.weight(0, 0) - Complex(1.0)) < 1e-12);
    CHECK_THROWS_AS(build_periodic_walk(mu4, pt("0"), Word{1}), PreconditionError);
    CHECK_THROWS_AS(build_periodic_walk(mu4, pt("0"), Word{0, 0}), PreconditionError);
}

TEST_CASE("walk construction errors")
{
    CHECK_THROWS_AS(WalkGraph({{"a", std::nullopt}}, {{3}}, {{1.0}}), InputError);
    CHECK_THROWS_AS(WalkGraph({{"a", std::nullopt}, {"a", std::nullopt}}, {{0, 1}}, {{1.0, 1.0}}), InputError);
    const WalkGraph bad({{"a", std::nullopt}}, {{0}, {0}}, {{1.0}, {1.0}});
    CHECK(bad.normalization_defect() == doctest::Approx(1.0));
    CHECK_THROWS_AS(analyze(bad), PreconditionError);
}
