#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "cuntz/error.hpp"
#include "cuntz/frames.hpp"
#include "cuntz/invariants.hpp"
#include "cuntz/io.hpp"
#include "cuntz/verify.hpp"
#include "cuntz/walkgraph.hpp"

namespace cuntz::acceptance {

namespace {

using Rng = std::mt19937_64;

std::string fmt(double x)
{
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << x;
    return s.str();
}

FilterSystem load_filter(const Options& opt, const std::string& name)
{
    auto cfg = load_system(opt.fixtures / (name + ".json"));
    if (!cfg.filter)
        throw InputError(name + ": not a filter system fixture");
    return std::move(*cfg.filter);
}

Rational random_rational(Rng& rng, std::int64_t max_abs_num, std::int64_t max_den)
{
    std::uniform_int_distribution<std::int64_t> num(-max_abs_num, max_abs_num);
    std::uniform_int_distribution<std::int64_t> den(1, max_den);
    return Rational(num(rng), den(rng));
}

RationalPoint random_point(Rng& rng, std::size_t dim, std::int64_t max_abs_num, std::int64_t max_den)
{
    std::vector<Rational> coords;
    for (std::size_t k = 0; k < dim; ++k)
        coords.push_back(random_rational(rng, max_abs_num, max_den));
    return RationalPoint(std::move(coords));
}

StepFunction random_step(Rng& rng, std::size_t base, std::size_t level)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t cells = 1;
    for (std::size_t k = 0; k < level; ++k)
        cells *= base;
    std::vector<Complex> values(cells);
    for (auto& v : values)
        v = {u(rng), u(rng)};
    return StepFunction(base, level, std::move(values));
}

/// Normalized walk; every vertex keeps each letter with probability p (at least one).
WalkGraph random_walk(Rng& rng, std::size_t n, std::size_t letters, double p)
{
    std::uniform_int_distribution<std::size_t> vertex(0, n - 1);
    std::uniform_int_distribution<std::size_t> letter(0, letters - 1);
    std::bernoulli_distribution keep(p);
    std::uniform_real_distribution<double> modulus(0.3, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    std::vector<WalkVertex> vertices;
    for (std::size_t c = 0; c < n; ++c)
        vertices.push_back({"v" + std::to_string(c), std::nullopt});
    std::vector<std::vector<std::size_t>> targets(letters, std::vector<std::size_t>(n));
    std::vector<std::vector<Complex>> weights(letters, std::vector<Complex>(n));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<bool> on(letters);
        for (std::size_t i = 0; i < letters; ++i)
            on[i] = keep(rng);
        if (std::none_of(on.begin(), on.end(), [](bool b) { return b; }))
            on[letter(rng)] = true;
        double total = 0.0;
        for (std::size_t i = 0; i < letters; ++i) {
            targets[i][c] = vertex(rng);
            if (on[i]) {
                weights[i][c] = std::polar(modulus(rng), angle(rng));
                total += std::norm(weights[i][c]);
            }
        }
        for (std::size_t i = 0; i < letters; ++i)
            weights[i][c] /= std::sqrt(total);
    }
    return WalkGraph(std::move(vertices), std::move(targets), std::move(weights));
}

std::size_t vertex_of(const WalkGraph& g, const RationalPoint& p)
{
    auto v = g.find(p);
    if (!v)
        throw Error("point " + p.to_string() + " is not a vertex");
    return *v;
}

WalkGraph walk_through(const FilterSystem& fs, const RationalPoint& c)
{
    return walk_from_minimal_set(fs, MinimalSet{orbit_closure(fs, c)});
}

// --- criteria ----------------------------------------------------------------

Result walsh_parseval(const Options& opt, Rng& rng)
{
    Result r{1, "Walsh exact Parseval (N=2 classical, 3x2 isometry; 100 level-6 f each)", false, {}, 0.0};
    double worst = 0.0;
    for (const char* name : {"walsh2", "walsh3x2"}) {
        const Eigen::MatrixXcd a = load_filter(opt, name).coefficients();
        for (int k = 0; k < 100; ++k)
            worst = std::max(worst, walsh_parseval_exact(a, 6, random_step(rng, 2, 6)));
    }
    const Eigen::MatrixXcd a = load_filter(opt, "walsh2").coefficients();
    std::vector<StepFunction> atoms;
    for (auto& atom : walsh_atoms(a, 6))
        atoms.push_back(std::move(atom.function));
    const auto g = gram(atoms);
    r.passed = worst < 1e-10 && g.size == 64 && g.max_deviation() < 1e-12;
    r.detail = "max defect " + fmt(worst) + " (< 1e-10); unitary Gram " + std::to_string(g.size) + " atoms, max |G-I| " +
               fmt(g.max_deviation()) + " (< 1e-12)";
    return r;
}

Result mu4_onb(const Options& opt, Rng&)
{
    Result r{2, "mu_4 orthonormal basis: Gram of the first 64 atoms at depth 40", false, {}, 0.0};
    const FilterSystem fs = load_filter(opt, "mu4");
    const RationalPoint zero = RationalPoint::zero(1);
    const WalkGraph walk = walk_through(fs, zero);
    auto atoms = frame_atoms(fs, walk, vertex_of(walk, zero), 6);
    atoms.resize(std::min<std::size_t>(atoms.size(), 64));
    const auto g = gram(fs, atoms, 40);
    r.passed = g.size == 64 && g.max_deviation() < 1e-8;
    r.detail = std::to_string(g.size) + " atoms, max |G-I| " + fmt(g.max_deviation()) + " (< 1e-8), tail deviation " +
               fmt(g.max_tail_deviation);
    return r;
}

Result two_cycle_system(const Options& opt, Rng&)
{
    Result r{3, "Two-cycle system: minimal sets, cycle words at -1, multi-cycle verdict", false, {}, 0.0};
    const FilterSystem fs = load_filter(opt, "twocycle");
    const auto sets = find_minimal_sets_1d(fs);
    const auto pt = [](std::int64_t x) { return RationalPoint::from_integers(IntVector{x}); };
    const std::vector<MinimalSet> expected{{{pt(0)}}, {{pt(-4), pt(-1)}}};
    std::string found;
    for (const auto& s : sets)
        found += (found.empty() ? "" : ", ") + to_string(s);

    const WalkGraph walk = walk_from_minimal_set(fs, expected[1]);
    const std::size_t c = vertex_of(walk, pt(-1));
    std::vector<std::string> words;
    for (const auto& cw : enumerate_cycle_words(walk, c, 2))
        words.push_back(cw.word.to_string());
    const auto inc = incompleteness_check(walk, c);

    // The planar system: the same sets must pass the invariance test.
    auto planar = load_system(opt.fixtures / "twocycle_planar.json");
    bool planar_ok = check_filter_matrix(*planar.filter).kind == FilterMatrixKind::Unitary &&
                     !planar.candidate_sets.empty();
    for (const auto& s : planar.candidate_sets) {
        const auto chk = verify_invariant(*planar.filter, s);
        planar_ok = planar_ok && chk.invariant && chk.minimal && chk.extreme;
    }

    r.passed = sets == expected && words == std::vector<std::string>{"1", "30"} && inc.multi_cycle && planar_ok;
    std::string list;
    for (const auto& w : words)
        list += (list.empty() ? "\"" : ", \"") + w + "\"";
    r.detail = "sets [" + found + "]; cycle words {" + list + "}; multiCycle " + (inc.multi_cycle ? "true" : "false") +
               "; planar candidate sets " + (planar_ok ? "verified" : "NOT verified");
    return r;
}

Result noninjective_walk(const Options& opt, Rng&)
{
    Result r{4, "2x2 non-injective walk: analyze flags and refused cycle decomposition", false, {}, 0.0};
    const auto cfg = load_system(opt.fixtures / "noninjective_walk.json");
    const WalkGraph& g = *cfg.walk;
    const auto rep = analyze(g);
    bool refused = false;
    std::string message;
    try {
        ends_in_cycle_word(g, 0, Word::parse("1010"));
    } catch (const PreconditionError& e) {
        refused = true;
        message = e.what();
    }
    r.passed = rep.irreducible && !rep.injective && !rep.separating && rep.sigma_fixed_dim == 1 && refused;
    r.detail = std::string("irreducible ") + (rep.irreducible ? "true" : "false") + ", injective " +
               (rep.injective ? "true" : "false") + ", separating " + (rep.separating ? "true" : "false") +
               ", sigma_fixed_dim " + std::to_string(rep.sigma_fixed_dim) + "; ends_in_cycle_word " +
               (refused ? "refused" : "NOT refused");
    return r;
}

Result first_passage(const Options& opt, Rng& rng)
{
    Result r{5, "First-passage mass: two-cycle system at -1 and 50 random irreducible walks", false, {}, 0.0};
    const FilterSystem fs = load_filter(opt, "twocycle");
    const RationalPoint m1 = RationalPoint::from_integers(IntVector{-1});
    const WalkGraph walk = walk_through(fs, m1);
    const std::size_t c = vertex_of(walk, m1);
    const double mass = first_passage_mass(walk, c, c, 2);

    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_int_distribution<std::size_t> letters(2, 3);
    double worst = 1.0;
    double worst_long = 1.0;
    std::size_t tested = 0;
    std::size_t short_of = 0;
    for (std::size_t attempt = 0; tested < 50 && attempt < 100000; ++attempt) {
        const WalkGraph g = random_walk(rng, size(rng), letters(rng), 0.6);
        if (!is_irreducible(g))
            continue;
        std::uniform_int_distribution<std::size_t> v(0, g.vertex_count() - 1);
        const std::size_t t = v(rng);
        const std::size_t target = v(rng);
        const double m = first_passage_mass(g, t, target, 64);
        worst = std::min(worst, m);
        if (m < 0.999) {
            ++short_of;
            worst_long = std::min(worst_long, first_passage_mass(g, t, target, 4096));
        }
        ++tested;
    }
    r.passed = std::abs(mass - 1.0) < 1e-12 && tested == 50 && worst >= 0.999;
    std::ostringstream d;
    d << std::setprecision(6) << "two-cycle mass at Lmax 2 = " << mass << "; " << tested << " random walks, min at Lmax 64 = "
      << worst << " (>= 0.999)";
    if (short_of)
        d << "; " << short_of << " below threshold, min of those at Lmax 4096 = " << worst_long;
    r.detail = d.str();
    return r;
}

Result separating_simple(const Options&, Rng& rng)
{
    Result r{6, "Irreducible and separating random walks have sigma_fixed_dim = 1", false, {}, 0.0};
    std::uniform_int_distribution<std::size_t> size(2, 4);
    std::uniform_int_distribution<std::size_t> letters(2, 4);
    std::size_t tested = 0;
    std::size_t good = 0;
    std::size_t attempts = 0;
    for (; tested < 50 && attempts < 200000; ++attempts) {
        const WalkGraph g = random_walk(rng, size(rng), letters(rng), 0.4);
        if (!is_irreducible(g) || !is_separating(g))
            continue;
        ++tested;
        if (sigma_fixed_dimension(g) == 1)
            ++good;
    }
    r.passed = tested == 50 && good == tested;
    r.detail = std::to_string(good) + "/" + std::to_string(tested) + " qualifying walks simple (" +
               std::to_string(attempts) + " sampled)";
    return r;
}

Result l2q_model(const Options&, Rng& rng)
{
    Result r{7, "l^2(Q) model: pairings (1/sqrt2)^{m+1}, zeros elsewhere, lower frame bound", false, {}, 0.0};
    double worst = 0.0;
    for (unsigned m = 1; m <= 10; ++m) {
        std::vector<Letter> letters(m, 0);
        letters.push_back(1);
        worst = std::max(worst, std::abs(l2q_pairing(m, Word(letters)) - std::pow(std::sqrt(0.5), m + 1)));
    }
    std::uniform_int_distribution<std::size_t> length(1, 12);
    std::uniform_int_distribution<unsigned> pick_m(1, 10);
    std::bernoulli_distribution bit(0.5);
    std::size_t zeros = 0;
    double worst_random = 0.0;
    for (int k = 0; k < 1000; ++k) {
        std::vector<Letter> letters(length(rng));
        for (auto& x : letters)
            x = bit(rng) ? 1 : 0;
        const unsigned m = pick_m(rng);
        std::vector<Letter> stripped = letters;
        while (!stripped.empty() && stripped.back() == 0)
            stripped.pop_back();
        std::vector<Letter> match(m, 0);
        match.push_back(1);
        const double expected = stripped == match ? std::pow(std::sqrt(0.5), m + 1) : 0.0;
        zeros += expected == 0.0;
        worst_random = std::max(worst_random, std::abs(l2q_pairing(m, Word(letters)) - expected));
    }
    const auto bounds = l2q_frame_bounds(10);
    bool decay = true;
    for (std::size_t k = 0; k < bounds.ratios.size(); ++k) {
        decay = decay && std::abs(bounds.ratios[k] - std::pow(0.5, static_cast<double>(k + 2))) < 1e-12;
        if (k > 0)
            decay = decay && bounds.ratios[k] < bounds.ratios[k - 1];
    }
    r.passed = worst < 1e-12 && worst_random < 1e-12 && bounds.lower <= std::pow(0.5, 11) + 1e-15 && decay;
    r.detail = "max error m=1..10 " + fmt(worst) + "; random words " + fmt(worst_random) + " (" +
               std::to_string(zeros) + " expected zeros); A_est " + fmt(bounds.lower) + " <= (1/2)^11";
    return r;
}

Result ruelle(const Options& opt, Rng& rng)
{
    Result r{8, "Ruelle normalization R1 = 1 at 1000 random points per fixture", false, {}, 0.0};
    double worst = 0.0;
    for (const char* name : {"mu4", "mu4_l03", "twocycle_planar", "twocycle", "invariant_line", "walsh2", "walsh3x2"}) {
        const FilterSystem fs = load_filter(opt, name);
        std::vector<RationalPoint> pts;
        for (int k = 0; k < 1000; ++k)
            pts.push_back(random_point(rng, fs.dim(), 500, 97));
        worst = std::max(worst, ruelle_check(fs, pts));
    }
    r.passed = worst < 1e-12;
    r.detail = "max |R1 - 1| " + fmt(worst) + " over 7 fixtures (< 1e-12)";
    return r;
}

Result reversing(const Options& opt, Rng& rng)
{
    Result r{9, "Reversing identity on L={0,3} at c=-1", false, {}, 0.0};
    const FilterSystem fs = load_filter(opt, "mu4_l03");
    const RationalPoint c = RationalPoint::from_integers(IntVector{-1});
    const WalkGraph walk = walk_through(fs, c);
    const std::size_t cv = vertex_of(walk, c);
    const auto cycles = enumerate_cycle_words(walk, cv, 4);
    std::vector<RationalPoint> tests;
    for (int k = 0; k < 20; ++k)
        tests.push_back(random_point(rng, 1, 400, 60));

    double worst = 0.0;
    std::size_t checks = 0;
    for_each_word(fs.filter_count(), 4, [&](const Word& w0) {
        for (const auto& cw : cycles) {
            const auto atoms = fourier_atoms(fs, c, {w0, w0 + cw.word});
            const double nu = std::abs(walk.follow(cv, cw.word).weight);
            for (const auto& t : tests) {
                const double lhs = std::abs(fourier_pairing(fs, atoms[1], t));
                const double rhs = nu * std::abs(fourier_pairing(fs, atoms[0], t));
                worst = std::max(worst, std::abs(lhs - rhs));
                ++checks;
            }
        }
    });
    r.passed = !cycles.empty() && worst < 1e-8;
    r.detail = std::to_string(cycles.size()) + " cycle word(s), " + std::to_string(checks) + " checks, max error " +
               fmt(worst) + " (< 1e-8)";
    return r;
}

Result line_invariance(const Options& opt, Rng&)
{
    Result r{10, "Planar system: transitions from the line y = -2/3", false, {}, 0.0};
    const auto cfg = load_system(opt.fixtures / "invariant_line.json");
    const FilterSystem& fs = *cfg.filter;
    LineSpec spec{{RationalPoint::parse("(0, -2/3)"), RationalPoint::parse("(1, 0)")}, Rational(-1), Rational(1), 100};
    if (!cfg.lines.empty())
        spec = cfg.lines.front();
    const auto rep = sample_line_invariance(fs, spec.line, spec.s_min, spec.s_max, spec.samples);

    // Letters 2 and 3 are l = (0,2) and (2,2).
    bool maps_ok = rep.maps.size() == 2;
    double worst = 0.0;
    const std::vector<std::pair<Rational, Rational>> expected{{Rational(1, 4), Rational(1, 6)},
                                                              {Rational(1, 4), Rational(-1, 3)}};
    for (std::size_t k = 0; maps_ok && k < 2; ++k) {
        const auto& m = rep.maps[k];
        worst = std::max({worst, std::abs((m.slope - expected[k].first).convert_to<double>()),
                          std::abs((m.offset - expected[k].second).convert_to<double>())});
        maps_ok = maps_ok && m.letter == static_cast<int>(k + 2);
    }
    const bool letters_ok = rep.letters == std::vector<int>{2, 3} && fs.frequencies()[2] == IntVector{0, 2} &&
                            fs.frequencies()[3] == IntVector{2, 2};
    r.passed = rep.samples == 100 && letters_ok && rep.stays_on_line() && maps_ok && worst < 1e-12;
    std::string maps;
    for (const auto& m : rep.maps)
        maps += (maps.empty() ? "" : ", ") + std::string("letter ") + std::to_string(m.letter) + ": s -> " +
                to_string(m.slope) + " s " + (m.offset < 0 ? "- " + to_string(Rational(-m.offset)) : "+ " + to_string(m.offset));
    std::string letters;
    for (int l : rep.letters)
        letters += (letters.empty() ? "" : ", ") + std::to_string(l);
    r.detail = std::to_string(rep.samples) + " samples; possible letters {" + letters + "}; " + maps + (rep.stays_on_line() ? "; no escapes" : "; ESCAPES");
    return r;
}

Result parseval_profiles(const Options& opt, Rng& rng)
{
    Result r{11, "Parseval profiles nondecreasing and <= 1 + 1e-8 (20 random t per fixture)", false, {}, 0.0};
    struct Case {
        std::string fixture;
        std::size_t max_length;
    };
    // The planar system has 4^n words of length n; it is profiled to length 6.
    const std::vector<Case> cases{{"mu4", 10}, {"mu4_l03", 10}, {"twocycle", 10}, {"invariant_line", 6}};
    bool ok = true;
    double worst_excess = -1.0;
    std::size_t profiles = 0;
    std::string failures;
    for (const auto& cs : cases) {
        const FilterSystem fs = load_filter(opt, cs.fixture);
        std::vector<RationalPoint> basepoints;
        if (fs.dim() == 1) {
            for (const auto& set : find_minimal_sets_1d(fs))
                basepoints.push_back(*std::min_element(set.points.begin(), set.points.end(),
                                                       [](const RationalPoint& a, const RationalPoint& b) {
                                                           return boost::multiprecision::abs(a[0]) <
                                                                  boost::multiprecision::abs(b[0]);
                                                       }));
        } else {
            basepoints.push_back(RationalPoint::zero(fs.dim()));
        }
        std::vector<RationalPoint> tests;
        for (int k = 0; k < 20; ++k)
            tests.push_back(random_point(rng, fs.dim(), 400, 50));
        for (const auto& c : basepoints) {
            const WalkGraph walk = walk_through(fs, c);
            const std::size_t cv = vertex_of(walk, c);
            for (const auto& t : tests) {
                const auto p = parseval_profile(fs, walk, cv, t, cs.max_length, 40, default_tolerances, 1e-8);
                ++profiles;
                worst_excess = std::max(worst_excess, p.sums.back() - p.target);
                if (!p.monotone || !p.bessel) {
                    ok = false;
                    failures += " " + cs.fixture + "@" + c.to_string() + "/" + t.to_string();
                }
            }
        }
    }
    r.passed = ok;
    r.detail = std::to_string(profiles) + " profiles; max s_n - 1 = " + fmt(worst_excess) +
               (failures.empty() ? "" : "; failing:" + failures);
    return r;
}

} // namespace

std::vector<Result> run_all(const Options& options)
{
    using Criterion = std::function<Result(const Options&, Rng&)>;
    const std::vector<std::pair<int, Criterion>> criteria{
        {1, walsh_parseval}, {2, mu4_onb},  {3, two_cycle_system}, {4, noninjective_walk},     {5, first_passage},
        {6, separating_simple}, {7, l2q_model}, {8, ruelle}, {9, reversing}, {10, line_invariance},
        {11, parseval_profiles},
    };
    std::vector<Result> results;
    for (const auto& [id, run] : criteria) {
        Rng rng(options.seed + static_cast<std::uint64_t>(id));
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = run(options, rng);
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion " + std::to_string(id);
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    }
    return results;
}

void print(std::ostream& out, const std::vector<Result>& results)
{
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed;
        out << (r.passed ? "PASS" : "FAIL") << " [" << std::setw(2) << r.id << "] " << r.title << " :: " << r.detail
            << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
        out.unsetf(std::ios::floatfield);
    }
    out << passed << "/" << results.size() << " acceptance criteria passed\n";
}

bool all_passed(const std::vector<Result>& results)
{
    return std::all_of(results.begin(), results.end(), [](const Result& r) { return r.passed; });
}

} // namespace cuntz::acceptance
