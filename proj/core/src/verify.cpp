#include "cuntz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cuntz/error.hpp"
#include "cuntz/invariants.hpp"
#include "graph_util.hpp"

namespace cuntz {

namespace {

void finish_profile(ParsevalProfile& p, double slack)
{
    for (std::size_t n = 1; n < p.sums.size(); ++n)
        p.sums[n] += p.sums[n - 1];
    for (std::size_t n = 0; n < p.sums.size(); ++n) {
        if (n > 0 && p.sums[n] < p.sums[n - 1])
            p.monotone = false;
        if (p.sums[n] > p.target + slack)
            p.bessel = false;
    }
}

} // namespace

GramReport gram(const FilterSystem& fs, const std::vector<FourierAtom>& atoms, std::size_t depth)
{
    GramReport r;
    r.size = atoms.size();
    r.depth = depth;
    const auto n = static_cast<Eigen::Index>(atoms.size());
    r.matrix.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = j; k < n; ++k) {
            const auto& a = atoms[static_cast<std::size_t>(j)];
            const auto& b = atoms[static_cast<std::size_t>(k)];
            const auto est = mu_hat_estimate(fs, a.label - b.label, depth);
            r.max_tail_deviation = std::max(r.max_tail_deviation, est.last_factor_deviation);
            const Complex g = a.weight * std::conj(b.weight) * est.value;
            r.matrix(j, k) = g;
            r.matrix(k, j) = std::conj(g);
            if (j == k)
                r.max_diagonal_defect = std::max(r.max_diagonal_defect, std::abs(g - 1.0));
            else
                r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(g));
        }
    return r;
}

GramReport gram(const std::vector<StepFunction>& functions)
{
    GramReport r;
    r.size = functions.size();
    const auto n = static_cast<Eigen::Index>(functions.size());
    r.matrix.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = j; k < n; ++k) {
            const Complex g = inner(functions[static_cast<std::size_t>(j)], functions[static_cast<std::size_t>(k)]);
            r.matrix(j, k) = g;
            r.matrix(k, j) = std::conj(g);
            if (j == k)
                r.max_diagonal_defect = std::max(r.max_diagonal_defect, std::abs(g - 1.0));
            else
                r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(g));
        }
    return r;
}

ParsevalProfile parseval_profile(const FilterSystem& fs, const WalkGraph& walk, std::size_t c, const RationalPoint& t,
                                 std::size_t max_length, std::size_t depth, const Tolerances& tol, double bessel_slack)
{
    if (t.dim() != fs.dim())
        throw InputError("test frequency " + t.to_string() + " has the wrong dimension");
    ParsevalProfile p;
    p.depth = depth;
    p.sums.assign(max_length + 1, 0.0);
    visit_fourier_atoms(fs, walk, c, max_length, [&](const FourierAtom& atom) {
        const auto est = mu_hat_estimate(fs, atom.label - t, depth);
        p.max_tail_deviation = std::max(p.max_tail_deviation, est.last_factor_deviation);
        p.sums[atom.word.size()] += std::norm(atom.weight * est.value);
        ++p.atom_count;
    }, tol);
    finish_profile(p, bessel_slack);
    return p;
}

ParsevalProfile parseval_profile(const FilterSystem& fs, const RationalPoint& c, const RationalPoint& t,
                                 std::size_t max_length, std::size_t depth, const Tolerances& tol, double bessel_slack)
{
    const WalkGraph walk = walk_from_minimal_set(fs, MinimalSet{orbit_closure(fs, c, 4096, tol)}, tol);
    return parseval_profile(fs, walk, *walk.find(c), t, max_length, depth, tol, bessel_slack);
}

ParsevalProfile walsh_parseval_profile(const Eigen::MatrixXcd& a, const StepFunction& f, std::size_t max_length,
                                       const Tolerances& tol, double bessel_slack)
{
    validate_walsh_matrix(a, tol);
    if (static_cast<Eigen::Index>(f.base()) != a.cols())
        throw InputError("step function base does not match the Walsh matrix");
    if (f.level() > max_length)
        throw PreconditionError("word length cutoff " + std::to_string(max_length) +
                                " is below the level of the step function (" + std::to_string(f.level()) + ")");

    ParsevalProfile p;
    p.target = f.norm2();
    p.sums.assign(max_length + 1, 0.0);
    const int letters = static_cast<int>(a.rows());

    // <f, V_w 1> = <V_w^* f, 1>, and V_{wi}^* = V_i^* V_w^*.
    const std::function<void(const StepFunction&, std::size_t, int)> descend =
        [&](const StepFunction& g, std::size_t len, int last) {
            if (len == 0 || last != 0) {
                Complex mean{0.0, 0.0};
                for (const auto& v : g.values())
                    mean += v;
                mean /= static_cast<double>(g.values().size());
                p.sums[len] += std::norm(mean);
                ++p.atom_count;
            }
            if (len == max_length)
                return;
            for (int i = 0; i < letters; ++i)
                descend(apply_walsh_Vstar(a, i, g), len + 1, i);
        };
    descend(f.lifted(max_length), 0, -1);
    finish_profile(p, bessel_slack);
    return p;
}

double walsh_parseval_exact(const Eigen::MatrixXcd& a, std::size_t n, const StepFunction& f, const Tolerances& tol)
{
    const auto p = walsh_parseval_profile(a, f, n, tol, std::numeric_limits<double>::infinity());
    return std::abs(p.sums.back() - p.target);
}

namespace {

FrameBounds summarize(std::vector<double> ratios)
{
    FrameBounds b;
    b.lower = *std::min_element(ratios.begin(), ratios.end());
    b.upper = *std::max_element(ratios.begin(), ratios.end());
    b.ratios = std::move(ratios);
    return b;
}

} // namespace

FrameBounds frame_bounds(const FilterSystem& fs, const std::vector<FourierAtom>& atoms,
                         const std::vector<RationalPoint>& tests, std::size_t depth)
{
    if (tests.empty())
        throw InputError("frame bounds need at least one test vector");
    std::vector<double> ratios;
    for (const auto& t : tests) {
        double sum = 0.0;
        for (const auto& atom : atoms)
            sum += std::norm(fourier_pairing(fs, atom, t, depth));
        ratios.push_back(sum);
    }
    return summarize(std::move(ratios));
}

FrameBounds frame_bounds(const std::vector<WalshAtom>& atoms, const std::vector<StepFunction>& tests)
{
    if (tests.empty())
        throw InputError("frame bounds need at least one test vector");
    std::vector<double> ratios;
    for (const auto& f : tests) {
        const double norm = f.norm2();
        if (norm == 0.0)
            throw InputError("test step function is zero");
        double sum = 0.0;
        for (const auto& atom : atoms)
            sum += std::norm(inner(f, atom.function));
        ratios.push_back(sum / norm);
    }
    return summarize(std::move(ratios));
}

FrameBounds l2q_frame_bounds(unsigned max_m)
{
    if (max_m == 0)
        throw InputError("frame bounds need at least one test vector");
    std::vector<double> ratios;
    for (unsigned m = 1; m <= max_m; ++m) {
        double sum = 0.0;
        for (const auto& w : enumerate_omega_beta(2, Word{0}, m + 1))
            sum += std::norm(l2q_pairing(m, w));
        ratios.push_back(sum);
    }
    return summarize(std::move(ratios));
}

IncompletenessReport incompleteness_check(const WalkGraph& g, std::size_t c, const Tolerances& tol)
{
    if (c >= g.vertex_count())
        throw InputError("vertex index out of range");
    IncompletenessReport r;
    detail::Adjacency adj(g.vertex_count());
    r.single_cycle = true;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
            const double w = std::abs(g.weight(static_cast<int>(i), v));
            if (w > tol.zero)
                adj[v].push_back(g.target(static_cast<int>(i), v));
            if (w > tol.zero && std::abs(w - 1.0) > tol.zero)
                r.single_cycle = false;
        }
    const auto seen = detail::reachable_from(adj, c);
    for (std::size_t v = 0; v < g.vertex_count() && !r.multi_cycle; ++v) {
        if (!seen[v])
            continue;
        std::vector<int> letters;
        for (std::size_t i = 0; i < g.alphabet_size(); ++i)
            if (std::abs(g.weight(static_cast<int>(i), v)) > tol.zero)
                letters.push_back(static_cast<int>(i));
        if (letters.size() >= 2) {
            r.multi_cycle = true;
            r.branching_vertex = v;
            r.branching_letters = std::move(letters);
        }
    }
    if (r.multi_cycle) {
        std::string letters;
        for (int i : r.branching_letters)
            letters += (letters.empty() ? "" : ", ") + std::to_string(i);
        r.verdict = "multi-cycle: vertex " + g.vertex(*r.branching_vertex).id + " has possible letters " + letters +
                    "; the family indexed by words not ending in a cycle word is incomplete in the dilation space "
                    "(advisory, not computed)";
    } else if (r.single_cycle) {
        r.verdict = "single-cycle: the family indexed by words not ending in a cycle word is orthonormal";
    } else {
        r.verdict = "inconclusive";
    }
    return r;
}

} // namespace cuntz
