#include "cuntz/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "cuntz/error.hpp"
#include "graph_util.hpp"

namespace cuntz {

namespace {

bool possible(Complex w, const Tolerances& tol) { return std::abs(w) > tol.zero; }

Rational ceil_rational(const Rational& q) { return -floor_rational(-q); }

constexpr std::size_t max_candidates = 1'000'000;

} // namespace

std::string to_string(const MinimalSet& set)
{
    std::string out = "{";
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        if (i)
            out += ", ";
        out += set.points[i].to_string();
    }
    return out + "}";
}

std::vector<MinimalSet> find_minimal_sets_1d(const FilterSystem& fs, const Tolerances& tol)
{
    if (fs.dim() != 1)
        throw PreconditionError("minimal-set search is only available in dimension 1 (got dimension " +
                                std::to_string(fs.dim()) + "); use verify_invariant on candidate sets");
    const auto alpha = fs.alpha();
    if (!alpha)
        throw PreconditionError("minimal-set search needs coefficients a_{i,b} independent of the digit b");

    const std::int64_t r = fs.ifs().scaling()(0, 0);
    std::vector<std::int64_t> active;
    for (std::size_t i = 0; i < fs.filter_count(); ++i)
        if (std::abs((*alpha)[i]) > tol.zero)
            active.push_back(fs.frequencies()[i][0]);
    if (active.empty())
        throw PreconditionError("every alpha_i vanishes");
    const Rational l_min = *std::min_element(active.begin(), active.end());
    const Rational l_max = *std::max_element(active.begin(), active.end());

    // Smallest interval mapped into itself by every active g_i(x) = (x - l_i) / r.
    Rational lo, hi;
    if (r > 1) {
        lo = -l_max / (r - 1);
        hi = -l_min / (r - 1);
    } else {
        const Rational s = -r;
        lo = (s * l_min - l_max) / (s * s - 1);
        hi = l_min - s * lo;
    }

    std::int64_t g = 0;
    for (const auto& b : fs.ifs().digits())
        g = std::gcd(g, std::abs(b[0]));

    const BigInt k_min = boost::multiprecision::numerator(ceil_rational(lo * g));
    const BigInt k_max = boost::multiprecision::numerator(floor_rational(hi * g));
    if (k_max < k_min)
        return {};
    const BigInt span = k_max - k_min + 1;
    if (span > max_candidates)
        throw PreconditionError("candidate lattice too large (" + span.str() + " points)");
    const auto count = static_cast<std::size_t>(span);

    std::vector<RationalPoint> candidates;
    candidates.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        candidates.emplace_back(std::vector<Rational>{Rational(BigInt(k_min + k), BigInt(g))});

    const auto index_of = [&](const RationalPoint& t) -> std::optional<std::size_t> {
        const Rational scaled = t[0] * g;
        if (!is_integer(scaled))
            return std::nullopt;
        const BigInt k = boost::multiprecision::numerator(scaled);
        if (k < k_min || k > k_max)
            return std::nullopt;
        return static_cast<std::size_t>(k - k_min);
    };

    detail::Adjacency adj(count);
    std::vector<bool> escapes(count, false);
    for (std::size_t v = 0; v < count; ++v)
        for (const auto& tr : spectral_transition(fs, candidates[v])) {
            if (!possible(tr.weight, tol))
                continue;
            if (auto w = index_of(tr.target))
                adj[v].push_back(*w);
            else
                escapes[v] = true;
        }

    std::size_t comp_count = 0;
    const auto comp = detail::strongly_connected_components(adj, comp_count);
    std::vector<bool> sink(comp_count, true);
    std::vector<bool> has_edge(comp_count, false);
    for (std::size_t v = 0; v < count; ++v) {
        if (escapes[v])
            sink[comp[v]] = false;
        for (auto w : adj[v]) {
            if (comp[w] != comp[v])
                sink[comp[v]] = false;
            else
                has_edge[comp[v]] = true;
        }
    }

    std::vector<MinimalSet> out(comp_count);
    for (std::size_t v = 0; v < count; ++v)
        out[comp[v]].points.push_back(candidates[v]);
    std::vector<MinimalSet> result;
    for (std::size_t c = 0; c < comp_count; ++c)
        if (sink[c] && has_edge[c])
            result.push_back(std::move(out[c]));

    const RationalPoint zero = RationalPoint::zero(1);
    for (auto& set : result)
        std::sort(set.points.begin(), set.points.end());
    std::sort(result.begin(), result.end(), [&](const MinimalSet& a, const MinimalSet& b) {
        const bool a0 = std::find(a.points.begin(), a.points.end(), zero) != a.points.end();
        const bool b0 = std::find(b.points.begin(), b.points.end(), zero) != b.points.end();
        if (a0 != b0)
            return a0;
        return a.points.front() < b.points.front();
    });
    return result;
}

InvariantCheck verify_invariant(const FilterSystem& fs, const std::vector<RationalPoint>& points, const Tolerances& tol)
{
    InvariantCheck out;
    const std::set<RationalPoint> members(points.begin(), points.end());
    std::map<RationalPoint, std::size_t> index;
    for (const auto& p : members)
        index.emplace(p, index.size());

    detail::Adjacency adj(index.size());
    for (const auto& p : members) {
        for (const auto& tr : spectral_transition(fs, p)) {
            if (!possible(tr.weight, tol))
                continue;
            if (auto it = index.find(tr.target); it != index.end())
                adj[index.at(p)].push_back(it->second);
            else
                out.escapes.push_back({p, tr.letter, tr.target, tr.weight});
        }
        if (!is_integral_for_digits(fs.ifs().digits(), p) &&
            std::abs(std::abs(eval_mB(fs.ifs().digits(), p)) - 1.0) > tol.numeric)
            out.non_extreme.push_back(p);
    }
    for (const auto& [p, i] : index) {
        const auto seen = detail::reachable_from(adj, i);
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            out.non_generating.push_back(p);
    }
    out.invariant = out.escapes.empty();
    out.minimal = out.non_generating.empty() && !members.empty();
    out.extreme = out.non_extreme.empty();
    return out;
}

std::vector<RationalPoint> orbit_closure(const FilterSystem& fs, const RationalPoint& t, std::size_t max_points,
                                         const Tolerances& tol)
{
    std::set<RationalPoint> seen{t};
    std::vector<RationalPoint> todo{t};
    while (!todo.empty()) {
        const RationalPoint p = std::move(todo.back());
        todo.pop_back();
        for (auto& tr : spectral_transition(fs, p)) {
            if (!possible(tr.weight, tol) || seen.count(tr.target))
                continue;
            if (seen.size() >= max_points)
                throw PreconditionError("orbit of " + t.to_string() + " exceeds " + std::to_string(max_points) +
                                        " points; it is not a finite cycle point");
            seen.insert(tr.target);
            todo.push_back(std::move(tr.target));
        }
    }
    return {seen.begin(), seen.end()};
}

namespace {

/// s with p = base + s * direction, if p lies on the line.
std::optional<Rational> line_parameter(const AffineLine& line, const RationalPoint& p)
{
    const RationalPoint delta = p - line.base;
    std::optional<Rational> s;
    for (std::size_t k = 0; k < delta.dim(); ++k) {
        if (line.direction[k] == 0) {
            if (delta[k] != 0)
                return std::nullopt;
            continue;
        }
        const Rational candidate = delta[k] / line.direction[k];
        if (s && *s != candidate)
            return std::nullopt;
        s = candidate;
    }
    return s;
}

} // namespace

LineInvarianceReport sample_line_invariance(const FilterSystem& fs, const AffineLine& line, const Rational& s_min,
                                            const Rational& s_max, std::size_t samples, const Tolerances& tol)
{
    if (line.base.dim() != fs.dim() || line.direction.dim() != fs.dim())
        throw InputError("line has the wrong dimension");
    if (line.direction.is_zero())
        throw InputError("line direction must be nonzero");

    LineInvarianceReport report;
    report.samples = samples;
    std::set<int> letters;
    for (std::size_t k = 0; k < samples; ++k) {
        const Rational s = samples == 1 ? s_min : s_min + (s_max - s_min) * Rational(k, samples - 1);
        const RationalPoint p = line.base + s * line.direction;
        for (const auto& tr : spectral_transition(fs, p)) {
            if (!possible(tr.weight, tol))
                continue;
            letters.insert(tr.letter);
            if (!line_parameter(line, tr.target))
                report.escapes.push_back({p, tr.letter, tr.target, tr.weight});
        }
    }
    report.letters.assign(letters.begin(), letters.end());

    // g_i(base + s d) = g_i(base) + s (R^T)^{-1} d, exactly affine in s.
    const RationalPoint image_dir = fs.ifs().dual_contraction().apply(line.direction);
    const auto slope = line_parameter(AffineLine{RationalPoint::zero(fs.dim()), line.direction}, image_dir);
    for (int letter : report.letters) {
        const auto offset = line_parameter(line, spectral_map(fs, letter, line.base));
        if (slope && offset)
            report.maps.push_back({letter, *slope, *offset});
    }
    return report;
}

Complex apply_ruelle(const FilterSystem& fs, const std::function<Complex(const RationalPoint&)>& f,
                     const RationalPoint& t)
{
    Complex sum{0.0, 0.0};
    for (const auto& tr : spectral_transition(fs, t))
        sum += std::norm(tr.weight) * f(tr.target);
    return sum;
}

double ruelle_check(const FilterSystem& fs, const std::vector<RationalPoint>& points)
{
    double worst = 0.0;
    const auto one = [](const RationalPoint&) { return Complex{1.0, 0.0}; };
    for (const auto& t : points)
        worst = std::max(worst, std::abs(apply_ruelle(fs, one, t) - 1.0));
    return worst;
}

bool is_reversing_on(const FilterSystem& fs, const std::vector<RationalPoint>& points, const Tolerances& tol)
{
    if (!check_no_overlap(fs))
        return false;
    const auto& digits = fs.ifs().digits();
    for (const auto& c : points)
        for (const auto& tr : spectral_transition(fs, c)) {
            if (!possible(tr.weight, tol))
                continue;
            for (std::size_t b = 0; b < digits.size(); ++b) {
                const Complex lhs = fs.coefficients()(tr.letter, static_cast<Eigen::Index>(b)) *
                                    std::conj(unit_phase(dot(digits[b], tr.target)));
                if (std::abs(lhs - std::conj(tr.weight)) > tol.zero)
                    return false;
            }
        }
    return true;
}

WalkGraph walk_from_minimal_set(const FilterSystem& fs, const MinimalSet& set, const Tolerances& tol)
{
    const auto check = verify_invariant(fs, set.points, tol);
    if (!check.invariant) {
        const auto& e = check.escapes.front();
        throw PreconditionError("set is not invariant: transition " + std::to_string(e.letter) + " takes " +
                                e.source.to_string() + " to " + e.target.to_string());
    }
    std::vector<RationalPoint> points = set.points;
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    std::map<RationalPoint, std::size_t> index;
    std::vector<WalkVertex> vertices;
    for (const auto& p : points) {
        index.emplace(p, vertices.size());
        vertices.push_back({p.to_string(), p});
    }
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> targets(fs.filter_count(), std::vector<std::size_t>(n));
    std::vector<std::vector<Complex>> weights(fs.filter_count(), std::vector<Complex>(n));
    for (std::size_t c = 0; c < n; ++c)
        for (const auto& tr : spectral_transition(fs, points[c])) {
            const auto i = static_cast<std::size_t>(tr.letter);
            if (possible(tr.weight, tol)) {
                targets[i][c] = index.at(tr.target);
                weights[i][c] = tr.weight;
            } else {
                targets[i][c] = c;
                weights[i][c] = Complex{};
            }
        }
    WalkGraph g(std::move(vertices), std::move(targets), std::move(weights));
    g.set_reversing(is_reversing_on(fs, points, tol));
    return g;
}

} // namespace cuntz
