#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cuntz/model.hpp"
#include "cuntz/walkgraph.hpp"

namespace cuntz {

/// Finite minimal invariant set of the spectral dynamics t -> g_i(t), points sorted ascending.
struct MinimalSet {
    std::vector<RationalPoint> points;

    friend bool operator==(const MinimalSet&, const MinimalSet&) = default;
};

std::string to_string(const MinimalSet& set);

struct TransitionRecord {
    RationalPoint source;
    int letter = 0;
    RationalPoint target;
    Complex weight;
};

/// Exact search in dimension one for alpha-form systems.
///
/// Candidates are the points of (1/g)Z, g = gcd of the nonzero digits, inside the
/// hull of the attractor of {g_i}; extreme cycle points always lie there. Minimal
/// sets are the sink strongly connected components of the possible-transition graph
/// among candidates. The set containing 0 comes first, the others follow ordered by
/// their smallest point.
std::vector<MinimalSet> find_minimal_sets_1d(const FilterSystem& fs, const Tolerances& tol = default_tolerances);

struct InvariantCheck {
    bool invariant = false;
    bool minimal = false;
    bool extreme = false;
    /// Possible transitions leaving the set.
    std::vector<TransitionRecord> escapes;
    /// Points whose orbit inside the set misses part of it.
    std::vector<RationalPoint> non_generating;
    /// Points with |m_B| != 1.
    std::vector<RationalPoint> non_extreme;
};

InvariantCheck verify_invariant(const FilterSystem& fs, const std::vector<RationalPoint>& points,
                                const Tolerances& tol = default_tolerances);

/// Closure of {t} under possible transitions; throws PreconditionError if it exceeds max_points.
std::vector<RationalPoint> orbit_closure(const FilterSystem& fs, const RationalPoint& t, std::size_t max_points = 4096,
                                         const Tolerances& tol = default_tolerances);

/// Affine line {base + s * direction : s in Q}.
struct AffineLine {
    RationalPoint base;
    RationalPoint direction;
};

struct InducedMap {
    int letter = 0;
    /// s -> slope * s + offset in the line parameter.
    Rational slope;
    Rational offset;
};

struct LineInvarianceReport {
    std::size_t samples = 0;
    /// Letters with a possible transition from at least one sample, ascending.
    std::vector<int> letters;
    /// Affine maps induced on the line parameter by those letters (when they preserve the line).
    std::vector<InducedMap> maps;
    /// Possible transitions that leave the line.
    std::vector<TransitionRecord> escapes;
    bool stays_on_line() const { return escapes.empty(); }
};

/// Samples `samples` equally spaced parameters in [s_min, s_max] and records every
/// possible transition.
LineInvarianceReport sample_line_invariance(const FilterSystem& fs, const AffineLine& line, const Rational& s_min,
                                            const Rational& s_max, std::size_t samples,
                                            const Tolerances& tol = default_tolerances);

/// (Rf)(t) = sum_i |nu_i(t)|^2 f(g_i(t)).
Complex apply_ruelle(const FilterSystem& fs, const std::function<Complex(const RationalPoint&)>& f,
                     const RationalPoint& t);

/// max_t |R1(t) - 1|.
double ruelle_check(const FilterSystem& fs, const std::vector<RationalPoint>& points);

/// V_i e_{g_i(c)} = conj(nu_i(c)) e_c for every possible transition from every point.
/// On a no-overlap system this reduces to a_{i,b} e^{-2 pi i g_i(c).b} = conj(nu_i(c)) for all b.
bool is_reversing_on(const FilterSystem& fs, const std::vector<RationalPoint>& points,
                     const Tolerances& tol = default_tolerances);

/// Walk on the points of an invariant set with the spectral edges and weights.
/// Impossible transitions point back at their source with weight 0.
WalkGraph walk_from_minimal_set(const FilterSystem& fs, const MinimalSet& set, const Tolerances& tol = default_tolerances);

} // namespace cuntz
