#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cuntz/frames.hpp"
#include "cuntz/model.hpp"
#include "cuntz/walkgraph.hpp"

namespace cuntz {

struct GramReport {
    std::size_t size = 0;
    double max_off_diagonal = 0.0;
    double max_diagonal_defect = 0.0;
    /// mu_hat truncation depth; 0 for exact step-function Gram matrices.
    std::size_t depth = 0;
    /// Largest last-factor deviation among the mu_hat products used.
    double max_tail_deviation = 0.0;
    Eigen::MatrixXcd matrix;

    double max_deviation() const { return std::max(max_off_diagonal, max_diagonal_defect); }
};

/// G_jk = <atom_j, atom_k> = w_j conj(w_k) mu_hat(lambda_j - lambda_k).
GramReport gram(const FilterSystem& fs, const std::vector<FourierAtom>& atoms,
                std::size_t depth = default_mu_hat_depth);
/// Exact Gram matrix of step functions.
GramReport gram(const std::vector<StepFunction>& functions);

struct ParsevalProfile {
    /// sums[n] = sum of |<atom(w), v>|^2 over frame words with |w| <= n.
    std::vector<double> sums;
    double target = 1.0;
    bool monotone = true;
    /// sums[n] <= target + slack for every n.
    bool bessel = true;
    std::size_t atom_count = 0;
    std::size_t depth = 0;
    double max_tail_deviation = 0.0;
};

inline constexpr double default_bessel_slack = 1e-8;

/// Profile of v = e_t against the atoms of Omega_c^(0), c a vertex of `walk`.
ParsevalProfile parseval_profile(const FilterSystem& fs, const WalkGraph& walk, std::size_t c, const RationalPoint& t,
                                 std::size_t max_length, std::size_t depth = default_mu_hat_depth,
                                 const Tolerances& tol = default_tolerances,
                                 double bessel_slack = default_bessel_slack);

/// Same with the walk on the orbit closure of the basepoint c.
ParsevalProfile parseval_profile(const FilterSystem& fs, const RationalPoint& c, const RationalPoint& t,
                                 std::size_t max_length, std::size_t depth = default_mu_hat_depth,
                                 const Tolerances& tol = default_tolerances,
                                 double bessel_slack = default_bessel_slack);

/// Profile of f against V_w 1, w not ending in 0, |w| <= max_length (>= level of f).
ParsevalProfile walsh_parseval_profile(const Eigen::MatrixXcd& a, const StepFunction& f, std::size_t max_length,
                                       const Tolerances& tol = default_tolerances,
                                       double bessel_slack = default_bessel_slack);

/// |sum_{w in Omega_0, |w| <= n} |<f, V_w 1>|^2 - ||f||^2| for f of level <= n.
double walsh_parseval_exact(const Eigen::MatrixXcd& a, std::size_t n, const StepFunction& f,
                            const Tolerances& tol = default_tolerances);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    /// sum |<v, atom>|^2 / ||v||^2 per test vector.
    std::vector<double> ratios;
};

FrameBounds frame_bounds(const FilterSystem& fs, const std::vector<FourierAtom>& atoms,
                         const std::vector<RationalPoint>& tests, std::size_t depth = default_mu_hat_depth);
FrameBounds frame_bounds(const std::vector<WalshAtom>& atoms, const std::vector<StepFunction>& tests);
/// Tests e_{2^m}, m = 1..max_m, against V_w e_0 for w not ending in 0 with |w| <= m + 1.
/// Longer words land on indices >= 2^{m+1}, so each ratio is exact.
FrameBounds l2q_frame_bounds(unsigned max_m);

struct IncompletenessReport {
    /// Every weight has modulus 0 or 1.
    bool single_cycle = false;
    /// Some vertex admits two letters with nonzero weight.
    bool multi_cycle = false;
    std::optional<std::size_t> branching_vertex;
    std::vector<int> branching_letters;
    std::string verdict;
};

IncompletenessReport incompleteness_check(const WalkGraph& g, std::size_t c, const Tolerances& tol = default_tolerances);

} // namespace cuntz
