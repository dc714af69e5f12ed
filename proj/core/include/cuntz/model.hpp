#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cuntz/numeric.hpp"
#include "cuntz/rational.hpp"

namespace cuntz {

/// Affine IFS tau_b(x) = R^{-1}(x + b) on R^d: expansive integer matrix R and digit set B.
class IFSSpec {
public:
    /// Validates: R square, 0 in B, digits distinct and of dimension d, R expansive.
    IFSSpec(IntMatrix scaling, std::vector<IntVector> digits);

    std::size_t dim() const { return scaling_.rows(); }
    std::size_t digit_count() const { return digits_.size(); }
    const IntMatrix& scaling() const { return scaling_; }
    const std::vector<IntVector>& digits() const { return digits_; }

    /// (R^T)^{-1}, the contraction driving the spectral maps.
    const RationalMatrix& dual_contraction() const { return dual_contraction_; }
    /// R^{-1}.
    const RationalMatrix& contraction() const { return contraction_; }
    /// (R^T)^{-1} = dual_numerators() / dual_denominator() with integer entries.
    const IntMatrix& dual_numerators() const { return dual_numerators_; }
    std::int64_t dual_denominator() const { return dual_denominator_; }

private:
    IntMatrix scaling_;
    std::vector<IntVector> digits_;
    RationalMatrix contraction_;
    RationalMatrix dual_contraction_;
    IntMatrix dual_numerators_;
    std::int64_t dual_denominator_ = 1;
};

/// Every eigenvalue of R has modulus > 1.
bool is_expansive(const IntMatrix& scaling);

/// The full filter datum (R, B, {l_i}, {a_{i,b}}).
class FilterSystem {
public:
    /// `coefficients` is M x N: row i is filter i, column b the digit index.
    FilterSystem(IFSSpec ifs, std::vector<IntVector> frequencies, Eigen::MatrixXcd coefficients, std::string name = {});

    /// a_{i,b} = alpha_i for every digit b.
    static FilterSystem from_alpha(IFSSpec ifs, std::vector<IntVector> frequencies, std::span<const Complex> alpha,
                                   std::string name = {});

    const IFSSpec& ifs() const { return ifs_; }
    std::size_t dim() const { return ifs_.dim(); }
    std::size_t filter_count() const { return frequencies_.size(); }
    std::size_t digit_count() const { return ifs_.digit_count(); }
    const std::vector<IntVector>& frequencies() const { return frequencies_; }
    const Eigen::MatrixXcd& coefficients() const { return coefficients_; }
    const std::string& name() const { return name_; }

    /// alpha_i when a_{i,b} does not depend on b (within tol), otherwise nullopt.
    std::optional<std::vector<Complex>> alpha(double tol = 1e-12) const;

private:
    IFSSpec ifs_;
    std::vector<IntVector> frequencies_;
    Eigen::MatrixXcd coefficients_;
    std::string name_;
};

enum class FilterMatrixKind { Unitary, Isometry, Invalid };

std::string to_string(FilterMatrixKind kind);

struct FilterMatrixCheck {
    FilterMatrixKind kind = FilterMatrixKind::Invalid;
    /// max_{b,b'} |(1/N) sum_i a_{i,b} conj(a_{i,b'}) e^{2 pi i R^{-1}(b-b').l_i} - delta_{b,b'}|
    double max_column_defect = 0.0;
    /// Same for rows of the square matrix; 0 when M != N.
    double max_row_defect = 0.0;
};

/// The matrix (1/sqrt N)(e^{2 pi i R^{-1} b . l_i} a_{i,b}), rows i, columns b.
Eigen::MatrixXcd filter_matrix(const FilterSystem& fs);

FilterMatrixCheck check_filter_matrix(const FilterSystem& fs, const Tolerances& tol = default_tolerances);

/// m_B(t) = (1/N) sum_b e^{2 pi i b . t}.
Complex eval_mB(std::span<const IntVector> digits, const RationalPoint& t);
Complex eval_mB(std::span<const IntVector> digits, std::span<const double> t);

/// b . t in Z for every digit; then m_B(t) = 1 exactly.
bool is_integral_for_digits(std::span<const IntVector> digits, const RationalPoint& t);

struct Transition {
    int letter = 0;
    RationalPoint target;
    Complex weight;
};

/// g_i(t) = (R^T)^{-1}(t - l_i).
RationalPoint spectral_map(const FilterSystem& fs, int letter, const RationalPoint& t);

/// nu_i(t) = (1/N) sum_b e^{2 pi i g_i(t) . b} conj(a_{i,b}).
Complex transition_weight(const FilterSystem& fs, int letter, const RationalPoint& target);

/// All M transitions out of t in letter order.
std::vector<Transition> spectral_transition(const FilterSystem& fs, const RationalPoint& t);

struct MuHatEstimate {
    Complex value;
    /// |1 - m_B((R^T)^{-depth} xi)|: size of the last factor that was kept.
    double last_factor_deviation = 0.0;
    std::size_t depth = 0;
};

inline constexpr std::size_t default_mu_hat_depth = 40;

/// Truncated product prod_{k=1..depth} m_B((R^T)^{-k} xi) for the Fourier transform of mu_B.
/// depth = 0 returns 1.
MuHatEstimate mu_hat_estimate(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth = default_mu_hat_depth);
Complex mu_hat(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth = default_mu_hat_depth);

/// True iff no two distinct digits are congruent modulo R Z^d.
bool check_no_overlap(const FilterSystem& fs);

} // namespace cuntz
