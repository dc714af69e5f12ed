#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "cuntz/model.hpp"
#include "cuntz/numeric.hpp"
#include "cuntz/rational.hpp"
#include "cuntz/walkgraph.hpp"
#include "cuntz/word.hpp"

namespace cuntz {

// --- Fourier side ------------------------------------------------------------

/// weight * e_label, the image V_word e_basepoint.
struct FourierAtom {
    RationalPoint label;
    Complex weight;
    Word word;
    RationalPoint basepoint;
};

/// lambda = l_{w1} + R^T l_{w2} + ... + (R^T)^{n-1} l_{wn} + (R^T)^n c, weight alpha_{w1} ... alpha_{wn}.
/// Needs an alpha-form system and c . b in Z for every digit.
std::vector<FourierAtom> fourier_atoms(const FilterSystem& fs, const RationalPoint& c, const std::vector<Word>& words);

/// Depth-first generation of the atoms of Omega_c^(0) with |w| <= max_length,
/// labels updated incrementally. Words whose weight vanishes are skipped together
/// with all their extensions. `c` is the vertex of `walk` carrying the basepoint.
void visit_fourier_atoms(const FilterSystem& fs, const WalkGraph& walk, std::size_t c, std::size_t max_length,
                         const std::function<void(const FourierAtom&)>& visit,
                         const Tolerances& tol = default_tolerances);

/// Atoms of Omega_c^(0), length-lex ordered.
std::vector<FourierAtom> frame_atoms(const FilterSystem& fs, const WalkGraph& walk, std::size_t c,
                                     std::size_t max_length, const Tolerances& tol = default_tolerances);

/// <atom, e_t> in L^2(mu_B).
Complex fourier_pairing(const FilterSystem& fs, const FourierAtom& atom, const RationalPoint& t,
                        std::size_t depth = default_mu_hat_depth);

// --- Walsh side --------------------------------------------------------------

/// Complex function on [0,1) constant on the cells [j/N^n, (j+1)/N^n).
class StepFunction {
public:
    StepFunction(std::size_t base, std::size_t level, std::vector<Complex> values);
    static StepFunction constant(std::size_t base, Complex value = {1.0, 0.0});

    std::size_t base() const { return base_; }
    std::size_t level() const { return level_; }
    const std::vector<Complex>& values() const { return values_; }
    Complex operator[](std::size_t j) const { return values_[j]; }

    /// Same function on the finer partition of the given level.
    StepFunction lifted(std::size_t level) const;
    /// Lebesgue norm squared, N^{-n} sum |f_j|^2.
    double norm2() const;

private:
    std::size_t base_;
    std::size_t level_;
    std::vector<Complex> values_;
};

/// integral of f conj(g) over [0,1), both lifted to the finer level.
Complex inner(const StepFunction& f, const StepFunction& g);

/// Throws PreconditionError unless the first row is all ones and (1/N) A^* A = I.
void validate_walsh_matrix(const Eigen::MatrixXcd& a, const Tolerances& tol = default_tolerances);

/// (V_k f)(x) = a_{k, floor(Nx)} f(Nx mod 1); raises the level by one.
StepFunction apply_walsh_V(const Eigen::MatrixXcd& a, int k, const StepFunction& f);
/// (V_k^* f)(x) = (1/N) sum_j conj(a_{kj}) f((x + j)/N); needs level >= 1.
StepFunction apply_walsh_Vstar(const Eigen::MatrixXcd& a, int k, const StepFunction& f);

struct WalshAtom {
    Word word;
    StepFunction function;
};

/// V_w 1 for words w not ending in 0, |w| <= max_length, length-lex ordered. The
/// value on cell j is the product of a_{w_k, d_k} over the base-N digits d_1 d_2 ...
/// of j, most significant first.
std::vector<WalshAtom> walsh_atoms(const Eigen::MatrixXcd& a, std::size_t max_length,
                                   const Tolerances& tol = default_tolerances);

// --- l^2(Q) model ------------------------------------------------------------

/// Finitely supported vector of l^2(Q).
using SparseRationalVector = std::map<Rational, Complex>;

double norm2(const SparseRationalVector& v);
/// sum_r u_r conj(v_r)
Complex inner(const SparseRationalVector& u, const SparseRationalVector& v);

/// V_0^* e_r = lambda^0_r e_{r/2}, V_1^* e_r = lambda^1_r e_{(r-1)/2} with
/// lambda^0_0 = 1, lambda^1_0 = 0 and lambda^i_r = 1/sqrt 2 otherwise.
namespace l2q {

double lambda(int letter, const Rational& r);
SparseRationalVector apply_V(int letter, const SparseRationalVector& v);
SparseRationalVector apply_Vstar(int letter, const SparseRationalVector& v);
/// V_w e_0 = V_{w1} ... V_{wn} e_0.
SparseRationalVector apply_word(const Word& w);

} // namespace l2q

/// <e_r, V_w e_0>.
Complex l2q_pairing_at(const Rational& r, const Word& w);
/// <e_{2^m}, V_w e_0>.
Complex l2q_pairing(unsigned m, const Word& w);

} // namespace cuntz
