#include "cuntz/frames.hpp"

#include <algorithm>
#include <cmath>

#include "cuntz/error.hpp"

namespace cuntz {

namespace {

std::vector<Complex> require_alpha(const FilterSystem& fs)
{
    auto alpha = fs.alpha();
    if (!alpha)
        throw PreconditionError("Fourier atoms need coefficients a_{i,b} independent of the digit b");
    return *alpha;
}

void require_extreme(const FilterSystem& fs, const RationalPoint& c)
{
    if (c.dim() != fs.dim())
        throw InputError("basepoint " + c.to_string() + " has the wrong dimension");
    if (!is_integral_for_digits(fs.ifs().digits(), c))
        throw PreconditionError("basepoint " + c.to_string() + " is not integral on the digits (c . b not in Z)");
}

std::size_t ipow(std::size_t base, std::size_t exp)
{
    std::size_t out = 1;
    while (exp--)
        out *= base;
    return out;
}

} // namespace

std::vector<FourierAtom> fourier_atoms(const FilterSystem& fs, const RationalPoint& c, const std::vector<Word>& words)
{
    const auto alpha = require_alpha(fs);
    require_extreme(fs, c);
    const IntMatrix rt = fs.ifs().scaling().transpose();

    std::vector<FourierAtom> out;
    out.reserve(words.size());
    for (const auto& w : words) {
        if (!w.empty() && w.max_letter() >= static_cast<Letter>(fs.filter_count()))
            throw InputError("word '" + w.display() + "' uses letters outside the alphabet");
        RationalPoint label = c;
        Complex weight{1.0, 0.0};
        for (std::size_t k = w.size(); k-- > 0;) {
            const auto i = static_cast<std::size_t>(w[k]);
            label = RationalPoint::from_integers(fs.frequencies()[i]) + rt.apply(label);
            weight *= alpha[i];
        }
        out.push_back({std::move(label), weight, w, c});
    }
    return out;
}

void visit_fourier_atoms(const FilterSystem& fs, const WalkGraph& walk, std::size_t c, std::size_t max_length,
                         const std::function<void(const FourierAtom&)>& visit, const Tolerances& tol)
{
    const auto alpha = require_alpha(fs);
    if (c >= walk.vertex_count() || !walk.vertex(c).point)
        throw PreconditionError("walk vertex has no spectral point");
    if (walk.alphabet_size() != fs.filter_count())
        throw PreconditionError("walk and filter system have different alphabets");
    const RationalPoint base = *walk.vertex(c).point;
    require_extreme(fs, base);

    // lpow[n][i] = (R^T)^n l_i, cpow[n] = (R^T)^n c
    const IntMatrix rt = fs.ifs().scaling().transpose();
    std::vector<std::vector<RationalPoint>> lpow(max_length + 1);
    std::vector<RationalPoint> cpow{base};
    for (const auto& l : fs.frequencies())
        lpow[0].push_back(RationalPoint::from_integers(l));
    for (std::size_t n = 1; n <= max_length; ++n) {
        for (const auto& v : lpow[n - 1])
            lpow[n].push_back(rt.apply(v));
        cpow.push_back(rt.apply(cpow.back()));
    }

    std::vector<RationalPoint> partial(max_length + 1, RationalPoint::zero(fs.dim()));
    std::vector<Complex> weight(max_length + 1, Complex{1.0, 0.0});
    FourierAtom atom;
    atom.basepoint = base;
    visit_word_tree(walk, c, max_length, [&](const Word& w, bool in_frame) {
        const std::size_t n = w.size();
        if (n > 0) {
            const auto i = static_cast<std::size_t>(w[n - 1]);
            weight[n] = weight[n - 1] * alpha[i];
            if (std::abs(weight[n]) <= tol.zero)
                return false;
            partial[n] = partial[n - 1] + lpow[n - 1][i];
        }
        if (in_frame) {
            atom.label = partial[n] + cpow[n];
            atom.weight = weight[n];
            atom.word = w;
            visit(atom);
        }
        return true;
    }, tol);
}

std::vector<FourierAtom> frame_atoms(const FilterSystem& fs, const WalkGraph& walk, std::size_t c,
                                     std::size_t max_length, const Tolerances& tol)
{
    std::vector<FourierAtom> out;
    visit_fourier_atoms(fs, walk, c, max_length, [&](const FourierAtom& a) { out.push_back(a); }, tol);
    std::stable_sort(out.begin(), out.end(),
                     [](const FourierAtom& a, const FourierAtom& b) { return LengthLexLess{}(a.word, b.word); });
    return out;
}

Complex fourier_pairing(const FilterSystem& fs, const FourierAtom& atom, const RationalPoint& t, std::size_t depth)
{
    return atom.weight * mu_hat(fs, atom.label - t, depth);
}

// --- StepFunction ------------------------------------------------------------

StepFunction::StepFunction(std::size_t base, std::size_t level, std::vector<Complex> values)
    : base_(base), level_(level), values_(std::move(values))
{
    if (base_ < 2)
        throw InputError("step function base must be at least 2");
    if (values_.size() != ipow(base_, level_))
        throw InputError("step function of level " + std::to_string(level_) + " needs " +
                         std::to_string(ipow(base_, level_)) + " values, got " + std::to_string(values_.size()));
}

StepFunction StepFunction::constant(std::size_t base, Complex value) { return StepFunction(base, 0, {value}); }

StepFunction StepFunction::lifted(std::size_t level) const
{
    if (level < level_)
        throw PreconditionError("cannot lift a step function to a coarser level");
    const std::size_t rep = ipow(base_, level - level_);
    std::vector<Complex> out;
    out.reserve(values_.size() * rep);
    for (const auto& v : values_)
        out.insert(out.end(), rep, v);
    return StepFunction(base_, level, std::move(out));
}

double StepFunction::norm2() const
{
    double sum = 0.0;
    for (const auto& v : values_)
        sum += std::norm(v);
    return sum / static_cast<double>(values_.size());
}

Complex inner(const StepFunction& f, const StepFunction& g)
{
    if (f.base() != g.base())
        throw InputError("step functions have different bases");
    const std::size_t level = std::max(f.level(), g.level());
    const StepFunction ff = f.lifted(level);
    const StepFunction gg = g.lifted(level);
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < ff.values().size(); ++j)
        sum += ff[j] * std::conj(gg[j]);
    return sum / static_cast<double>(ff.values().size());
}

void validate_walsh_matrix(const Eigen::MatrixXcd& a, const Tolerances& tol)
{
    if (a.rows() < 1 || a.cols() < 2)
        throw PreconditionError("Walsh matrix needs at least one row and two columns");
    if (!a.allFinite())
        throw PreconditionError("Walsh matrix has non-finite entries");
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (std::abs(a(0, j) - 1.0) > tol.matrix)
            throw PreconditionError("first row of the Walsh matrix must be all ones");
    const auto n = static_cast<double>(a.cols());
    const Eigen::MatrixXcd defect = a.adjoint() * a / n - Eigen::MatrixXcd::Identity(a.cols(), a.cols());
    const double worst = defect.cwiseAbs().maxCoeff();
    if (worst > tol.matrix)
        throw PreconditionError("Walsh matrix fails (1/N) A^* A = I (defect " + std::to_string(worst) + ")");
}

namespace {

void require_letter(const Eigen::MatrixXcd& a, int k, const StepFunction& f)
{
    if (k < 0 || k >= a.rows())
        throw InputError("letter " + std::to_string(k) + " outside the alphabet");
    if (static_cast<Eigen::Index>(f.base()) != a.cols())
        throw InputError("step function base does not match the Walsh matrix");
}

} // namespace

StepFunction apply_walsh_V(const Eigen::MatrixXcd& a, int k, const StepFunction& f)
{
    require_letter(a, k, f);
    const std::size_t n = f.base();
    const std::size_t cells = f.values().size();
    std::vector<Complex> out(cells * n);
    for (std::size_t d = 0; d < n; ++d) {
        const Complex m = a(k, static_cast<Eigen::Index>(d));
        for (std::size_t r = 0; r < cells; ++r)
            out[d * cells + r] = m * f[r];
    }
    return StepFunction(n, f.level() + 1, std::move(out));
}

StepFunction apply_walsh_Vstar(const Eigen::MatrixXcd& a, int k, const StepFunction& f)
{
    require_letter(a, k, f);
    if (f.level() == 0)
        throw PreconditionError("V^* needs a step function of level at least 1");
    const std::size_t n = f.base();
    const std::size_t cells = f.values().size() / n;
    std::vector<Complex> out(cells);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex m = std::conj(a(k, static_cast<Eigen::Index>(j)));
        for (std::size_t r = 0; r < cells; ++r)
            out[r] += m * f[j * cells + r];
    }
    for (auto& v : out)
        v /= static_cast<double>(n);
    return StepFunction(n, f.level() - 1, std::move(out));
}

std::vector<WalshAtom> walsh_atoms(const Eigen::MatrixXcd& a, std::size_t max_length, const Tolerances& tol)
{
    validate_walsh_matrix(a, tol);
    const auto n = static_cast<std::size_t>(a.cols());
    std::vector<WalshAtom> out;
    for (auto& w : enumerate_omega_beta(static_cast<std::size_t>(a.rows()), Word{0}, max_length)) {
        const std::size_t cells = ipow(n, w.size());
        std::vector<Complex> values(cells);
        for (std::size_t j = 0; j < cells; ++j) {
            Complex v{1.0, 0.0};
            std::size_t rest = j;
            for (std::size_t k = w.size(); k-- > 0;) {
                v *= a(w[k], static_cast<Eigen::Index>(rest % n));
                rest /= n;
            }
            values[j] = v;
        }
        StepFunction f(n, w.size(), std::move(values));
        out.push_back({std::move(w), std::move(f)});
    }
    return out;
}

// --- l^2(Q) ------------------------------------------------------------------

double norm2(const SparseRationalVector& v)
{
    double sum = 0.0;
    for (const auto& [r, amp] : v)
        sum += std::norm(amp);
    return sum;
}

Complex inner(const SparseRationalVector& u, const SparseRationalVector& v)
{
    Complex sum{0.0, 0.0};
    for (const auto& [r, amp] : u)
        if (auto it = v.find(r); it != v.end())
            sum += amp * std::conj(it->second);
    return sum;
}

namespace l2q {

namespace {

void require_binary(int letter)
{
    if (letter != 0 && letter != 1)
        throw InputError("the l^2(Q) model has letters 0 and 1 only, got " + std::to_string(letter));
}

} // namespace

double lambda(int letter, const Rational& r)
{
    require_binary(letter);
    if (r == 0)
        return letter == 0 ? 1.0 : 0.0;
    return 1.0 / std::sqrt(2.0);
}

SparseRationalVector apply_V(int letter, const SparseRationalVector& v)
{
    require_binary(letter);
    SparseRationalVector out;
    for (const auto& [r, amp] : v) {
        const Rational h = 2 * r + letter;
        const Complex value = lambda(letter, h) * amp;
        if (value != Complex{})
            out[h] += value;
    }
    return out;
}

SparseRationalVector apply_Vstar(int letter, const SparseRationalVector& v)
{
    require_binary(letter);
    SparseRationalVector out;
    for (const auto& [r, amp] : v) {
        const Complex value = lambda(letter, r) * amp;
        if (value != Complex{})
            out[(r - letter) / 2] += value;
    }
    return out;
}

SparseRationalVector apply_word(const Word& w)
{
    SparseRationalVector v{{Rational(0), Complex{1.0, 0.0}}};
    for (std::size_t k = w.size(); k-- > 0;)
        v = apply_V(w[k], v);
    return v;
}

} // namespace l2q

Complex l2q_pairing_at(const Rational& r, const Word& w)
{
    const auto v = l2q::apply_word(w);
    const auto it = v.find(r);
    return it == v.end() ? Complex{} : std::conj(it->second);
}

Complex l2q_pairing(unsigned m, const Word& w)
{
    return l2q_pairing_at(Rational(BigInt(1) << m), w);
}

} // namespace cuntz
