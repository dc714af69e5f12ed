#include "cuntz/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cuntz/error.hpp"

namespace cuntz {

bool is_expansive(const IntMatrix& scaling)
{
    const auto n = static_cast<Eigen::Index>(scaling.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = static_cast<double>(scaling(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success)
        return false;
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) <= 1.0 + 1e-12)
            return false;
    return true;
}

IFSSpec::IFSSpec(IntMatrix scaling, std::vector<IntVector> digits)
    : scaling_(std::move(scaling)), digits_(std::move(digits))
{
    const std::size_t d = scaling_.rows();
    if (d == 0 || scaling_.cols() != d)
        throw InputError("R must be a nonempty square matrix");
    if (digits_.size() < 2)
        throw InputError("B must contain at least two digits");
    for (const auto& b : digits_)
        if (b.size() != d)
            throw InputError("digit of dimension " + std::to_string(b.size()) + " does not match R (" +
                             std::to_string(d) + ")");
    if (std::set<IntVector>(digits_.begin(), digits_.end()).size() != digits_.size())
        throw InputError("digits in B must be pairwise distinct");
    if (std::none_of(digits_.begin(), digits_.end(),
                     [](const IntVector& b) { return std::all_of(b.begin(), b.end(), [](auto x) { return x == 0; }); }))
        throw InputError("B must contain the zero digit");
    if (!is_expansive(scaling_))
        throw InputError("R is not expansive (some eigenvalue has modulus <= 1)");
    contraction_ = RationalMatrix(scaling_).inverse();
    dual_contraction_ = RationalMatrix(scaling_.transpose()).inverse();
    BigInt den = 1;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(dual_contraction_(r, c)));
    dual_denominator_ = static_cast<std::int64_t>(den);
    dual_numerators_ = IntMatrix(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            dual_numerators_(r, c) =
                static_cast<std::int64_t>(boost::multiprecision::numerator(Rational(dual_contraction_(r, c) * den)));
}

FilterSystem::FilterSystem(IFSSpec ifs, std::vector<IntVector> frequencies, Eigen::MatrixXcd coefficients,
                           std::string name)
    : ifs_(std::move(ifs)), frequencies_(std::move(frequencies)), coefficients_(std::move(coefficients)),
      name_(std::move(name))
{
    if (frequencies_.empty())
        throw InputError("at least one filter frequency l_0 is required");
    for (const auto& l : frequencies_)
        if (l.size() != ifs_.dim())
            throw InputError("frequency of dimension " + std::to_string(l.size()) + " does not match R");
    if (std::any_of(frequencies_.front().begin(), frequencies_.front().end(), [](auto x) { return x != 0; }))
        throw InputError("l_0 must be the zero vector");
    if (static_cast<std::size_t>(coefficients_.rows()) != frequencies_.size() ||
        static_cast<std::size_t>(coefficients_.cols()) != ifs_.digit_count())
        throw InputError("coefficient matrix is " + std::to_string(coefficients_.rows()) + "x" +
                         std::to_string(coefficients_.cols()) + ", expected " + std::to_string(frequencies_.size()) +
                         "x" + std::to_string(ifs_.digit_count()));
    if (!coefficients_.allFinite())
        throw InputError("coefficient matrix has non-finite entries");
}

FilterSystem FilterSystem::from_alpha(IFSSpec ifs, std::vector<IntVector> frequencies, std::span<const Complex> alpha,
                                      std::string name)
{
    if (alpha.size() != frequencies.size())
        throw InputError("alpha has " + std::to_string(alpha.size()) + " entries, expected " +
                         std::to_string(frequencies.size()));
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(alpha.size()), static_cast<Eigen::Index>(ifs.digit_count()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        a.row(i).setConstant(alpha[static_cast<std::size_t>(i)]);
    return FilterSystem(std::move(ifs), std::move(frequencies), std::move(a), std::move(name));
}

std::optional<std::vector<Complex>> FilterSystem::alpha(double tol) const
{
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < coefficients_.rows(); ++i) {
        const Complex first = coefficients_(i, 0);
        for (Eigen::Index b = 1; b < coefficients_.cols(); ++b)
            if (std::abs(coefficients_(i, b) - first) > tol)
                return std::nullopt;
        out.push_back(first);
    }
    return out;
}

std::string to_string(FilterMatrixKind kind)
{
    switch (kind) {
    case FilterMatrixKind::Unitary: return "Unitary";
    case FilterMatrixKind::Isometry: return "Isometry";
    case FilterMatrixKind::Invalid: return "Invalid";
    }
    return "Invalid";
}

Eigen::MatrixXcd filter_matrix(const FilterSystem& fs)
{
    const auto m = static_cast<Eigen::Index>(fs.filter_count());
    const auto n = static_cast<Eigen::Index>(fs.digit_count());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const RationalMatrix& rinv = fs.ifs().contraction();
    Eigen::MatrixXcd u(m, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const RationalPoint rb = rinv.apply(RationalPoint::from_integers(fs.ifs().digits()[static_cast<std::size_t>(b)]));
        for (Eigen::Index i = 0; i < m; ++i)
            u(i, b) = scale * unit_phase(dot(fs.frequencies()[static_cast<std::size_t>(i)], rb)) * fs.coefficients()(i, b);
    }
    return u;
}

FilterMatrixCheck check_filter_matrix(const FilterSystem& fs, const Tolerances& tol)
{
    const Eigen::MatrixXcd u = filter_matrix(fs);
    FilterMatrixCheck out;
    const Eigen::MatrixXcd cols = u.adjoint() * u;
    out.max_column_defect =
        (cols - Eigen::MatrixXcd::Identity(cols.rows(), cols.cols())).cwiseAbs().maxCoeff();
    if (u.rows() == u.cols()) {
        const Eigen::MatrixXcd rows = u * u.adjoint();
        out.max_row_defect = (rows - Eigen::MatrixXcd::Identity(rows.rows(), rows.cols())).cwiseAbs().maxCoeff();
    }
    if (out.max_column_defect >= tol.matrix)
        out.kind = FilterMatrixKind::Invalid;
    else if (u.rows() == u.cols() && out.max_row_defect < tol.matrix)
        out.kind = FilterMatrixKind::Unitary;
    else
        out.kind = FilterMatrixKind::Isometry;
    return out;
}

Complex eval_mB(std::span<const IntVector> digits, const RationalPoint& t)
{
    Complex sum{0.0, 0.0};
    for (const auto& b : digits)
        sum += unit_phase(dot(b, t));
    return sum / static_cast<double>(digits.size());
}

Complex eval_mB(std::span<const IntVector> digits, std::span<const double> t)
{
    Complex sum{0.0, 0.0};
    for (const auto& b : digits) {
        double phase = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k)
            phase += static_cast<double>(b[k]) * t[k];
        const double angle = 2.0 * std::numbers::pi * phase;
        sum += Complex(std::cos(angle), std::sin(angle));
    }
    return sum / static_cast<double>(digits.size());
}

bool is_integral_for_digits(std::span<const IntVector> digits, const RationalPoint& t)
{
    for (const auto& b : digits)
        if (!is_integer(dot(b, t)))
            return false;
    return true;
}

RationalPoint spectral_map(const FilterSystem& fs, int letter, const RationalPoint& t)
{
    if (letter < 0 || static_cast<std::size_t>(letter) >= fs.filter_count())
        throw InputError("letter " + std::to_string(letter) + " outside the alphabet");
    return fs.ifs().dual_contraction().apply(t - RationalPoint::from_integers(fs.frequencies()[static_cast<std::size_t>(letter)]));
}

Complex transition_weight(const FilterSystem& fs, int letter, const RationalPoint& target)
{
    const auto& digits = fs.ifs().digits();
    Complex sum{0.0, 0.0};
    for (std::size_t b = 0; b < digits.size(); ++b)
        sum += unit_phase(dot(digits[b], target)) * std::conj(fs.coefficients()(letter, static_cast<Eigen::Index>(b)));
    return sum / static_cast<double>(digits.size());
}

std::vector<Transition> spectral_transition(const FilterSystem& fs, const RationalPoint& t)
{
    if (t.dim() != fs.dim())
        throw InputError("point " + t.to_string() + " has the wrong dimension");
    std::vector<Transition> out;
    out.reserve(fs.filter_count());
    for (std::size_t i = 0; i < fs.filter_count(); ++i) {
        Transition tr;
        tr.letter = static_cast<int>(i);
        tr.target = spectral_map(fs, tr.letter, t);
        tr.weight = transition_weight(fs, tr.letter, tr.target);
        out.push_back(std::move(tr));
    }
    return out;
}

namespace {

__extension__ typedef __int128 Int128;

Complex quarter_or_phase(Int128 num, Int128 den)
{
    if ((4 * num) % den == 0) {
        switch (static_cast<int>((4 * num) / den)) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(num) / static_cast<double>(den));
    return {std::cos(angle), std::sin(angle)};
}

// y_k = A^k P / (q s^k) with (R^T)^{-1} = A / s and xi = P / q. Phases b . y_k are
// reduced exactly mod 1 in 128-bit integers while the numbers stay small; after that
// y_k is tiny and double precision is accurate. Returns false when the inputs are
// too large for this path.
bool mu_hat_fast(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth, MuHatEstimate& out)
{
    const std::size_t d = fs.dim();
    const std::int64_t small = std::int64_t{1} << 20;
    const IntMatrix& a = fs.ifs().dual_numerators();
    const std::int64_t s = fs.ifs().dual_denominator();
    if (d > 8 || s >= small)
        return false;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            if (std::abs(a(r, c)) >= small)
                return false;
    for (const auto& b : fs.ifs().digits())
        for (auto x : b)
            if (std::abs(x) >= small)
                return false;

    BigInt q = 1;
    for (const auto& x : xi.coords())
        q = boost::multiprecision::lcm(q, boost::multiprecision::denominator(x));
    const BigInt limit = BigInt(1) << 60;
    if (q >= limit)
        return false;
    std::vector<Int128> v(d), next(d);
    for (std::size_t k = 0; k < d; ++k) {
        const BigInt p = boost::multiprecision::numerator(Rational(xi[k] * q));
        if (boost::multiprecision::abs(p) >= limit)
            return false;
        v[k] = static_cast<std::int64_t>(p);
    }
    Int128 den = static_cast<std::int64_t>(q);
    const Int128 stop = Int128{1} << 96;

    const auto n = static_cast<double>(fs.digit_count());
    Complex last{1.0, 0.0};
    std::size_t k = 1;
    for (; k <= depth; ++k) {
        for (std::size_t r = 0; r < d; ++r) {
            next[r] = 0;
            for (std::size_t c = 0; c < d; ++c)
                next[r] += static_cast<Int128>(a(r, c)) * v[c];
        }
        v.swap(next);
        den *= s;
        Complex sum{0.0, 0.0};
        for (const auto& b : fs.ifs().digits()) {
            Int128 m = 0;
            for (std::size_t c = 0; c < d; ++c)
                m += static_cast<Int128>(b[c]) * v[c];
            m %= den;
            if (m < 0)
                m += den;
            sum += quarter_or_phase(m, den);
        }
        last = sum / n;
        out.value *= last;
        bool large = den > stop;
        for (const auto& x : v)
            large = large || x > stop || -x > stop;
        if (large)
            break;
    }
    if (k < depth) {
        Eigen::MatrixXd cm(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        Eigen::VectorXd y(static_cast<Eigen::Index>(d));
        for (std::size_t r = 0; r < d; ++r) {
            y(static_cast<Eigen::Index>(r)) = static_cast<double>(v[r]) / static_cast<double>(den);
            for (std::size_t c = 0; c < d; ++c)
                cm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    static_cast<double>(a(r, c)) / static_cast<double>(s);
        }
        for (++k; k <= depth; ++k) {
            y = cm * y;
            last = eval_mB(fs.ifs().digits(), std::span<const double>(y.data(), d));
            out.value *= last;
        }
    }
    out.last_factor_deviation = std::abs(Complex{1.0, 0.0} - last);
    return true;
}

} // namespace

MuHatEstimate mu_hat_estimate(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth)
{
    if (xi.dim() != fs.dim())
        throw InputError("frequency " + xi.to_string() + " has the wrong dimension");
    MuHatEstimate out{Complex{1.0, 0.0}, 0.0, depth};
    if (depth == 0)
        return out;
    if (mu_hat_fast(fs, xi, depth, out))
        return out;

    const auto& digits = fs.ifs().digits();
    const RationalMatrix& contract = fs.ifs().dual_contraction();

    // Exact iteration while the point is large enough for the phases b.y to need
    // reduction mod 1; afterwards double precision is accurate to rounding.
    RationalPoint y = xi;
    std::size_t k = 1;
    Complex last{1.0, 0.0};
    for (; k <= depth; ++k) {
        y = contract.apply(y);
        last = eval_mB(digits, y);
        out.value *= last;
        bool small = true;
        for (const auto& c : y.coords())
            small = small && boost::multiprecision::abs(c) <= 1;
        if (small)
            break;
    }
    if (k < depth) {
        const auto d = static_cast<Eigen::Index>(fs.dim());
        Eigen::MatrixXd cm(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                cm(r, c) = contract(static_cast<std::size_t>(r), static_cast<std::size_t>(c)).convert_to<double>();
        Eigen::VectorXd yd(d);
        const auto yv = y.to_double();
        for (Eigen::Index r = 0; r < d; ++r)
            yd(r) = yv[static_cast<std::size_t>(r)];
        for (++k; k <= depth; ++k) {
            yd = cm * yd;
            last = eval_mB(digits, std::span<const double>(yd.data(), static_cast<std::size_t>(d)));
            out.value *= last;
        }
    }
    out.last_factor_deviation = std::abs(Complex{1.0, 0.0} - last);
    return out;
}

Complex mu_hat(const FilterSystem& fs, const RationalPoint& xi, std::size_t depth)
{
    return mu_hat_estimate(fs, xi, depth).value;
}

bool check_no_overlap(const FilterSystem& fs)
{
    const auto& digits = fs.ifs().digits();
    const RationalMatrix& rinv = fs.ifs().contraction();
    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j) {
            IntVector diff(digits[i].size());
            for (std::size_t k = 0; k < diff.size(); ++k)
                diff[k] = digits[i][k] - digits[j][k];
            if (rinv.apply(RationalPoint::from_integers(diff)).is_integral())
                return false;
        }
    return true;
}

} // namespace cuntz
