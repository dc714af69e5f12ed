#include "cuntz/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cuntz/error.hpp"

namespace cuntz {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole)
{
    s = trim(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty())
        throw InputError("malformed rational '" + std::string(whole) + "'");
    BigInt value = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw InputError("malformed rational '" + std::string(whole) + "'");
        value = value * 10 + (ch - '0');
    }
    return negative ? BigInt(-value) : value;
}

} // namespace

Rational floor_rational(const Rational& q)
{
    BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt quotient = num / den; // truncates toward zero
    if (num < 0 && quotient * den != num)
        quotient -= 1;
    return Rational(quotient);
}

Rational fractional_part(const Rational& q) { return q - floor_rational(q); }

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

std::string to_string(const Rational& q)
{
    std::ostringstream out;
    out << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1)
        out << '/' << boost::multiprecision::denominator(q);
    return out.str();
}

Rational parse_rational(std::string_view text)
{
    const std::string_view s = trim(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(s.substr(0, slash), text);
        const BigInt den = parse_integer(s.substr(slash + 1), text);
        if (den == 0)
            throw InputError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        const std::string_view frac = s.substr(dot + 1);
        digits.append(frac);
        if (digits == "-" || digits == "+" || digits.empty())
            throw InputError("malformed rational '" + std::string(text) + "'");
        BigInt den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            den *= 10;
        return Rational(parse_integer(digits, text), den);
    }
    return Rational(parse_integer(s, text));
}

Complex unit_phase(const Rational& q)
{
    const Rational f = fractional_part(q);
    const Rational quarters = f * 4;
    if (is_integer(quarters)) {
        switch (static_cast<int>(boost::multiprecision::numerator(quarters))) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * f.convert_to<double>();
    return {std::cos(angle), std::sin(angle)};
}

// --- RationalPoint ---------------------------------------------------------

RationalPoint RationalPoint::zero(std::size_t dim) { return RationalPoint(std::vector<Rational>(dim)); }

RationalPoint RationalPoint::from_integers(std::span<const std::int64_t> values)
{
    std::vector<Rational> coords;
    coords.reserve(values.size());
    for (auto v : values)
        coords.emplace_back(v);
    return RationalPoint(std::move(coords));
}

RationalPoint RationalPoint::parse(std::string_view text)
{
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '(' && s.back() == ')') {
        s.remove_prefix(1);
        s.remove_suffix(1);
    }
    std::vector<Rational> coords;
    while (true) {
        const auto comma = s.find(',');
        coords.push_back(parse_rational(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return RationalPoint(std::move(coords));
}

bool RationalPoint::is_integral() const
{
    for (const auto& c : coords_)
        if (!is_integer(c))
            return false;
    return true;
}

bool RationalPoint::is_zero() const
{
    for (const auto& c : coords_)
        if (c != 0)
            return false;
    return true;
}

std::vector<double> RationalPoint::to_double() const
{
    std::vector<double> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_)
        out.push_back(c.convert_to<double>());
    return out;
}

std::string RationalPoint::to_string() const
{
    if (coords_.size() == 1)
        return cuntz::to_string(coords_[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i)
            out += ", ";
        out += cuntz::to_string(coords_[i]);
    }
    return out + ")";
}

RationalPoint& RationalPoint::operator+=(const RationalPoint& other)
{
    if (other.dim() != dim())
        throw InputError("dimension mismatch in point addition");
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] += other.coords_[i];
    return *this;
}

RationalPoint& RationalPoint::operator-=(const RationalPoint& other)
{
    if (other.dim() != dim())
        throw InputError("dimension mismatch in point subtraction");
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] -= other.coords_[i];
    return *this;
}

RationalPoint operator*(const Rational& s, RationalPoint p)
{
    for (auto& c : p.coords_)
        c *= s;
    return p;
}

bool operator<(const RationalPoint& a, const RationalPoint& b)
{
    const std::size_t n = std::min(a.dim(), b.dim());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coords_[i] < b.coords_[i])
            return true;
        if (b.coords_[i] < a.coords_[i])
            return false;
    }
    return a.dim() < b.dim();
}

Rational dot(std::span<const std::int64_t> b, const RationalPoint& t)
{
    if (b.size() != t.dim())
        throw InputError("dimension mismatch in dot product");
    Rational sum = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0)
            sum += t[i] * b[i];
    return sum;
}

// --- IntMatrix -------------------------------------------------------------

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows)
{
    if (rows.empty())
        return {};
    IntMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw InputError("ragged integer matrix");
        for (std::size_t c = 0; c < m.cols(); ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

IntVector IntMatrix::row(std::size_t r) const
{
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalPoint IntMatrix::apply(const RationalPoint& x) const
{
    if (x.dim() != cols_)
        throw InputError("dimension mismatch in matrix-vector product");
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c) != 0)
                out[r] += x[c] * (*this)(r, c);
    return RationalPoint(std::move(out));
}

// --- RationalMatrix --------------------------------------------------------

RationalMatrix::RationalMatrix(const IntMatrix& m) : RationalMatrix(m.rows(), m.cols())
{
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(r, c) = m(r, c);
}

RationalPoint RationalMatrix::apply(const RationalPoint& x) const
{
    if (x.dim() != cols_)
        throw InputError("dimension mismatch in matrix-vector product");
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const Rational& a = (*this)(r, c);
            if (a != 0)
                out[r] += a * x[c];
        }
    return RationalPoint(std::move(out));
}

RationalMatrix RationalMatrix::inverse() const
{
    if (rows_ != cols_)
        throw PreconditionError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    RationalMatrix work = *this;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        inv(i, i) = 1;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && work(pivot, col) == 0)
            ++pivot;
        if (pivot == n)
            throw PreconditionError("matrix is singular");
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work(pivot, c), work(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Rational scale = work(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            work(col, c) /= scale;
            inv(col, c) /= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || work(r, col) == 0)
                continue;
            const Rational factor = work(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                work(r, c) -= factor * work(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

} // namespace cuntz
