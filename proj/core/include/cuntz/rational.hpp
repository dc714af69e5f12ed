#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cuntz/numeric.hpp"

namespace cuntz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<std::int64_t>;

Rational floor_rational(const Rational& q);
/// q - floor(q), in [0, 1).
Rational fractional_part(const Rational& q);
bool is_integer(const Rational& q);
std::string to_string(const Rational& q);
/// Parses "p", "p/q" or a finite decimal such as "-0.25".
Rational parse_rational(std::string_view text);

/// e^{2 pi i q}. Quarter turns are returned exactly.
Complex unit_phase(const Rational& q);

/// Exact point of Q^d. Coordinates are always stored in lowest terms.
class RationalPoint {
public:
    RationalPoint() = default;
    explicit RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {}

    static RationalPoint zero(std::size_t dim);
    static RationalPoint from_integers(std::span<const std::int64_t> values);
    /// Comma separated coordinates, optionally wrapped in parentheses: "(-1/2, 3)".
    static RationalPoint parse(std::string_view text);

    std::size_t dim() const { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    Rational& operator[](std::size_t i) { return coords_[i]; }
    std::span<const Rational> coords() const { return coords_; }

    bool is_integral() const;
    bool is_zero() const;
    std::vector<double> to_double() const;
    /// "-4" in dimension one, "(-4, 0)" otherwise.
    std::string to_string() const;

    RationalPoint& operator+=(const RationalPoint& other);
    RationalPoint& operator-=(const RationalPoint& other);
    friend RationalPoint operator+(RationalPoint a, const RationalPoint& b) { return a += b; }
    friend RationalPoint operator-(RationalPoint a, const RationalPoint& b) { return a -= b; }
    friend RationalPoint operator*(const Rational& s, RationalPoint p);

    friend bool operator==(const RationalPoint& a, const RationalPoint& b) { return a.coords_ == b.coords_; }
    friend bool operator!=(const RationalPoint& a, const RationalPoint& b) { return !(a == b); }
    /// Lexicographic order on coordinates.
    friend bool operator<(const RationalPoint& a, const RationalPoint& b);

private:
    std::vector<Rational> coords_;
};

/// b . t for an integer vector b.
Rational dot(std::span<const std::int64_t> b, const RationalPoint& t);

/// Dense integer matrix, row major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    IntMatrix transpose() const;
    IntVector row(std::size_t r) const;
    RationalPoint apply(const RationalPoint& x) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

/// Dense rational matrix, row major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit RationalMatrix(const IntMatrix& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    RationalPoint apply(const RationalPoint& x) const;
    /// Gauss-Jordan inverse; throws PreconditionError when singular.
    RationalMatrix inverse() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

} // namespace cuntz
