#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace goeritz {

/// Exact Gaussian integer a + b*i with 64-bit components.
///
/// Matrix entries in this library are either plain integers (b == 0) or
/// Gaussian integers coming from checkerboard-writhe weights.  All arithmetic
/// is exact; the magnitudes appearing in practice are tiny, but determinant
/// routines still widen to 128 bits internally.
struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussianInt() = default;
  constexpr GaussianInt(std::int64_t r) : re(r), im(0) {}
  constexpr GaussianInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

  constexpr bool is_zero() const { return re == 0 && im == 0; }
  constexpr bool is_real() const { return im == 0; }

  /// True for 1, -1, i, -i.
  constexpr bool is_unit() const {
    return (re * re + im * im) == 1;
  }

  friend constexpr GaussianInt operator+(GaussianInt a, GaussianInt b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend constexpr GaussianInt operator-(GaussianInt a, GaussianInt b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend constexpr GaussianInt operator-(GaussianInt a) { return {-a.re, -a.im}; }
  friend constexpr GaussianInt operator*(GaussianInt a, GaussianInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianInt& operator+=(GaussianInt o) { *this = *this + o; return *this; }
  GaussianInt& operator-=(GaussianInt o) { *this = *this - o; return *this; }

  friend constexpr bool operator==(GaussianInt a, GaussianInt b) {
    return a.re == b.re && a.im == b.im;
  }
  friend constexpr bool operator!=(GaussianInt a, GaussianInt b) { return !(a == b); }
  friend constexpr bool operator<(GaussianInt a, GaussianInt b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  }

  /// Renders "0", "3", "-2", "i", "-i", "2i", "1+2i", "1-i", ...
  std::string str() const {
    if (im == 0) return std::to_string(re);
    std::string imag;
    if (im == 1) imag = "i";
    else if (im == -1) imag = "-i";
    else imag = std::to_string(im) + "i";
    if (re == 0) return imag;
    if (im > 0) return std::to_string(re) + "+" + imag;
    return std::to_string(re) + imag;  // imag already carries the minus sign
  }

  /// Parses the formats produced by str().  Throws std::invalid_argument.
  static GaussianInt parse(const std::string& s);
};

constexpr GaussianInt kImaginaryUnit{0, 1};

}  // namespace goeritz
