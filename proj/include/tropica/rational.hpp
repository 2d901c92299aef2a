#pragma once

// Exact scalars of the max-plus semifield: arbitrary-precision rationals
// extended with a bottom element -inf that is neutral for max and absorbing
// for addition. No floating point anywhere.

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tropica/errors.hpp"

namespace tropica {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline std::string rat_string(const Rat& r) { return r.str(); }

// Parses ["-"] digits ["/" digits]; denominator must be positive.
inline Rat parse_rational(const std::string& text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && text[i] == '-') {
    neg = true;
    ++i;
  }
  std::size_t num_begin = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == num_begin) throw Error("malformed rational '" + text + "'");
  Int num(text.substr(num_begin, i - num_begin));
  Int den(1);
  if (i < text.size() && text[i] == '/') {
    ++i;
    std::size_t den_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin) throw Error("malformed rational '" + text + "'");
    den = Int(text.substr(den_begin, i - den_begin));
    if (den == 0) throw Error("zero denominator in '" + text + "'");
  }
  if (i != text.size()) throw Error("malformed rational '" + text + "'");
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

inline Int rat_floor(const Rat& r) {
  Int q = numerator(r) / denominator(r);
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

// A rational or the bottom element; total order puts -inf below everything.
class ExtRational {
 public:
  ExtRational() : bottom_(false), v_(0) {}
  ExtRational(Rat v) : bottom_(false), v_(std::move(v)) {}
  ExtRational(int v) : bottom_(false), v_(v) {}
  ExtRational(long long v) : bottom_(false), v_(v) {}

  static ExtRational neg_inf() {
    ExtRational r;
    r.bottom_ = true;
    return r;
  }

  bool is_bottom() const { return bottom_; }

  const Rat& value() const {
    if (bottom_) throw Error("no finite value: -inf");
    return v_;
  }

  std::string str() const { return bottom_ ? "-inf" : v_.str(); }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.v_ == b.v_;
  }
  friend bool operator!=(const ExtRational& a, const ExtRational& b) {
    return !(a == b);
  }
  friend bool operator<(const ExtRational& a, const ExtRational& b) {
    if (a.bottom_) return !b.bottom_;
    if (b.bottom_) return false;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtRational& a, const ExtRational& b) {
    return a < b || a == b;
  }
  friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
  friend bool operator>=(const ExtRational& a, const ExtRational& b) { return b <= a; }

 private:
  bool bottom_;
  Rat v_;
};

// Tropical addition: max, with -inf neutral.
inline ExtRational t_add(const ExtRational& a, const ExtRational& b) {
  return a < b ? b : a;
}

// Tropical multiplication: classical sum, with -inf absorbing.
inline ExtRational t_mul(const ExtRational& a, const ExtRational& b) {
  if (a.is_bottom() || b.is_bottom()) return ExtRational::neg_inf();
  return ExtRational(Rat(a.value() + b.value()));
}

// Tropical multiplicative inverse: classical negation. -inf has none.
inline ExtRational t_inv(const ExtRational& a) {
  if (a.is_bottom()) throw InversionOfBottom();
  return ExtRational(Rat(-a.value()));
}

inline std::string point_string(const std::vector<Rat>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += rat_string(x[i]);
  }
  return s + ")";
}

}  // namespace tropica
