#pragma once

// Exact integer and rational arithmetic shared by every quatlift module.
//
// All integer work is done in 64-bit signed integers with overflow
// detection; intermediate products go through __int128 so that a
// computation either produces the exact answer or throws.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quatlift {

using Int = std::int64_t;
using Wide = __int128;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact computation left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A mathematical invariant that must hold by construction failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Bad input to a constructor (composite p, p = 2, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration exceeded its configured candidate budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

inline void ensure(bool cond, const char* what) {
  if (!cond) throw InvariantError(what);
}

namespace checked {

inline Int narrow(Wide v) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) throw OverflowError("64-bit overflow");
  return static_cast<Int>(v);
}
inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("64-bit overflow in add");
  return r;
}
inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("64-bit overflow in sub");
  return r;
}
inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit overflow in mul");
  return r;
}

}  // namespace checked

inline Wide wabs(Wide v) { return v < 0 ? -v : v; }

inline Wide wgcd(Wide a, Wide b) {
  a = wabs(a);
  b = wabs(b);
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int gcd(Int a, Int b) { return static_cast<Int>(wgcd(a, b)); }

inline Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked::narrow(wabs(Wide(a) / gcd(a, b) * b));
}

/// Floor division (rounds toward negative infinity).
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Non-negative residue of a modulo m > 0.
inline Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

/// Extended gcd: returns g and sets x, y with a*x + b*y = g.
inline Int xgcd(Int a, Int b, Int& x, Int& y) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = floor_div(a, b);
    Int r = a - q * b;
    a = b;
    b = r;
    Int t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

/// Inverse of a modulo m (gcd(a, m) must be 1).
inline Int inverse_mod(Int a, Int m) {
  Int x, y;
  if (xgcd(mod(a, m), m, x, y) != 1) throw std::invalid_argument("inverse_mod: not invertible");
  return mod(x, m);
}

inline Int ipow(Int base, unsigned e) {
  Int r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked::mul(r, base);
  return r;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Int n, Int p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Primes up to and including n.
inline std::vector<Int> primes_up_to(Int n) {
  std::vector<Int> out;
  if (n < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
  for (Int i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (Int j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

/// Prime factorization as (prime, exponent) pairs, primes increasing.
inline std::vector<std::pair<Int, int>> factor(Int n) {
  std::vector<std::pair<Int, int>> out;
  if (n < 0) n = -n;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Exact integer square root, or -1 when n is not a perfect square.
inline Int exact_sqrt(Int n) {
  if (n < 0) return -1;
  Int r = static_cast<Int>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r > 0 && Wide(r) * r > n) --r;
  while (Wide(r + 1) * (r + 1) <= n) ++r;
  return Wide(r) * r == n ? r : -1;
}

inline Int squarefree_part(Int n) {
  Int sign = n < 0 ? -1 : 1;
  Int out = 1;
  for (auto [q, e] : factor(n))
    if (e % 2 == 1) out *= q;
  return sign * out;
}

/// Kronecker symbol (a | n) for any integer a and n >= 0.
inline int kronecker(Int a, Int n) {
  if (n < 0) throw std::invalid_argument("kronecker: negative modulus");
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n % 2 == 0) {
    if (a % 2 == 0) return 0;
    int v = 0;
    while (n % 2 == 0) {
      n /= 2;
      ++v;
    }
    Int r8 = mod(a, 8);
    if ((v % 2 == 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // n odd now: Jacobi symbol
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      Int r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

inline int legendre(Int a, Int p) { return kronecker(a, p); }

inline bool is_squarefree(Int n) {
  for (auto [q, e] : factor(n))
    if (e > 1) return false;
  return true;
}

/// True when D is the discriminant of a quadratic field.
inline bool is_fundamental_discriminant(Int D) {
  if (D == 0 || D == 1) return false;
  Int r = mod(D, 4);
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  Int m = D / 4;
  Int rm = mod(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

/// Exact rational number with 64-bit numerator and positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(Int n) : num_(n), den_(1) {}  // NOLINT: implicit by intent
  Rational(Int n, Int d) { assign(Wide(n), Wide(d)); }

  static Rational from_wide(Wide n, Wide d) {
    Rational r;
    r.assign(n, d);
    return r;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Int to_integer() const {
    if (den_ != 1) throw InvariantError("rational is not an integer");
    return num_;
  }

  Rational operator-() const { return from_wide(-Wide(num_), den_); }
  Rational abs() const { return num_ < 0 ? -*this : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    Wide l = Wide(a.num_) * b.den_;
    Wide r = Wide(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "num/den", always with an explicit denominator.
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    if (r.den_ == 1) return os << r.num_;
    return os << r.num_ << "/" << r.den_;
  }

 private:
  void assign(Wide n, Wide d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Wide g = wgcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = checked::narrow(n);
    den_ = checked::narrow(d);
  }

  Int num_ = 0;
  Int den_ = 1;
};

/// gcd of two rationals: the positive generator of the Z-module they span.
inline Rational gcd(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b.abs();
  if (b.is_zero()) return a.abs();
  Wide n = wgcd(Wide(a.num()) * b.den(), Wide(b.num()) * a.den());
  return Rational::from_wide(n, Wide(a.den()) * b.den());
}

/// p-adic valuation of a nonzero rational.
inline int valuation(const Rational& r, Int p) {
  return valuation(r.num(), p) - valuation(r.den(), p);
}

}  // namespace quatlift
