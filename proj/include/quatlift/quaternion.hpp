#pragma once

// Exact arithmetic in a definite rational quaternion algebra H(a, b):
// i^2 = a, j^2 = b, k = ij = -ji, with a, b < 0.

#include <array>
#include <cctype>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "quatlift/arith.hpp"
#include "quatlift/matrix.hpp"

namespace quatlift {

struct QuaternionAlgebra {
  Int a = -1;
  Int b = -1;

  friend bool operator==(const QuaternionAlgebra&, const QuaternionAlgebra&) = default;
};

/// Hilbert symbol (a, b)_q at a finite prime q.
inline int hilbert_symbol(Int a, Int b, Int q) {
  int alpha = valuation(a, q), beta = valuation(b, q);
  Int u = a / ipow(q, static_cast<unsigned>(alpha));
  Int v = b / ipow(q, static_cast<unsigned>(beta));
  if (q != 2) {
    int s = 1;
    if ((alpha * beta) % 2 == 1 && (q % 4 == 3)) s = -s;
    if (beta % 2 == 1) s *= legendre(u, q);
    if (alpha % 2 == 1) s *= legendre(v, q);
    return s;
  }
  auto eps = [](Int x) { return static_cast<int>(mod((mod(x, 4) - 1) / 2, 2)); };
  auto omega = [](Int x) {
    Int r = mod(x, 8);
    return (r == 3 || r == 5) ? 1 : 0;
  };
  int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
  return e % 2 == 0 ? 1 : -1;
}

/// Finite primes at which H(a, b) ramifies (the infinite place ramifies
/// exactly when a, b < 0).
inline std::set<Int> ramified_primes(const QuaternionAlgebra& alg) {
  std::set<Int> out;
  std::set<Int> candidates{2};
  for (auto [q, e] : factor(alg.a)) candidates.insert(q);
  for (auto [q, e] : factor(alg.b)) candidates.insert(q);
  for (Int q : candidates)
    if (hilbert_symbol(alg.a, alg.b, q) == -1) out.insert(q);
  return out;
}

/// Element (c0 + c1 i + c2 j + c3 k) / den, stored with gcd(c, den) = 1.
class QuatElement {
 public:
  QuatElement() = default;
  QuatElement(const QuaternionAlgebra& alg, IntVec<4> coords, Int den = 1)
      : alg_(alg), c_(coords), den_(den) {
    normalize();
  }
  static QuatElement scalar(const QuaternionAlgebra& alg, const Rational& r) {
    return QuatElement(alg, {r.num(), 0, 0, 0}, r.den());
  }

  const QuaternionAlgebra& algebra() const { return alg_; }
  const IntVec<4>& coords() const { return c_; }
  Int den() const { return den_; }
  Rational coord(std::size_t i) const { return Rational(c_[i], den_); }
  bool is_zero() const { return c_ == IntVec<4>{}; }
  bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

  QuatElement conj() const { return QuatElement(alg_, {c_[0], -c_[1], -c_[2], -c_[3]}, den_); }

  Rational trace() const { return Rational(checked::mul(2, c_[0]), den_); }

  Rational norm() const {
    Wide n = Wide(c_[0]) * c_[0] - Wide(alg_.a) * c_[1] * c_[1] - Wide(alg_.b) * c_[2] * c_[2] +
             Wide(alg_.a) * alg_.b * c_[3] * c_[3];
    return Rational::from_wide(n, Wide(den_) * den_);
  }

  /// Discriminant of the characteristic polynomial, tr^2 - 4N.
  Rational delta() const {
    Rational t = trace();
    return t * t - Rational(4) * norm();
  }

  QuatElement inverse() const {
    Rational n = norm();
    if (n.is_zero()) throw std::domain_error("inverse of zero quaternion");
    return conj() * (Rational(1) / n);
  }

  friend QuatElement operator+(const QuatElement& x, const QuatElement& y) {
    check_same(x, y);
    Int d = lcm(x.den_, y.den_);
    Int fx = d / x.den_, fy = d / y.den_;
    IntVec<4> c{};
    for (std::size_t i = 0; i < 4; ++i)
      c[i] = checked::add(checked::mul(x.c_[i], fx), checked::mul(y.c_[i], fy));
    return QuatElement(x.alg_, c, d);
  }
  friend QuatElement operator-(const QuatElement& x, const QuatElement& y) { return x + (-y); }
  QuatElement operator-() const { return QuatElement(alg_, {-c_[0], -c_[1], -c_[2], -c_[3]}, den_); }

  friend QuatElement operator*(const QuatElement& x, const QuatElement& y) {
    check_same(x, y);
    const Wide a = x.alg_.a, b = x.alg_.b;
    const auto& p = x.c_;
    const auto& q = y.c_;
    Wide c0 = Wide(p[0]) * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3];
    Wide c1 = Wide(p[0]) * q[1] + Wide(p[1]) * q[0] - b * p[2] * q[3] + b * p[3] * q[2];
    Wide c2 = Wide(p[0]) * q[2] + Wide(p[2]) * q[0] + a * p[1] * q[3] - a * p[3] * q[1];
    Wide c3 = Wide(p[0]) * q[3] + Wide(p[3]) * q[0] + Wide(p[1]) * q[2] - Wide(p[2]) * q[1];
    Wide d = Wide(x.den_) * y.den_;
    Wide g = wgcd(wgcd(wgcd(c0, c1), wgcd(c2, c3)), d);
    if (g > 1) {
      c0 /= g;
      c1 /= g;
      c2 /= g;
      c3 /= g;
      d /= g;
    }
    return QuatElement(x.alg_,
                       {checked::narrow(c0), checked::narrow(c1), checked::narrow(c2), checked::narrow(c3)},
                       checked::narrow(d));
  }
  friend QuatElement operator*(const QuatElement& x, const Rational& r) {
    IntVec<4> c{};
    for (std::size_t i = 0; i < 4; ++i) c[i] = checked::mul(x.c_[i], r.num());
    return QuatElement(x.alg_, c, checked::mul(x.den_, r.den()));
  }
  friend QuatElement operator*(const Rational& r, const QuatElement& x) { return x * r; }

  friend bool operator==(const QuatElement&, const QuatElement&) = default;

  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const QuatElement& x) {
    static constexpr const char* units[4] = {"", "i", "j", "k"};
    std::ostringstream body;
    bool first = true;
    for (std::size_t i = 0; i < 4; ++i) {
      Int v = x.c_[i];
      if (v == 0) continue;
      if (!first) body << (v > 0 ? "+" : "-");
      else if (v < 0) body << "-";
      Int av = v < 0 ? -v : v;
      if (av != 1 || i == 0) body << av;
      body << units[i];
      first = false;
    }
    if (first) body << "0";
    if (x.den_ == 1) return os << body.str();
    return os << "(" << body.str() << ")/" << x.den_;
  }

 private:
  static void check_same(const QuatElement& x, const QuatElement& y) {
    if (!(x.alg_ == y.alg_)) throw std::invalid_argument("quaternions from different algebras");
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
      den_ = -den_;
      for (auto& x : c_) x = -x;
    }
    Int g = den_;
    for (Int x : c_) g = gcd(g, x);
    if (g > 1) {
      den_ /= g;
      for (auto& x : c_) x /= g;
    }
  }

  QuaternionAlgebra alg_{};
  IntVec<4> c_{};
  Int den_ = 1;
};

/// Parses expressions such as "7", "4+i", "(7+j)/2", "(1+7i+5j+k)/2".
inline QuatElement parse_element(const QuaternionAlgebra& alg, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  Int den = 1;
  std::string body = s;
  if (!s.empty() && s.front() == '(') {
    auto close = s.find(')');
    if (close == std::string::npos) throw std::invalid_argument("unbalanced parenthesis: " + s);
    body = s.substr(1, close - 1);
    std::string rest = s.substr(close + 1);
    if (!rest.empty()) {
      if (rest.front() != '/') throw std::invalid_argument("expected '/': " + s);
      den = std::stoll(rest.substr(1));
    }
  }
  IntVec<4> c{};
  std::size_t pos = 0;
  while (pos < body.size()) {
    int sign = 1;
    if (body[pos] == '+' || body[pos] == '-') {
      sign = body[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t start = pos;
    while (pos < body.size() && std::isdigit(static_cast<unsigned char>(body[pos]))) ++pos;
    Int coeff = pos > start ? std::stoll(body.substr(start, pos - start)) : 1;
    std::size_t slot = 0;
    if (pos < body.size() && (body[pos] == 'i' || body[pos] == 'j' || body[pos] == 'k')) {
      slot = body[pos] == 'i' ? 1 : body[pos] == 'j' ? 2 : 3;
      ++pos;
    } else if (pos == start) {
      throw std::invalid_argument("malformed quaternion: " + std::string(text));
    }
    c[slot] += sign * coeff;
  }
  return QuatElement(alg, c, den);
}

}  // namespace quatlift
