#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qinv {

using Int = mpz_class;
using Rat = mpq_class;

struct arith_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse Laurent polynomial with integer coefficients in a fractional power
// of q.  An exponent e stands for q^(e/unit); the lattice unit is 8D for the
// ambient root system, so that v = q^(1/2), v^(1/2) = q^(1/4) and all weight
// pairings land on integer exponents.  Terms are kept sorted by exponent with
// no zero coefficients.
class QScalar {
public:
  QScalar() : unit_(0) {}
  explicit QScalar(int unit) : unit_(unit) {}
  QScalar(int unit, const Int& c) : unit_(unit) {
    if (c != 0) terms_.emplace_back(0, c);
  }

  static QScalar integer(const Int& c) { return QScalar(0, c); }
  // q^(num/unit) * c
  static QScalar monomial(int unit, long num, const Int& c = 1) {
    QScalar r(unit);
    if (c != 0) r.terms_.emplace_back(num, c);
    return r;
  }

  int unit() const { return unit_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
  }
  bool is_integer() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
  }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t num_terms() const { return terms_.size(); }
  const std::vector<std::pair<long, Int>>& terms() const { return terms_; }

  // every exponent is a multiple of unit, i.e. the value lies in Z[q^{±1}]
  bool integral_q() const {
    if (unit_ == 0) return true;
    for (auto& [e, c] : terms_)
      if (e % unit_ != 0) return false;
    return true;
  }

  long min_exp() const { return terms_.empty() ? 0 : terms_.front().first; }
  long max_exp() const { return terms_.empty() ? 0 : terms_.back().first; }

  Int coeff(long e) const;

  QScalar operator-() const {
    QScalar r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  QScalar operator+(const QScalar& o) const;
  QScalar operator-(const QScalar& o) const;
  QScalar operator*(const QScalar& o) const;
  QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
  QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
  QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
  bool operator==(const QScalar& o) const;
  bool operator!=(const QScalar& o) const { return !(*this == o); }

  void add_term(long e, const Int& c);
  QScalar shifted(long e) const;  // multiply by q^(e/unit)

  // q -> q^{-1} (hence v -> v^{-1})
  QScalar bar() const;
  // exact division; throws arith_error when not divisible in Z[q^{±1/unit}]
  QScalar divexact(const QScalar& d) const;
  static bool try_divexact(const QScalar& n, const QScalar& d, QScalar& out);

  // gcd of all integer coefficients (non-negative)
  Int content() const;

  // substitute q^(1/unit) -> q^(k/unit'): exponents scale by k, unit changes
  QScalar rescaled(int new_unit, long k) const;

  size_t hash() const;
  std::string str() const;  // human-readable, q^{e/unit} form

private:
  int unit_;
  std::vector<std::pair<long, Int>> terms_;
  friend class QRational;
  static void check_units(const QScalar& a, const QScalar& b);
};

// Quotient of two QScalars, normalized lightly: zero has denominator 1,
// monomial and integer content is cancelled, and an exact-division collapse
// is attempted so Laurent values keep denominator 1.
class QRational {
public:
  QRational() : num_(), den_(QScalar::integer(1)) {}
  QRational(const QScalar& n) : num_(n), den_(QScalar::integer(1)) { reduce(); }
  QRational(const QScalar& n, const QScalar& d) : num_(n), den_(d) {
    if (den_.is_zero()) throw arith_error("QRational: zero denominator");
    reduce();
  }
  static QRational integer(const Int& c) { return QRational(QScalar::integer(c)); }
  static QRational rational(const Rat& r, int unit) {
    return QRational(QScalar(unit, r.get_num()), QScalar(unit, r.get_den()));
  }

  const QScalar& num() const { return num_; }
  const QScalar& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_laurent() const { return den_.is_integer() && den_.terms()[0].second == 1; }

  // throws when the value is not in Z[q^{±1/unit}]
  QScalar to_qscalar() const;

  QRational operator-() const { return QRational(-num_, den_, 0); }
  QRational operator+(const QRational& o) const;
  QRational operator-(const QRational& o) const;
  QRational operator*(const QRational& o) const;
  QRational operator/(const QRational& o) const;
  QRational& operator+=(const QRational& o) { return *this = *this + o; }
  QRational& operator-=(const QRational& o) { return *this = *this - o; }
  QRational& operator*=(const QRational& o) { return *this = *this * o; }
  QRational& operator/=(const QRational& o) { return *this = *this / o; }
  bool operator==(const QRational& o) const;
  bool operator!=(const QRational& o) const { return !(*this == o); }

  QRational bar() const { return QRational(num_.bar(), den_.bar()); }

  std::string str() const;

private:
  QRational(const QScalar& n, const QScalar& d, int) : num_(n), den_(d) {}
  void reduce();
  QScalar num_, den_;
};

// q-integers and factorials for a root of squared length 2*droot:
// exponents are in q^(1/unit) units, so v_alpha^k = q^(k*droot/2).
QScalar qnum(int unit, int droot, int n);                    // [n]_alpha
QScalar qnum_fact(int unit, int droot, int n);               // [n]_alpha!
QScalar qbracket(int unit, int droot, int n);                // {n}_alpha = v_a^n - v_a^{-n}
QScalar qbracket_fact(int unit, int droot, int n);           // {n}_alpha!
QScalar qbinom(int unit, int droot, int n, int k);           // [n choose k]_alpha
QScalar qpochhammer(int unit, const QScalar& x, int n);      // (x;q)_n
QScalar qpochhammer_qq(int unit, int n);                     // (q;q)_n

}  // namespace qinv
