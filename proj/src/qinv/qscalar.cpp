#include "qinv/qscalar.hpp"

#include <algorithm>
#include <sstream>

namespace qinv {

void QScalar::check_units(const QScalar& a, const QScalar& b) {
  if (a.unit_ != 0 && b.unit_ != 0 && a.unit_ != b.unit_)
    throw arith_error("QScalar: mixed exponent lattices (" +
                      std::to_string(a.unit_) + " vs " + std::to_string(b.unit_) + ")");
}

Int QScalar::coeff(long e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const auto& t, long x) { return t.first < x; });
  if (it != terms_.end() && it->first == e) return it->second;
  return 0;
}

void QScalar::add_term(long e, const Int& c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const auto& t, long x) { return t.first < x; });
  if (it != terms_.end() && it->first == e) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {e, c});
  }
}

QScalar QScalar::operator+(const QScalar& o) const {
  check_units(*this, o);
  QScalar r(unit_ ? unit_ : o.unit_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j >= o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i >= terms_.size() || o.terms_[j].first < terms_[i].first) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Int c = terms_[i].second + o.terms_[j].second;
      if (c != 0) r.terms_.emplace_back(terms_[i].first, c);
      ++i, ++j;
    }
  }
  return r;
}

QScalar QScalar::operator-(const QScalar& o) const { return *this + (-o); }

QScalar QScalar::operator*(const QScalar& o) const {
  check_units(*this, o);
  QScalar r(unit_ ? unit_ : o.unit_);
  if (terms_.empty() || o.terms_.empty()) return r;
  if (terms_.size() == 1) {
    r.terms_.reserve(o.terms_.size());
    for (auto& [e, c] : o.terms_) r.terms_.emplace_back(e + terms_[0].first, c * terms_[0].second);
    return r;
  }
  if (o.terms_.size() == 1) return o * *this;
  std::map<long, Int> acc;
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) acc[e1 + e2] += c1 * c2;
  for (auto& [e, c] : acc)
    if (c != 0) r.terms_.emplace_back(e, c);
  return r;
}

bool QScalar::operator==(const QScalar& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  if (!terms_.empty()) check_units(*this, o);
  return terms_ == o.terms_;
}

QScalar QScalar::shifted(long e) const {
  QScalar r = *this;
  for (auto& t : r.terms_) t.first += e;
  return r;
}

QScalar QScalar::bar() const {
  QScalar r(unit_);
  r.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    r.terms_.emplace_back(-it->first, it->second);
  return r;
}

bool QScalar::try_divexact(const QScalar& n, const QScalar& d, QScalar& out) {
  check_units(n, d);
  if (d.is_zero()) throw arith_error("QScalar: division by zero");
  out = QScalar(n.unit_ ? n.unit_ : d.unit_);
  if (n.is_zero()) return true;
  // Laurent long division from the top over Q; exact iff remainder vanishes.
  // For an exact quotient, exponents lie in [n.min-d.min, n.max-d.max].
  const long qmin = n.min_exp() - d.min_exp();
  const long dtop = d.terms_.back().first;
  const Rat dlead(d.terms_.back().second);
  std::map<long, Rat> rem;
  for (auto& [e, c] : n.terms_) rem[e] = Rat(c);
  std::map<long, Rat> quo;
  while (!rem.empty()) {
    auto top = std::prev(rem.end());
    long qe = top->first - dtop;
    if (qe < qmin) return false;
    Rat f = top->second / dlead;
    quo[qe] += f;
    for (auto& [de, dc] : d.terms_) {
      long e = de + qe;
      Rat& r = rem[e];
      r -= f * Rat(dc);
      if (r == 0) rem.erase(e);
    }
  }
  for (auto& [e, c] : quo) {
    if (c == 0) continue;
    if (c.get_den() != 1) return false;
    out.terms_.emplace_back(e, c.get_num());
  }
  return true;
}

QScalar QScalar::divexact(const QScalar& d) const {
  QScalar out;
  if (!try_divexact(*this, d, out)) throw arith_error("QScalar: inexact division");
  return out;
}

Int QScalar::content() const {
  Int g = 0;
  for (auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

QScalar QScalar::rescaled(int new_unit, long k) const {
  QScalar r(new_unit);
  r.terms_.reserve(terms_.size());
  if (k >= 0) {
    for (auto& [e, c] : terms_) r.terms_.emplace_back(e * k, c);
  } else {
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
      r.terms_.emplace_back(it->first * k, it->second);
  }
  return r;
}

size_t QScalar::hash() const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto& [e, c] : terms_) {
    mix((size_t)e);
    mix(mpz_get_ui(c.get_mpz_t()));
    mix((size_t)mpz_sgn(c.get_mpz_t()));
  }
  return h;
}

std::string QScalar::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (!first && c > 0) os << "+";
    first = false;
    if (e == 0) {
      os << c;
      continue;
    }
    if (c == -1)
      os << "-";
    else if (c != 1)
      os << c << "*";
    os << "q";
    if (unit_ == 0 || e != unit_) {
      os << "^";
      if (unit_ != 0 && e % unit_ == 0)
        os << (e / unit_);
      else
        os << "(" << e << "/" << unit_ << ")";
    }
  }
  return os.str();
}

void QRational::reduce() {
  if (num_.is_zero()) {
    den_ = QScalar::integer(1);
    return;
  }
  if (den_.is_one()) return;
  // cancel the monomial q-power of the denominator
  long dmin = den_.min_exp();
  if (dmin != 0) {
    den_ = den_.shifted(-dmin);
    num_ = num_.shifted(-dmin);
  }
  // attempt a full collapse
  QScalar q;
  if (QScalar::try_divexact(num_, den_, q)) {
    num_ = q;
    den_ = QScalar::integer(1);
  }
  // cancel integer content
  Int gn = num_.content(), gd = den_.content(), g;
  mpz_gcd(g.get_mpz_t(), gn.get_mpz_t(), gd.get_mpz_t());
  if (g > 1) {
    num_ = num_.divexact(QScalar::integer(g));
    den_ = den_.divexact(QScalar::integer(g));
  }
  // normalize sign of the leading denominator coefficient
  if (!den_.terms().empty() && den_.terms().back().second < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

QScalar QRational::to_qscalar() const {
  return num_.divexact(den_);
}

QRational QRational::operator+(const QRational& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_.is_one() && o.den_.is_one()) {
    QRational r;
    r.num_ = num_ + o.num_;
    return r;
  }
  if (den_ == o.den_) return QRational(num_ + o.num_, den_);
  return QRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QRational QRational::operator-(const QRational& o) const { return *this + (-o); }

QRational QRational::operator*(const QRational& o) const {
  if (is_zero() || o.is_zero()) return QRational();
  if (den_.is_one() && o.den_.is_one()) {
    QRational r;
    r.num_ = num_ * o.num_;
    return r;
  }
  return QRational(num_ * o.num_, den_ * o.den_);
}

QRational QRational::operator/(const QRational& o) const {
  if (o.is_zero()) throw arith_error("QRational: division by zero");
  if (is_zero()) return QRational();
  return QRational(num_ * o.den_, den_ * o.num_);
}

bool QRational::operator==(const QRational& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

std::string QRational::str() const {
  if (is_laurent()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

QScalar qbracket(int unit, int droot, int n) {
  // v_a^n - v_a^{-n}, v_a = q^{droot/2}: exponents ±n*droot*unit/2
  if (unit % 2 != 0) throw arith_error("qbracket: unit must be even");
  long e = (long)n * droot * (unit / 2);
  QScalar r(unit);
  if (n == 0) return r;
  r.add_term(-e, -1);
  r.add_term(e, 1);
  return r;
}

QScalar qnum(int unit, int droot, int n) {
  // [n]ured = v^{n-1} + v^{n-3} + ... + v^{1-n} in v_a
  QScalar r(unit);
  if (n < 0) throw arith_error("qnum: negative");
  long step = (long)droot * (unit / 2);
  for (int j = 0; j < n; ++j) r.add_term((long)(n - 1 - 2 * j) * step, 1);
  return r;
}

QScalar qnum_fact(int unit, int droot, int n) {
  QScalar r(unit, 1);
  for (int j = 2; j <= n; ++j) r *= qnum(unit, droot, j);
  return r;
}

QScalar qbracket_fact(int unit, int droot, int n) {
  QScalar r(unit, 1);
  for (int j = 1; j <= n; ++j) r *= qbracket(unit, droot, j);
  return r;
}

QScalar qbinom(int unit, int droot, int n, int k) {
  if (k < 0 || k > n) return QScalar(unit);
  QScalar num(unit, 1);
  for (int j = 0; j < k; ++j) num *= qnum(unit, droot, n - j);
  return num.divexact(qnum_fact(unit, droot, k));
}

QScalar qpochhammer(int unit, const QScalar& x, int n) {
  QScalar r(unit, 1);
  QScalar q = QScalar::monomial(unit, unit);
  QScalar xq = x;
  for (int j = 0; j < n; ++j) {
    r *= (QScalar(unit, 1) - xq);
    xq *= q;
  }
  return r;
}

QScalar qpochhammer_qq(int unit, int n) {
  return qpochhammer(unit, QScalar::monomial(unit, unit), n);
}

}  // namespace qinv
