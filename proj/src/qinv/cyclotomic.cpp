#include "qinv/cyclotomic.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace qinv {

ZPoly zp_trim(ZPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

ZPoly zp_add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return zp_trim(r);
}

ZPoly zp_sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return zp_trim(r);
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return zp_trim(r);
}

void zp_divmod(const ZPoly& a, const ZPoly& b, ZPoly& q, ZPoly& r) {
  if (b.empty()) throw arith_error("zp_divmod: zero divisor");
  const Int& lead = b.back();
  if (lead != 1 && lead != -1)
    throw arith_error("zp_divmod: divisor not monic up to sign");
  r = a;
  q.assign(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Int(0));
  while (r.size() >= b.size()) {
    Int f = r.back() * lead;  // lead^{-1} = lead for ±1
    size_t sh = r.size() - b.size();
    q[sh] += f;
    for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= f * b[i];
    r = zp_trim(std::move(r));
    if (r.empty()) break;
  }
  q = zp_trim(std::move(q));
}

long euler_phi(long m) {
  long r = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      r -= r / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) r -= r / m;
  return r;
}

const ZPoly& cyclotomic_poly(long m) {
  static std::map<long, ZPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::function<const ZPoly&(long)> get = [&](long k) -> const ZPoly& {
    auto it2 = cache.find(k);
    if (it2 != cache.end()) return it2->second;
    ZPoly num(k + 1, Int(0));  // x^k - 1
    num[0] = -1;
    num[k] = 1;
    for (long d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      ZPoly q, r;
      zp_divmod(num, get(d), q, r);
      if (!r.empty()) throw arith_error("cyclotomic_poly: inexact division");
      num = q;
    }
    return cache.emplace(k, std::move(num)).first->second;
  };
  return get(m);
}

CyclotomicInt CyclotomicInt::from_poly(long m, const ZPoly& p) {
  CyclotomicInt x(m);
  ZPoly q, r;
  zp_divmod(p, cyclotomic_poly(m), q, r);
  for (size_t i = 0; i < r.size(); ++i) x.c_[i] = r[i];
  return x;
}

CyclotomicInt CyclotomicInt::zeta_power(long m, long k) {
  k %= m;
  if (k < 0) k += m;
  ZPoly p(k + 1, Int(0));
  p[k] = 1;
  return from_poly(m, p);
}

bool CyclotomicInt::is_zero() const {
  for (auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool CyclotomicInt::operator==(const CyclotomicInt& o) const {
  return m_ == o.m_ && c_ == o.c_;
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& o) const {
  if (m_ != o.m_) throw arith_error("CyclotomicInt: mixed orders");
  CyclotomicInt r(m_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& o) const {
  if (m_ != o.m_) throw arith_error("CyclotomicInt: mixed orders");
  CyclotomicInt r(m_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
  if (m_ != o.m_) throw arith_error("CyclotomicInt: mixed orders");
  ZPoly a(c_.begin(), c_.end()), b(o.c_.begin(), o.c_.end());
  return from_poly(m_, zp_mul(zp_trim(std::move(a)), zp_trim(std::move(b))));
}

CyclotomicInt CyclotomicInt::galois(long k) const {
  k %= m_;
  if (k < 0) k += m_;
  if (std::gcd(k, m_) != 1) throw arith_error("galois: exponent not coprime to order");
  ZPoly p;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    long e = (long)(i * (size_t)k % (size_t)m_);
    if ((size_t)e >= p.size()) p.resize(e + 1, Int(0));
    p[e] += c_[i];
  }
  return from_poly(m_, zp_trim(std::move(p)));
}

CyclotomicInt CyclotomicInt::embed(long M) const {
  if (M % m_ != 0) throw arith_error("embed: target order not a multiple");
  long k = M / m_;
  ZPoly p;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    size_t e = i * (size_t)k;
    if (e >= p.size()) p.resize(e + 1, Int(0));
    p[e] += c_[i];
  }
  return from_poly(M, zp_trim(std::move(p)));
}

namespace {
// rational polynomial helpers for inversion mod Phi_m
using QPoly = std::vector<Rat>;

QPoly qp_trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return qp_trim(r);
}

void qp_divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  q.assign(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rat(0));
  while (r.size() >= b.size()) {
    Rat f = r.back() / b.back();
    size_t sh = r.size() - b.size();
    q[sh] += f;
    for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= f * b[i];
    r = qp_trim(std::move(r));
    if (r.empty()) break;
  }
  q = qp_trim(std::move(q));
}
}  // namespace

bool CyclotomicInt::try_divide(const CyclotomicInt& a, const CyclotomicInt& b,
                               CyclotomicInt& out) {
  if (a.m_ != b.m_) throw arith_error("try_divide: mixed orders");
  if (b.is_zero()) throw arith_error("try_divide: division by zero");
  long m = a.m_;
  // invert b mod Phi_m over Q by extended Euclid
  const ZPoly& phi = cyclotomic_poly(m);
  QPoly r0(phi.begin(), phi.end());
  QPoly r1(b.c_.begin(), b.c_.end());
  r1 = qp_trim(std::move(r1));
  QPoly s0 = {}, s1 = {Rat(1)};  // coefficients of b in the combinations
  while (!r1.empty()) {
    QPoly q, r;
    qp_divmod(r0, r1, q, r);
    QPoly s2 = s0;
    QPoly qs1 = qp_mul(q, s1);
    s2.resize(std::max(s2.size(), qs1.size()), Rat(0));
    for (size_t i = 0; i < qs1.size(); ++i) s2[i] -= qs1[i];
    s2 = qp_trim(std::move(s2));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) return false;  // gcd(b, Phi_m) != 1: b is a zero divisor
  // b^{-1} = s0 / r0[0] mod Phi_m
  QPoly inv = s0;
  for (auto& x : inv) x /= r0[0];
  QPoly anum(a.c_.begin(), a.c_.end());
  QPoly prod = qp_mul(qp_trim(std::move(anum)), inv);
  QPoly phiq(phi.begin(), phi.end());
  QPoly q, rr;
  qp_divmod(prod, phiq, q, rr);
  out = CyclotomicInt(m);
  for (size_t i = 0; i < rr.size(); ++i) {
    if (rr[i].get_den() != 1) return false;
    out.c_[i] = rr[i].get_num();
  }
  return true;
}

std::string CyclotomicInt::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    os << c_[i];
  }
  os << "]_zeta" << m_;
  return os.str();
}

CyclotomicInt ev_root(const QScalar& f, long m, long s) {
  CyclotomicInt r(m);
  const long unit = f.unit();
  ZPoly acc;
  for (auto& [e, c] : f.terms()) {
    long num = e * s;
    if (unit != 0) {
      if (num % unit != 0)
        throw arith_error("ev_root: fractional exponent at evaluation");
      num /= unit;
    } else if (e != 0) {
      throw arith_error("ev_root: unitless exponent");
    }
    long k = num % m;
    if (k < 0) k += m;
    if ((size_t)k >= acc.size()) acc.resize(k + 1, Int(0));
    acc[k] += c;
  }
  return CyclotomicInt::from_poly(m, zp_trim(std::move(acc)));
}

}  // namespace qinv
