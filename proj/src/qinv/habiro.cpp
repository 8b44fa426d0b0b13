#include "qinv/habiro.hpp"

namespace qinv {

HabiroTrunc::HabiroTrunc(int N, QScalar rep) : N_(N), rep_(std::move(rep)) {
  if (N_ < 1) throw arith_error("HabiroTrunc: level must be >= 1");
  if (!rep_.integral_q())
    throw arith_error("HabiroTrunc: representative not in Z[q^{±1}]");
}

namespace {
// rep as dense poly in q (after clearing q-inverses); unit-normalized exps
ZPoly to_zpoly(const QScalar& f) {
  ZPoly p;
  const int u = f.unit() ? f.unit() : 1;
  for (auto& [e, c] : f.terms()) {
    long k = e / u;
    if (k < 0) throw arith_error("to_zpoly: negative exponent");
    if ((size_t)k >= p.size()) p.resize(k + 1, Int(0));
    p[k] = c;
  }
  return p;
}

ZPoly pochhammer_poly(int N) {
  ZPoly f = {Int(1)};
  for (int j = 1; j <= N; ++j) {
    ZPoly g(j + 1, Int(0));
    g[0] = 1;
    g[j] = -1;  // 1 - q^j
    f = zp_mul(f, g);
  }
  return f;
}
}  // namespace

QScalar HabiroTrunc::canonical() const {
  const int u = rep_.unit() ? rep_.unit() : 1;
  ZPoly f = pochhammer_poly(N_);
  // clear q-inverses: q * g == 1 mod f with g = (1 - f)/q
  ZPoly ginv = f;
  for (auto& c : ginv) c = -c;
  ginv[0] += 1;              // 1 - f, divisible by q
  ginv.erase(ginv.begin());  // (1-f)/q
  long mn = rep_.min_exp() / u;
  ZPoly p;
  for (auto& [e, c] : rep_.terms()) {
    long k = e / u - std::min(mn, 0L);
    if ((size_t)k >= p.size()) p.resize(k + 1, Int(0));
    p[k] = c;
  }
  if (mn < 0) {
    ZPoly gpow = {Int(1)};
    for (long i = 0; i < -mn; ++i) {
      gpow = zp_mul(gpow, ginv);
      ZPoly q, r;
      zp_divmod(gpow, f, q, r);
      gpow = r;
    }
    p = zp_mul(p, gpow);
  }
  ZPoly q, r;
  zp_divmod(p, f, q, r);
  QScalar out(rep_.unit());
  for (size_t i = 0; i < r.size(); ++i)
    if (r[i] != 0) out.add_term((long)i * u, r[i]);
  return out;
}

bool HabiroTrunc::equivalent(const HabiroTrunc& o) const {
  if (N_ != o.N_) return false;
  return canonical() == o.canonical();
}

HabiroTrunc HabiroTrunc::operator+(const HabiroTrunc& o) const {
  return HabiroTrunc(std::min(N_, o.N_), rep_ + o.rep_);
}

HabiroTrunc HabiroTrunc::operator*(const HabiroTrunc& o) const {
  return HabiroTrunc(std::min(N_, o.N_), rep_ * o.rep_);
}

CyclotomicInt HabiroTrunc::evaluate(long m) const {
  if (m > N_) throw arith_error("habiro_ev: truncation too shallow");
  return ev_root(rep_, m, 1);
}

std::vector<Int> HabiroTrunc::taylor_at_one(int k) const {
  if (k > N_) throw arith_error("taylor_at_one: order exceeds truncation level");
  // substitute q = 1 + u, expand mod u^k; q^{-1} = sum_{j} (-u)^j
  std::vector<Int> out(k, Int(0));
  const int u = rep_.unit() ? rep_.unit() : 1;
  // binomials up to needed sizes computed on demand
  for (auto& [e, c] : rep_.terms()) {
    long n = e / u;
    if (n >= 0) {
      Int b = 1;  // C(n, j)
      for (int j = 0; j < k; ++j) {
        if (j > n) break;
        out[j] += c * b;
        b = b * (n - j) / (j + 1);
      }
    } else {
      // (1+u)^n for n<0: C(n,j) = (-1)^j C(-n+j-1, j)
      long a = -n;
      Int b = 1;  // C(a+j-1, j), starts at j=0 -> 1
      for (int j = 0; j < k; ++j) {
        Int tcb = c * b;
        out[j] += (j % 2 == 0) ? tcb : Int(-tcb);
        b = b * (a + j) / (j + 1);
      }
    }
  }
  return out;
}

}  // namespace qinv
