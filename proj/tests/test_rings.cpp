#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/cyclotomic.hpp"
#include "qinv/habiro.hpp"
#include "qinv/qscalar.hpp"

#include <random>

using namespace qinv;

namespace {
constexpr int U = 16;  // 8D for A1

QScalar rand_qscalar(std::mt19937& rng, int terms = 4, int span = 12) {
  QScalar f(U);
  std::uniform_int_distribution<int> de(-span, span), dc(-9, 9);
  for (int i = 0; i < terms; ++i) f.add_term(de(rng), dc(rng));
  return f;
}
}  // namespace

TEST_CASE("qpochhammer basics") {
  CHECK(qpochhammer_qq(U, 0) == QScalar(U, 1));
  // (q;q)_2 = 1 - q - q^2 + q^3
  QScalar p2 = qpochhammer_qq(U, 2);
  QScalar want(U);
  want.add_term(0, 1);
  want.add_term(U, -1);
  want.add_term(2 * U, -1);
  want.add_term(3 * U, 1);
  CHECK(p2 == want);
}

TEST_CASE("exact division") {
  // (q^4 - 1)/(q^2 - 1) = q^2 + 1
  QScalar n(U), d(U), want(U);
  n.add_term(4 * U, 1);
  n.add_term(0, -1);
  d.add_term(2 * U, 1);
  d.add_term(0, -1);
  want.add_term(2 * U, 1);
  want.add_term(0, 1);
  CHECK(n.divexact(d) == want);
  QScalar bad(U);
  bad.add_term(U, 1);
  bad.add_term(0, 1);  // q + 1 does not divide q^2 + 1
  QScalar out;
  CHECK(!QScalar::try_divexact(want, bad, out));
}

TEST_CASE("QRational normalization") {
  QScalar a = qpochhammer_qq(U, 3);
  QScalar b = qpochhammer_qq(U, 1);
  QRational r(a, b);
  CHECK(r.is_laurent());
  CHECK(r.to_qscalar() == a.divexact(b));
  QRational z(QScalar(U), a);
  CHECK(z.is_zero());
  CHECK(z.den() == QScalar::integer(1));
}

TEST_CASE("cyclotomic polynomials against product brute force") {
  for (long m = 1; m <= 50; ++m) {
    const ZPoly& phi = cyclotomic_poly(m);
    CHECK((long)phi.size() - 1 == euler_phi(m));
    // product over divisors gives x^m - 1
    ZPoly prod = {Int(1)};
    for (long d2 = 1; d2 <= m; ++d2)
      if (m % d2 == 0) prod = zp_mul(prod, cyclotomic_poly(d2));
    ZPoly want(m + 1, Int(0));
    want[0] = -1;
    want[m] = 1;
    CHECK(prod == want);
  }
  // prime p: Phi_p = 1 + q + ... + q^{p-1}
  for (long p : {2, 3, 5, 7, 11, 13}) {
    const ZPoly& phi = cyclotomic_poly(p);
    REQUIRE((long)phi.size() == p);
    for (auto& c : phi) CHECK(c == 1);
  }
}

TEST_CASE("ev_root examples") {
  // ev of (q;q)_7 at m=5 -> 0
  CHECK(ev_root(qpochhammer_qq(U, 7), 5, 1).is_zero());
  // ev of q at m=1 -> 1
  QScalar q = QScalar::monomial(U, U);
  CHECK(ev_root(q, 1, 1) == CyclotomicInt(1, 1));
  // 1 + q + q^2 at m=3 -> 0
  QScalar s(U, 1);
  s.add_term(U, 1);
  s.add_term(2 * U, 1);
  CHECK(ev_root(s, 3, 1).is_zero());
  // fractional exponent -> error
  CHECK_THROWS_AS(ev_root(QScalar::monomial(U, 1), 3, 1), arith_error);
}

TEST_CASE("ev_root is a ring homomorphism (property)") {
  std::mt19937 rng(42);
  for (int it = 0; it < 50; ++it) {
    QScalar a = rand_qscalar(rng), b = rand_qscalar(rng);
    long m = 1 + (int)(rng() % 12);
    // scale s = U so every exponent evaluates
    CHECK(ev_root(a + b, m, U) == ev_root(a, m, U) + ev_root(b, m, U));
    CHECK(ev_root(a * b, m, U) == ev_root(a, m, U) * ev_root(b, m, U));
  }
}

TEST_CASE("galois images") {
  long m = 4;
  auto z = CyclotomicInt::zeta_power(m, 1);
  CHECK(z.galois(1) == z);
  // m=4: zeta -> zeta^3 = -zeta
  auto z3 = z.galois(3);
  CHECK(z3 == CyclotomicInt(m) - z);
  CHECK_THROWS_AS(z.galois(2), arith_error);
  // composition law on random elements
  std::mt19937 rng(7);
  for (int it = 0; it < 20; ++it) {
    QScalar a = rand_qscalar(rng);
    long mm = 9;
    auto x = ev_root(a, mm, U);
    CHECK(x.galois(2).galois(5) == x.galois((2 * 5) % mm));
  }
}

TEST_CASE("cyclotomic exact division") {
  long m = 12;
  auto a = CyclotomicInt::zeta_power(m, 5) + CyclotomicInt(m, 3);
  auto b = CyclotomicInt::zeta_power(m, 2) - CyclotomicInt(m, 2);
  auto prod = a * b;
  CyclotomicInt q;
  REQUIRE(CyclotomicInt::try_divide(prod, b, q));
  CHECK(q == a);
  // 1 / (1 - zeta_4) is not an algebraic integer
  CyclotomicInt one(4, 1);
  auto d = one - CyclotomicInt::zeta_power(4, 1);
  CyclotomicInt out;
  CHECK(!CyclotomicInt::try_divide(one, d, out));
}

TEST_CASE("HabiroTrunc evaluation and representative independence") {
  int N = 6;
  HabiroTrunc one(N, QScalar(U, 1));
  for (long m = 1; m <= N; ++m) CHECK(one.evaluate(m) == CyclotomicInt(m, 1));
  // class of (q;q)_N + 5 evaluates to 5
  HabiroTrunc x(N, qpochhammer_qq(U, N) + QScalar(U, 5));
  for (long m = 1; m <= N; ++m) CHECK(x.evaluate(m) == CyclotomicInt(m, 5));
  // P and P + (q;q)_N * q agree at all m <= N and in canonical form
  std::mt19937 rng(3);
  for (int it = 0; it < 20; ++it) {
    QScalar p(U);
    for (int i = 0; i < 5; ++i) p.add_term(U * (long)(rng() % 20), (int)(rng() % 7) - 3);
    HabiroTrunc h1(N, p);
    HabiroTrunc h2(N, p + qpochhammer_qq(U, N) * QScalar::monomial(U, U));
    CHECK(h1.equivalent(h2));
    for (long m = 1; m <= N; ++m) CHECK(h1.evaluate(m) == h2.evaluate(m));
    CHECK(h1.taylor_at_one(N) == h2.taylor_at_one(N));
  }
  CHECK_THROWS_AS(x.evaluate(N + 1), arith_error);
}

TEST_CASE("habiro_ev multiplicativity") {
  std::mt19937 rng(11);
  int N = 5;
  for (int it = 0; it < 20; ++it) {
    QScalar a(U), b(U);
    for (int i = 0; i < 4; ++i) {
      a.add_term(U * (long)(rng() % 10), (int)(rng() % 9) - 4);
      b.add_term(U * (long)(rng() % 10), (int)(rng() % 9) - 4);
    }
    HabiroTrunc ha(N, a), hb(N, b);
    for (long m = 1; m <= N; ++m)
      CHECK((ha * hb).evaluate(m) == ha.evaluate(m) * hb.evaluate(m));
  }
}

TEST_CASE("taylor examples") {
  int N = 5;
  auto t = HabiroTrunc(N, QScalar(U, 1)).taylor_at_one(4);
  CHECK(t == std::vector<Int>{1, 0, 0, 0});
  // class of q, k=2 -> (1,1)
  auto t2 = HabiroTrunc(N, QScalar::monomial(U, U)).taylor_at_one(2);
  CHECK(t2 == std::vector<Int>{1, 1});
  // class of (q;q)_2, k=3 -> (0,0,2): (q-1)^2(q+1) = 2(q-1)^2 + (q-1)^3
  auto t3 = HabiroTrunc(N, qpochhammer_qq(U, 2)).taylor_at_one(3);
  CHECK(t3 == std::vector<Int>{0, 0, 2});
  CHECK_THROWS_AS(HabiroTrunc(N, QScalar(U, 1)).taylor_at_one(N + 1), arith_error);
}

TEST_CASE("bar involution") {
  std::mt19937 rng(5);
  for (int it = 0; it < 20; ++it) {
    QScalar a = rand_qscalar(rng);
    CHECK(a.bar().bar() == a);
  }
}
