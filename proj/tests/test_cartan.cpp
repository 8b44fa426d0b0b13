#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/cartan.hpp"

using namespace qinv;

TEST_CASE("spec parsing and validity") {
  CHECK_NOTHROW(LieAlgebraSpec::parse("A1"));
  CHECK_NOTHROW(LieAlgebraSpec::parse("E8"));
  CHECK_THROWS_AS(LieAlgebraSpec::parse("G3"), validation_error);
  CHECK_THROWS_AS(LieAlgebraSpec::parse("D3"), validation_error);
  CHECK_THROWS_AS(LieAlgebraSpec::parse("H2"), validation_error);
  CHECK(LieAlgebraSpec::parse("A2").engine_supported());
  CHECK(!LieAlgebraSpec::parse("B2").engine_supported());
}

TEST_CASE("A1 data") {
  auto rs = get_root_system("A1");
  CHECK(rs->t() == 1);
  CHECK(rs->d() == 1);
  CHECK(rs->D() == 2);
  CHECK(rs->dual_coxeter() == 2);
  // rho = alpha/2
  Weight half_alpha = rs->simple_root(0);
  for (auto& x : half_alpha.c) x /= 2;
  CHECK(rs->rho() == half_alpha);
  CHECK(rs->inner(rs->simple_root(0), rs->simple_root(0)) == Rat(2));
  CHECK(rs->inner(rs->rho(), rs->rho()) == Rat(1, 2));
}

TEST_CASE("A2 data and convex order") {
  auto rs = get_root_system("A2");
  CHECK(rs->t() == 3);
  CHECK(rs->D() == 3);
  CHECK(rs->longest_word() == std::vector<int>{0, 1, 0});
  // gamma order: alpha1, alpha1+alpha2, alpha2
  CHECK(rs->pos_root(0) == rs->simple_root(0));
  CHECK(rs->pos_root(1) == rs->simple_root(0) + rs->simple_root(1));
  CHECK(rs->pos_root(2) == rs->simple_root(1));
  CHECK(rs->inner(rs->simple_root(0), rs->simple_root(1)) == Rat(-1));
}

TEST_CASE("G2 table row") {
  auto rs = get_root_system("G2");
  CHECK(rs->d() == 3);
  CHECK(rs->D() == 1);
  CHECK(rs->dual_coxeter() == 4);
  CHECK(rs->t() == 6);
}

TEST_CASE("all families: construction invariants hold") {
  // the constructor itself asserts: convex order enumerates Phi+ exactly,
  // table constants match, max (rho,alpha) = d(h^v - 1)
  for (std::string name : {"A1", "A2", "A3", "B2", "B3", "C3", "D4", "E6", "E7", "F4", "G2"}) {
    auto rs = get_root_system(name);
    // sum of positive roots = 2 rho
    Weight s = rs->zero_weight();
    for (int j = 0; j < rs->t(); ++j) s += rs->pos_root(j);
    CHECK(s == rs->rho().scaled(2));
    // (fund_i, alpha_j) = delta_ij d_j
    for (int i = 0; i < rs->rank(); ++i)
      for (int j = 0; j < rs->rank(); ++j) {
        Rat want = (i == j) ? Rat(rs->droot_simple(j)) : Rat(0);
        CHECK(rs->inner(rs->fundamental_weight(i), rs->simple_root(j)) == want);
      }
  }
}

TEST_CASE("E8 has trivial center and 120 positive roots") {
  auto rs = get_root_system("E8");
  CHECK(rs->D() == 1);
  CHECK(rs->t() == 120);
}

TEST_CASE("weyl reflections") {
  auto rs = get_root_system("A1");
  CHECK(rs->reflect(0, rs->simple_root(0)) == -rs->simple_root(0));
  auto rs2 = get_root_system("A2");
  // s1(alpha2) = alpha1 + alpha2
  CHECK(rs2->reflect(0, rs2->simple_root(1)) ==
        rs2->simple_root(0) + rs2->simple_root(1));
  // w0(rho) = -rho, brute force via the longest word
  for (auto rs3 : {get_root_system("A1"), get_root_system("A2")}) {
    CHECK(rs3->weyl_apply(rs3->longest_word(), rs3->rho()) == -rs3->rho());
  }
}

TEST_CASE("word reduction") {
  auto rs = get_root_system("A2");
  // s1 s1 reduces to the identity
  CHECK(rs->reduce_word({0, 0}).empty());
  // s1 s2 s1 s1 s2 reduces to length 1: s1 s2 s1 s1 s2 = s1 s2 s2 = s1
  auto w = rs->reduce_word({0, 1, 0, 0, 1});
  CHECK(w.size() == 1);
  CHECK(rs->weyl_apply(w, rs->rho()) == rs->weyl_apply({0, 1, 0, 0, 1}, rs->rho()));
}

TEST_CASE("qdim") {
  auto rs = get_root_system("A1");
  const int U = rs->unit();
  // lambda = fundamental weight: qdim = v + v^{-1}
  QScalar d1 = rs->qdim(rs->fundamental_weight(0));
  QScalar want(U);
  want.add_term(U / 2, 1);
  want.add_term(-U / 2, 1);
  CHECK(d1 == want);
  // lambda = 0 -> 1 for every family
  for (std::string name : {"A1", "A2", "G2", "B2"}) {
    auto r2 = get_root_system(name);
    CHECK(r2->qdim(r2->zero_weight()) == QScalar(r2->unit(), 1));
  }
  CHECK_THROWS_AS(rs->qdim(-rs->fundamental_weight(0)), validation_error);
}

TEST_CASE("qdim is palindromic and specializes to classical dimension") {
  for (std::string name : {"A1", "A2"}) {
    auto rs = get_root_system(name);
    for (int k = 0; k <= 3; ++k) {
      Weight lam = rs->fundamental_weight(0).scaled(k);
      if (rs->rank() > 1) lam += rs->fundamental_weight(1).scaled(1);
      QScalar d = rs->qdim(lam);
      CHECK(d.bar() == d);  // invariant under v -> v^{-1}
      // value at v^{1/D} = 1, i.e. sum of coefficients, equals dim V_lambda:
      Int dim = 0;
      for (auto& [e, c] : d.terms()) dim += c;
      // Weyl dimension formula
      Rat wdim(1);
      for (int j = 0; j < rs->t(); ++j) {
        wdim *= rs->inner(lam + rs->rho(), rs->pos_root(j));
        wdim /= rs->inner(rs->rho(), rs->pos_root(j));
      }
      wdim.canonicalize();
      CHECK(Rat(dim) == wdim);
    }
  }
}

TEST_CASE("weight lattice membership") {
  auto rs = get_root_system("A1");
  CHECK(rs->in_root_lattice(rs->simple_root(0)));
  CHECK(!rs->in_root_lattice(rs->fundamental_weight(0)));
  CHECK(rs->in_weight_lattice(rs->fundamental_weight(0)));
  Weight quarter = rs->zero_weight();
  quarter.c[0] = 1;  // alpha/4: in (1/2)X but not in X
  CHECK(!rs->in_weight_lattice(quarter));
}
