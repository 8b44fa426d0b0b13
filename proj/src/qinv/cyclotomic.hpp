#pragma once

#include "qinv/qscalar.hpp"

namespace qinv {

// Integer polynomials, dense, used for cyclotomic arithmetic.
using ZPoly = std::vector<Int>;  // c[0] + c[1] x + ...

ZPoly zp_trim(ZPoly p);
ZPoly zp_add(const ZPoly& a, const ZPoly& b);
ZPoly zp_sub(const ZPoly& a, const ZPoly& b);
ZPoly zp_mul(const ZPoly& a, const ZPoly& b);
// division by a monic-up-to-sign divisor; exact integer remainder
void zp_divmod(const ZPoly& a, const ZPoly& b, ZPoly& q, ZPoly& r);

// m-th cyclotomic polynomial, computed by exact division of x^m-1 by the
// cyclotomic polynomials of the proper divisors of m; cached.
const ZPoly& cyclotomic_poly(long m);
long euler_phi(long m);

// Element of Z[zeta_m] in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
class CyclotomicInt {
public:
  CyclotomicInt() : m_(1), c_(1, Int(0)) {}
  explicit CyclotomicInt(long m) : m_(m), c_(euler_phi(m), Int(0)) {}
  CyclotomicInt(long m, const Int& a) : m_(m), c_(euler_phi(m), Int(0)) { c_[0] = a; }
  // reduce an arbitrary power-list modulo Phi_m
  static CyclotomicInt from_poly(long m, const ZPoly& p);
  static CyclotomicInt zeta_power(long m, long k);

  long order() const { return m_; }
  const std::vector<Int>& coeffs() const { return c_; }
  bool is_zero() const;
  bool operator==(const CyclotomicInt& o) const;
  bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

  CyclotomicInt operator+(const CyclotomicInt& o) const;
  CyclotomicInt operator-(const CyclotomicInt& o) const;
  CyclotomicInt operator*(const CyclotomicInt& o) const;
  CyclotomicInt& operator+=(const CyclotomicInt& o) { return *this = *this + o; }
  CyclotomicInt& operator-=(const CyclotomicInt& o) { return *this = *this - o; }
  CyclotomicInt& operator*=(const CyclotomicInt& o) { return *this = *this * o; }

  // Galois automorphism zeta -> zeta^k, gcd(k,m)=1
  CyclotomicInt galois(long k) const;
  // embed into Z[zeta_M] for m | M
  CyclotomicInt embed(long M) const;

  // exact division in Q(zeta_m) with integrality check; false when the
  // quotient is not an algebraic integer of Z[zeta_m]
  static bool try_divide(const CyclotomicInt& a, const CyclotomicInt& b, CyclotomicInt& out);

  std::string str() const;

private:
  long m_;
  std::vector<Int> c_;
};

// Evaluate f at q^{1/s} = zeta_m, i.e. q^{e/unit} -> zeta_m^{e*s/unit}.
// Throws arith_error when an exponent does not scale to an integer.
CyclotomicInt ev_root(const QScalar& f, long m, long s);

}  // namespace qinv
