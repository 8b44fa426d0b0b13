#pragma once

#include "qinv/cyclotomic.hpp"
#include "qinv/qscalar.hpp"

namespace qinv {

// Residue class P + ((q;q)_N) in Z[q^{±1}], P an integral-q QScalar.
// The class is what is meaningful; the representative is arbitrary.
// Evaluations at roots of unity of order <= N and Taylor coefficients at
// q = 1 up to order N are representative-independent.
class HabiroTrunc {
public:
  HabiroTrunc() : N_(1) {}
  HabiroTrunc(int N, QScalar rep);

  int level() const { return N_; }
  const QScalar& rep() const { return rep_; }

  // canonical representative: polynomial of degree < deg (q;q)_N with the
  // q-inverse eliminated (q is a unit mod (q;q)_N)
  QScalar canonical() const;
  bool equivalent(const HabiroTrunc& o) const;

  HabiroTrunc operator+(const HabiroTrunc& o) const;
  HabiroTrunc operator*(const HabiroTrunc& o) const;

  // evaluation at a primitive m-th root of unity, m <= N
  CyclotomicInt evaluate(long m) const;
  // first k coefficients of the expansion in powers of (q-1), k <= N
  std::vector<Int> taylor_at_one(int k) const;

private:
  int N_;
  QScalar rep_;  // integral-q
};

}  // namespace qinv
