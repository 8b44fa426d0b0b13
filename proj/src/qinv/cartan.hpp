#pragma once

#include "qinv/qscalar.hpp"

#include <array>
#include <memory>

namespace qinv {

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LieAlgebraSpec {
  char family = 'A';
  int rank = 1;

  static LieAlgebraSpec parse(const std::string& name);  // "A1", "G2", ...
  std::string name() const { return std::string(1, family) + std::to_string(rank); }
  bool engine_supported() const {
    return family == 'A' && (rank == 1 || rank == 2);
  }
};

class RootSystem;

// Rational weight over the simple-root basis, stored as integer coordinates
// scaled by 2D: lambda = (1/2D) * sum c[i] alpha_i.  This covers Y, X, X/2,
// Y/2 and all rho-shifts for every simple type.
struct Weight {
  std::vector<int64_t> c;

  bool operator==(const Weight& o) const { return c == o.c; }
  bool is_zero() const {
    for (auto x : c)
      if (x) return false;
    return true;
  }
  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight operator-() const;
  Weight scaled(int64_t k) const;
  Weight& operator+=(const Weight& o) { return *this = *this + o; }
};

class RootSystem {
public:
  explicit RootSystem(const LieAlgebraSpec& spec);

  const LieAlgebraSpec& spec() const { return spec_; }
  int rank() const { return spec_.rank; }
  int d() const { return d_; }         // max squared-length/2
  int D() const { return D_; }         // |X/Y| = det(Cartan matrix)
  int dual_coxeter() const { return hv_; }
  int unit() const { return 8 * D_; }  // q-exponent lattice denominator
  int t() const { return (int)pos_roots_.size(); }

  // Gram matrix (alpha_i, alpha_j), integers
  int64_t gram(int i, int j) const { return G_[i][j]; }
  int droot_simple(int i) const { return d_simple_[i]; }

  // weights in the 2D-scaled coordinate convention
  Weight zero_weight() const;
  Weight simple_root(int i) const;           // alpha_i
  Weight fundamental_weight(int i) const;    // alpha-breve_i
  Weight rho() const;
  Weight pos_root(int j) const { return pos_roots_[j]; }   // gamma_j, convex order
  int droot(int j) const { return d_pos_[j]; }             // d_{gamma_j}
  const std::vector<int>& longest_word() const { return word_; }

  // exact inner product
  Rat inner(const Weight& a, const Weight& b) const;
  // exponent of v^{(a,b)} on the q^(1/8D) lattice; throws if off-lattice
  long vpow(const Weight& a, const Weight& b) const;
  // lambda in Y, X, (1/2)X?
  bool in_root_lattice(const Weight& a) const;
  bool in_weight_lattice(const Weight& a) const;

  Weight reflect(int i, const Weight& a) const;  // s_{alpha_i}
  Weight weyl_apply(const std::vector<int>& word, const Weight& a) const;
  // reduce an arbitrary braid word to a reduced word for the same Weyl element
  std::vector<int> reduce_word(const std::vector<int>& word) const;

  bool dominant(const Weight& a) const;
  // q^{-(lambda,rho)} prod (q^{(lambda+rho,alpha)}-1)/(q^{(rho,alpha)}-1)
  QScalar qdim(const Weight& lambda) const;

  std::string describe() const;

private:
  LieAlgebraSpec spec_;
  int d_ = 1, D_ = 1, hv_ = 2;
  std::vector<std::array<int64_t, 8>> G_;
  std::vector<int> d_simple_;
  std::vector<Weight> pos_roots_;
  std::vector<int> d_pos_;
  std::vector<int> word_;

  void build_gram();
  void build_roots();
  void build_longest_word();
};

std::shared_ptr<const RootSystem> get_root_system(const LieAlgebraSpec& spec);
std::shared_ptr<const RootSystem> get_root_system(const std::string& name);

}  // namespace qinv
