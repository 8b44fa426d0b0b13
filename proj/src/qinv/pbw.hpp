#pragma once

#include "qinv/cartan.hpp"

#include <mutex>
#include <optional>
#include <unordered_map>

namespace qinv {

// One letter of a word in the quantized enveloping algebra: a divided power
// of a root vector, or a Cartan element K_lam with lam in (1/2)X.
struct Letter {
  enum Kind : uint8_t { E, F, K } kind = K;
  int16_t root = 0;  // index into the convex order of positive roots
  int16_t pow = 1;   // divided power
  Weight lam;        // K only

  static Letter Ek(int root, int pow) { return Letter{E, (int16_t)root, (int16_t)pow, {}}; }
  static Letter Fk(int root, int pow) { return Letter{F, (int16_t)root, (int16_t)pow, {}}; }
  static Letter Kw(Weight w) { return Letter{K, 0, 1, std::move(w)}; }
};

using Letters = std::vector<Letter>;

// Normal monomial F^{(m)} K_m K_lam E^{(n)}; K_m = K_{-|F^{(m)}|} is implied
// by m and not stored.
struct Mono {
  std::vector<uint16_t> m, n;
  Weight lam;

  bool operator==(const Mono& o) const { return m == o.m && n == o.n && lam == o.lam; }
  bool is_cartan() const;
  static Mono unit(int t, int rank);
};

struct MonoHash {
  size_t operator()(const Mono& x) const {
    size_t h = 1469598103934665603ull;
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    for (auto v : x.m) mix(v);
    mix(0xabcdef);
    for (auto v : x.n) mix(v);
    mix(0x123456);
    for (auto v : x.lam.c) mix((size_t)v);
    return h;
  }
};

// finite sum of normal monomials with rational-function coefficients
using AlgebraElement = std::unordered_map<Mono, QRational, MonoHash>;
using Mono2 = std::pair<Mono, Mono>;
struct Mono2Hash {
  size_t operator()(const Mono2& x) const {
    return MonoHash()(x.first) * 1000003u ^ MonoHash()(x.second);
  }
};
using Tensor2 = std::unordered_map<Mono2, QRational, Mono2Hash>;

void add_to(AlgebraElement& a, const Mono& k, const QRational& c);
void add_to(Tensor2& a, const Mono2& k, const QRational& c);

enum class Aut { Bar, Phi, Tau, Omega };

// Straightening engine and structure tables for a supported algebra (A1, A2).
class PbwEngine {
public:
  explicit PbwEngine(std::shared_ptr<const RootSystem> rs);

  const RootSystem& rs() const { return *rs_; }
  int t() const { return rs_->t(); }
  int unit() const { return rs_->unit(); }

  // ---- word normalization and products ----
  AlgebraElement normalize(const Letters& w, const QRational& coeff) const;
  AlgebraElement normalize_mono_mul(const Mono& a, const Mono& b) const;
  AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const;
  AlgebraElement scalar(const QRational& c) const;  // c * 1
  Letters mono_letters(const Mono& x) const;        // expanded, K_m merged in

  // ---- Hopf structure ----
  Tensor2 coproduct(const AlgebraElement& x) const;
  Tensor2 coproduct_mono(const Mono& x) const;
  AlgebraElement antipode(const AlgebraElement& x, bool inverse = false) const;
  QRational counit(const AlgebraElement& x) const;
  // x |> y = sum x_(1) y S(x_(2))
  AlgebraElement adjoint(const AlgebraElement& x, const AlgebraElement& y) const;

  // ---- automorphisms and braid action ----
  AlgebraElement apply_aut(Aut f, const AlgebraElement& x) const;
  AlgebraElement braid_T(int i, int sign, const AlgebraElement& x) const;

  // ---- quasi-R-matrix data ----
  // Theta = sum_n F_n (x) E_n with the (eq.En)/(eq.Fn) normalizations;
  // bar = true gives Theta^{-1} via the bar involution of both legs.
  struct ThetaTerm {
    std::vector<uint16_t> idx;
    QRational coeff;  // global scalar of F_n (x) E_n against divided powers
  };
  std::vector<ThetaTerm> theta_terms(int B, bool bar) const;
  // scalars relating Theta letters to divided powers:
  // F_n = cF(n) F^{(n)}, E_n = cE(n) E^{(n)}, primed versions for Theta^{-1}
  QScalar cF(const std::vector<uint16_t>& idx, bool bar) const;
  QScalar cE(const std::vector<uint16_t>& idx, bool bar) const;

  // Y-grading of a monomial: |E^{(n)}| - |F^{(m)}| (K-parts are degree 0)
  Weight ygrade(const Mono& x) const;
  Weight wtE(const std::vector<uint16_t>& idx) const;  // sum idx_j gamma_j

  // letter images under automorphisms (simple-letter words, with bar flag)
  struct WordSum {
    std::vector<std::pair<QRational, Letters>> terms;
  };

  // expansion of a root-vector divided power into simple-root letters
  const WordSum& root_vector_word(Letter::Kind kind, int root, int pow) const;

  // representation oracle: exact matrices of x on V^{(x)tensor k} of the
  // defining representation (A1: 2-dim, A2: 3-dim); used to derive and to
  // certify the straightening tables
  std::vector<std::vector<QRational>> rep_matrix(const Letters& w, int tensor_pow) const;
  std::vector<std::vector<QRational>> rep_matrix(const AlgebraElement& x, int tensor_pow) const;
  int rep_dim(int tensor_pow) const;

  // ---- internals shared with the state machinery ----
  struct EFRuleTerm {
    int tpow;          // number of contractions
    QRational kcoeff;  // coefficient of K_{kmul * alpha_root}
    int kmul;
  };
  // E_i^{(a)} F_i^{(b)} = sum_t F^{(b-t)} ( sum_u kcoeff K_{kmul alpha} ) E^{(a-t)}
  const std::vector<EFRuleTerm>& ef_rule(int simple_root, int a, int b) const;
  struct LSTerm {
    QScalar coeff;
    std::vector<std::pair<uint16_t, uint16_t>> letters;  // (root, pow), descending
  };
  // rewriting of the ascending pair x_j x_k (j < k, single powers)
  const std::vector<LSTerm>& ls_rule(Letter::Kind kind, int j, int k) const;

  QScalar qbinom_root(int root, int n, int k) const;

private:
  std::shared_ptr<const RootSystem> rs_;
  std::vector<int> simple_of_root_;  // convex index -> simple index or -1
  std::vector<std::vector<LSTerm>> lsE_, lsF_;  // indexed by pair (j,k), j<k
  mutable std::unordered_map<uint64_t, std::vector<EFRuleTerm>> ef_cache_;
  mutable std::unordered_map<uint64_t, WordSum> rvword_cache_;
  mutable std::unordered_map<uint64_t, Tensor2> coprod_cache_;
  mutable std::unordered_map<uint64_t, AlgebraElement> antipode_cache_;
  mutable std::mutex mu_;

  void derive_ls_tables();
  std::vector<LSTerm> solve_ls_pair(Letter::Kind kind, int j, int k) const;
  AlgebraElement normalize_impl(const Letters& w, const QRational& coeff) const;
  Tensor2 coproduct_letter(const Letter& L) const;
  AlgebraElement antipode_letter(const Letter& L, bool inverse) const;
  friend class StateOps;
};

std::shared_ptr<const PbwEngine> get_engine(const std::string& name);

}  // namespace qinv
