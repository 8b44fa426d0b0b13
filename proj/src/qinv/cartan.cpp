#include "qinv/cartan.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace qinv {

LieAlgebraSpec LieAlgebraSpec::parse(const std::string& name) {
  if (name.size() < 2) throw validation_error("bad Lie type: " + name);
  LieAlgebraSpec s;
  s.family = name[0];
  try {
    s.rank = std::stoi(name.substr(1));
  } catch (...) {
    throw validation_error("bad Lie type: " + name);
  }
  bool ok = false;
  switch (s.family) {
    case 'A': ok = s.rank >= 1; break;
    case 'B': ok = s.rank >= 2; break;
    case 'C': ok = s.rank >= 2; break;
    case 'D': ok = s.rank >= 4; break;
    case 'E': ok = s.rank >= 6 && s.rank <= 8; break;
    case 'F': ok = s.rank == 4; break;
    case 'G': ok = s.rank == 2; break;
    default: ok = false;
  }
  if (!ok) throw validation_error("not a valid simple type: " + name);
  return s;
}

Weight Weight::operator+(const Weight& o) const {
  Weight r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
  return r;
}
Weight Weight::operator-(const Weight& o) const {
  Weight r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
  return r;
}
Weight Weight::operator-() const {
  Weight r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}
Weight Weight::scaled(int64_t k) const {
  Weight r = *this;
  for (auto& x : r.c) x *= k;
  return r;
}

RootSystem::RootSystem(const LieAlgebraSpec& spec) : spec_(spec) {
  build_gram();
  build_roots();
  build_longest_word();
  // cross-check against the constant table
  static const std::map<char, int> dtab = {{'A', 1}, {'B', 2}, {'C', 2}, {'D', 1},
                                           {'E', 1}, {'F', 2}, {'G', 3}};
  if (d_ != dtab.at(spec_.family)) throw validation_error("d mismatch vs table");
  int ell = spec_.rank;
  int hv_table = 0, D_table = 0;
  switch (spec_.family) {
    case 'A': hv_table = ell + 1; D_table = ell + 1; break;
    case 'B': hv_table = 2 * ell - 1; D_table = 2; break;
    case 'C': hv_table = ell + 1; D_table = 2; break;
    case 'D': hv_table = 2 * ell - 2; D_table = 4; break;
    case 'E': hv_table = (ell == 6 ? 12 : ell == 7 ? 18 : 30); D_table = (ell == 6 ? 3 : ell == 7 ? 2 : 1); break;
    case 'F': hv_table = 9; D_table = 1; break;
    case 'G': hv_table = 4; D_table = 1; break;
  }
  if (D_ != D_table) throw validation_error("D mismatch vs table");
  hv_ = hv_table;
  // max over positive roots of (rho,alpha) equals d(h^v - 1)
  Rat mx(0);
  for (int j = 0; j < t(); ++j) mx = std::max(mx, inner(rho(), pos_root(j)));
  if (mx != Rat(d_ * (hv_ - 1))) throw validation_error("dual Coxeter mismatch");
}

void RootSystem::build_gram() {
  int ell = spec_.rank;
  d_simple_.assign(ell, 1);
  std::vector<std::pair<int, int>> edges;
  switch (spec_.family) {
    case 'A':
      for (int i = 0; i + 1 < ell; ++i) edges.push_back({i, i + 1});
      break;
    case 'B':
      for (int i = 0; i + 1 < ell; ++i) edges.push_back({i, i + 1});
      for (int i = 0; i + 1 < ell; ++i) d_simple_[i] = 2;
      break;
    case 'C':
      for (int i = 0; i + 1 < ell; ++i) edges.push_back({i, i + 1});
      d_simple_[ell - 1] = 2;
      break;
    case 'D':
      for (int i = 0; i + 2 < ell; ++i) edges.push_back({i, i + 1});
      edges.push_back({ell - 3, ell - 1});
      break;
    case 'E':
      // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to 4
      edges = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}};
      for (int i = 6; i < ell; ++i) edges.push_back({i - 1, i});
      break;
    case 'F':
      edges = {{0, 1}, {1, 2}, {2, 3}};
      d_simple_[0] = d_simple_[1] = 2;
      break;
    case 'G':
      edges = {{0, 1}};
      d_simple_[1] = 3;
      break;
  }
  d_ = *std::max_element(d_simple_.begin(), d_simple_.end());
  G_.assign(ell, {});
  for (int i = 0; i < ell; ++i) G_[i][i] = 2 * d_simple_[i];
  for (auto [i, j] : edges) {
    int64_t v = -std::max(d_simple_[i], d_simple_[j]);
    G_[i][j] = v;
    G_[j][i] = v;
  }
  // D = |X/Y| = det of the Cartan matrix a_ij = (alpha_i,alpha_j)/d_i
  std::vector<std::vector<Rat>> a(ell, std::vector<Rat>(ell));
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) a[i][j] = Rat(G_[i][j]) / Rat(d_simple_[i]);
  Rat det(1);
  for (int col = 0; col < ell; ++col) {
    int piv = -1;
    for (int r = col; r < ell; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) throw validation_error("singular Cartan matrix");
    if (piv != col) { std::swap(a[piv], a[col]); det = -det; }
    det *= a[col][col];
    for (int r = col + 1; r < ell; ++r) {
      Rat f = a[r][col] / a[col][col];
      for (int cc = col; cc < ell; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  if (det.get_den() != 1 || det <= 0) throw validation_error("bad Cartan determinant");
  D_ = (int)det.get_num().get_si();
}

Weight RootSystem::zero_weight() const {
  Weight w;
  w.c.assign(rank(), 0);
  return w;
}

Weight RootSystem::simple_root(int i) const {
  Weight w = zero_weight();
  w.c[i] = 2 * D_;
  return w;
}

Weight RootSystem::fundamental_weight(int i) const {
  // solve G * x = d_i e_i over Q; coordinates have denominators dividing D
  int ell = rank();
  std::vector<std::vector<Rat>> a(ell, std::vector<Rat>(ell + 1));
  for (int r = 0; r < ell; ++r) {
    for (int cc = 0; cc < ell; ++cc) a[r][cc] = Rat(G_[r][cc]);
    a[r][ell] = (r == i) ? Rat(d_simple_[i]) : Rat(0);
  }
  for (int col = 0; col < ell; ++col) {
    int piv = -1;
    for (int r = col; r < ell; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    std::swap(a[piv], a[col]);
    for (int r = 0; r < ell; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / a[col][col];
      for (int cc = col; cc <= ell; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  Weight w = zero_weight();
  for (int r = 0; r < ell; ++r) {
    Rat x = a[r][ell] / a[r][r] * Rat(2 * D_);
    if (x.get_den() != 1)
      throw validation_error("fundamental weight off the 1/2D lattice");
    w.c[r] = (int64_t)x.get_num().get_si();
  }
  return w;
}

Weight RootSystem::rho() const {
  Weight w = zero_weight();
  for (int i = 0; i < rank(); ++i) w += fundamental_weight(i);
  return w;
}

Rat RootSystem::inner(const Weight& a, const Weight& b) const {
  Int num = 0;
  for (int i = 0; i < rank(); ++i) {
    if (!a.c[i]) continue;
    for (int j = 0; j < rank(); ++j) {
      if (!b.c[j]) continue;
      num += Int(a.c[i]) * Int(b.c[j]) * G_[i][j];
    }
  }
  Rat r(num);
  r /= Rat((long)(4L * D_ * D_));
  r.canonicalize();
  return r;
}

long RootSystem::vpow(const Weight& a, const Weight& b) const {
  // exponent of v^{(a,b)} = q^{(a,b)/2} in 1/(8D) units: 4D*(a,b)
  Int num = 0;
  for (int i = 0; i < rank(); ++i) {
    if (!a.c[i]) continue;
    for (int j = 0; j < rank(); ++j) {
      if (!b.c[j]) continue;
      num += Int(a.c[i]) * Int(b.c[j]) * G_[i][j];
    }
  }
  // 4D * num/(4D^2) = num/D
  if (num % D_ != 0) throw arith_error("inner product off the exponent lattice");
  return (long)Int(num / D_).get_si();
}

bool RootSystem::in_root_lattice(const Weight& a) const {
  for (auto x : a.c)
    if (x % (2 * D_) != 0) return false;
  return true;
}

bool RootSystem::in_weight_lattice(const Weight& a) const {
  // lambda in X iff (lambda, alpha_i)/d_i integral for all i
  for (int i = 0; i < rank(); ++i) {
    Rat r = inner(a, simple_root(i)) / Rat(d_simple_[i]);
    r.canonicalize();
    if (r.get_den() != 1) return false;
  }
  return true;
}

Weight RootSystem::reflect(int i, const Weight& a) const {
  // s_i(a) = a - ((a,alpha_i)/d_i) alpha_i ; coordinate-level, exact
  Int num = 0;
  for (int j = 0; j < rank(); ++j) num += Int(a.c[j]) * G_[i][j];
  // (a,alpha_i)/d_i in 2D-units along alpha_i: num/(2D * d_i)
  if (num % d_simple_[i] != 0) throw arith_error("reflection off lattice");
  Weight r = a;
  r.c[i] -= (int64_t)Int(num / d_simple_[i]).get_si();
  return r;
}

Weight RootSystem::weyl_apply(const std::vector<int>& word, const Weight& a) const {
  Weight r = a;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = reflect(*it, r);
  return r;
}

bool RootSystem::dominant(const Weight& a) const {
  for (int i = 0; i < rank(); ++i)
    if (inner(a, simple_root(i)) < 0) return false;
  return true;
}

void RootSystem::build_roots() {
  // all roots as the Weyl orbit of the simple roots
  std::set<std::vector<int64_t>> seen;
  std::vector<Weight> queue;
  for (int i = 0; i < rank(); ++i) {
    queue.push_back(simple_root(i));
    seen.insert(queue.back().c);
  }
  for (size_t k = 0; k < queue.size(); ++k) {
    Weight w = queue[k];
    for (int i = 0; i < rank(); ++i) {
      Weight u = reflect(i, w);
      if (seen.insert(u.c).second) queue.push_back(u);
    }
  }
  pos_roots_.clear();
  for (auto& v : seen) {
    bool pos = true;
    for (auto x : v) pos = pos && (x >= 0);
    if (pos) pos_roots_.push_back(Weight{v});
  }
}

void RootSystem::build_longest_word() {
  // represent a Weyl element by the images of the simple roots
  int ell = rank();
  auto apply_elt = [&](const std::vector<Weight>& elt, const Weight& a) {
    // a = (1/2D) sum c_i alpha_i; image = (1/2D) sum c_i elt[i]
    Weight r = zero_weight();
    for (int i = 0; i < ell; ++i) {
      if (!a.c[i]) continue;
      for (int j = 0; j < ell; ++j) r.c[j] += a.c[i] * elt[i].c[j] / (2 * D_);
    }
    return r;
  };
  auto is_negative = [&](const Weight& a) {
    for (auto x : a.c)
      if (x > 0) return false;
    return !a.is_zero();
  };
  std::vector<Weight> id;
  for (int i = 0; i < ell; ++i) id.push_back(simple_root(i));
  // build w0: keep multiplying on the right by s_i while length increases
  std::vector<Weight> w0 = id;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i = 0; i < ell; ++i) {
      // l(w s_i) > l(w) iff w(alpha_i) > 0
      if (!is_negative(apply_elt(w0, simple_root(i)))) {
        // w0 <- w0 * s_i : new images: (w0 s_i)(alpha_j) = w0(s_i(alpha_j))
        std::vector<Weight> nw(ell);
        for (int j = 0; j < ell; ++j) nw[j] = apply_elt(w0, reflect(i, simple_root(j)));
        w0 = nw;
        grew = true;
        break;
      }
    }
  }
  // peel from the left, lexicographically least letter each step:
  // w = s_i * w' with l(w') = l(w)-1 iff w^{-1}(alpha_i) < 0
  auto inverse_image = [&](const std::vector<Weight>& elt, const Weight& a) {
    // solve elt-matrix * x = a (columns are images of alpha_j)
    std::vector<std::vector<Rat>> m(ell, std::vector<Rat>(ell + 1));
    for (int r = 0; r < ell; ++r) {
      for (int j = 0; j < ell; ++j) m[r][j] = Rat(elt[j].c[r]);
      m[r][ell] = Rat(a.c[r]);
    }
    for (int col = 0; col < ell; ++col) {
      int piv = -1;
      for (int r = col; r < ell; ++r)
        if (m[r][col] != 0) { piv = r; break; }
      std::swap(m[piv], m[col]);
      for (int r = 0; r < ell; ++r) {
        if (r == col || m[r][col] == 0) continue;
        Rat f = m[r][col] / m[col][col];
        for (int cc = col; cc <= ell; ++cc) m[r][cc] -= f * m[col][cc];
      }
    }
    Weight x = zero_weight();
    for (int r = 0; r < ell; ++r) {
      Rat v = m[r][ell] / m[r][r] * Rat(2 * D_);
      x.c[r] = (int64_t)v.get_num().get_si();
    }
    return x;
  };
  word_.clear();
  std::vector<Weight> w = w0;
  auto is_identity = [&](const std::vector<Weight>& elt) {
    for (int j = 0; j < ell; ++j)
      if (!(elt[j] == simple_root(j))) return false;
    return true;
  };
  while (!is_identity(w)) {
    int pick = -1;
    for (int i = 0; i < ell; ++i) {
      if (is_negative(inverse_image(w, simple_root(i)))) { pick = i; break; }
    }
    if (pick < 0) throw validation_error("longest-word peeling failed");
    word_.push_back(pick);
    // w <- s_pick * w: images get reflected
    for (int j = 0; j < ell; ++j) w[j] = reflect(pick, w[j]);
  }
  // convex order gamma_j = s_{i_1}...s_{i_{j-1}}(alpha_{i_j}); replaces the
  // unordered positive-root list and must enumerate it exactly once
  std::vector<Weight> convex;
  for (size_t j = 0; j < word_.size(); ++j) {
    std::vector<int> prefix(word_.begin(), word_.begin() + j);
    convex.push_back(weyl_apply(prefix, simple_root(word_[j])));
  }
  std::set<std::vector<int64_t>> a, b;
  for (auto& w2 : pos_roots_) a.insert(w2.c);
  for (auto& w2 : convex) b.insert(w2.c);
  if (a != b || convex.size() != pos_roots_.size())
    throw validation_error("convex order does not enumerate the positive roots");
  pos_roots_ = convex;
  d_pos_.clear();
  for (auto& g : pos_roots_) {
    Rat n = inner(g, g);
    if (n.get_den() != 1 || n.get_num() % 2 != 0)
      throw validation_error("bad root length");
    d_pos_.push_back((int)Int(n.get_num() / 2).get_si());
  }
}

std::vector<int> RootSystem::reduce_word(const std::vector<int>& word) const {
  // deletion-based reduction: repeatedly apply the exchange property by
  // brute force on the action matrices (ranks are tiny)
  std::vector<int> w = word;
  auto length = [&](const std::vector<int>& u) {
    int len = 0;
    for (int j = 0; j < t(); ++j) {
      Weight im = weyl_apply(u, pos_roots_[j]);
      bool neg = true;
      for (auto x : im.c) neg = neg && (x <= 0);
      if (neg && !im.is_zero()) ++len;
    }
    return len;
  };
  bool changed = true;
  while (changed && (int)w.size() > length(w)) {
    changed = false;
    for (size_t i = 0; i < w.size() && !changed; ++i) {
      for (size_t j = i + 1; j < w.size() && !changed; ++j) {
        std::vector<int> u;
        for (size_t k = 0; k < w.size(); ++k)
          if (k != i && k != j) u.push_back(w[k]);
        if (weyl_apply(u, rho()) == weyl_apply(w, rho())) {
          w = u;
          changed = true;
        }
      }
    }
  }
  return w;
}

QScalar RootSystem::qdim(const Weight& lambda) const {
  if (!dominant(lambda)) throw validation_error("qdim: weight not dominant");
  const int u = unit();
  QScalar num(u, 1), den(u, 1);
  Weight rh = rho();
  for (int j = 0; j < t(); ++j) {
    // q^{(lambda+rho,alpha)} - 1 and q^{(rho,alpha)} - 1
    long e1 = 2 * vpow(lambda + rh, pos_roots_[j]);
    long e0 = 2 * vpow(rh, pos_roots_[j]);
    num *= (QScalar::monomial(u, e1) - QScalar(u, 1));
    den *= (QScalar::monomial(u, e0) - QScalar(u, 1));
  }
  QScalar pref = QScalar::monomial(u, -2 * vpow(lambda, rh));
  return (pref * num).divexact(den);
}

std::string RootSystem::describe() const {
  std::ostringstream os;
  os << spec_.name() << ": t=" << t() << " d=" << d_ << " D=" << D_
     << " h^=" << hv_ << " word=";
  for (auto i : word_) os << (i + 1);
  return os.str();
}

std::shared_ptr<const RootSystem> get_root_system(const LieAlgebraSpec& spec) {
  static std::map<std::string, std::shared_ptr<const RootSystem>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = spec.name();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto rs = std::make_shared<const RootSystem>(spec);
  cache[key] = rs;
  return rs;
}

std::shared_ptr<const RootSystem> get_root_system(const std::string& name) {
  return get_root_system(LieAlgebraSpec::parse(name));
}

}  // namespace qinv
