#include "sbf/posets.hpp"

#include "sbf/error.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>

namespace sbf {

// ---------------------------------------------------------------------------
// Bitsets

long bits_count(const Bits& b) {
  long c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}

std::vector<long> bits_list(const Bits& b) {
  std::vector<long> out;
  for (size_t i = 0; i < b.size(); ++i) {
    std::uint64_t w = b[i];
    while (w) {
      int t = std::countr_zero(w);
      out.push_back(static_cast<long>(i * 64 + t));
      w &= w - 1;
    }
  }
  return out;
}

bool bits_subset(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// CodeSpace

CodeSpace::CodeSpace(const Form& M, long max_size) : M_(M), n_(M.rank()) {
  const Ring& R = M.R;
  require(R.is_field(), ErrorKind::Unsupported, "finite constructions need a finite field");
  q_ = static_cast<int>(R.field_order());
  size_ = 1;
  for (int i = 0; i < n_; ++i) {
    pow_.push_back(size_);
    size_ *= q_;
    require(size_ <= max_size, ErrorKind::Budget, "vector space too large for exhaustive enumeration");
  }
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  res_.resize(q_);
  const Mod2Ctx& m = R.mod2();
  for (int a = 0; a < q_; ++a) {
    RElem ea = R.element(a);
    neg_[a] = static_cast<int>(R.index_of(R.neg(ea)));
    if (a) inv_[a] = static_cast<int>(R.index_of(*R.unit_inverse(ea)));
    res_[a] = m.reduce(R, ea);
    for (int b = 0; b < q_; ++b) {
      RElem eb = R.element(b);
      add_[a * q_ + b] = static_cast<int>(R.index_of(R.add(ea, eb)));
      mul_[a * q_ + b] = static_cast<int>(R.index_of(R.mul(ea, eb)));
    }
  }
  digits_.resize(static_cast<size_t>(size_) * n_);
  for (long x = 0; x < size_; ++x) {
    long c = x;
    for (int i = 0; i < n_; ++i) {
      digits_[static_cast<size_t>(x) * n_ + i] = static_cast<int>(c % q_);
      c /= q_;
    }
  }
  std::vector<int> G(n_ * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) G[i * n_ + j] = static_cast<int>(R.index_of(M.G(i, j)));
  gx_.resize(size_);
  for (long x = 0; x < size_; ++x) {
    long code = 0;
    for (int i = 0; i < n_; ++i) {
      int s = 0;
      for (int j = 0; j < n_; ++j) s = add_el(s, mul_el(G[i * n_ + j], digit(x, j)));
      code += s * pow_[i];
    }
    gx_[x] = code;
  }
  const size_t words = static_cast<size_t>((size_ + 63) / 64);
  orth_.assign(size_, Bits(words, 0));
  iso_.assign(words, 0);
  for (long x = 0; x < size_; ++x) {
    for (long y = 0; y < size_; ++y)
      if (pair(x, y) == 0) orth_[x][y / 64] |= std::uint64_t(1) << (y % 64);
    if (value(x) == 0) iso_[x / 64] |= std::uint64_t(1) << (x % 64);
  }
}

long CodeSpace::add(long x, long y) const {
  long c = 0;
  for (int i = 0; i < n_; ++i) c += add_el(digit(x, i), digit(y, i)) * pow_[i];
  return c;
}

long CodeSpace::sub(long x, long y) const { return add(x, scale(neg_el(1), y)); }

long CodeSpace::scale(int a, long x) const {
  long c = 0;
  for (int i = 0; i < n_; ++i) c += mul_el(a, digit(x, i)) * pow_[i];
  return c;
}

int CodeSpace::pair(long x, long y) const {
  const long gy = gx_[y];
  int s = 0;
  for (int i = 0; i < n_; ++i) s = add_el(s, mul_el(digit(x, i), digit(gy, i)));
  return s;
}

Vec CodeSpace::vec(long x) const {
  Vec v(n_);
  for (int i = 0; i < n_; ++i) v[i] = M_.R.element(digit(x, i));
  return v;
}

long CodeSpace::code(const Vec& v) const {
  long c = 0;
  for (int i = 0; i < n_; ++i) c += M_.R.index_of(v[i]) * pow_[i];
  return c;
}

Mat CodeSpace::matrix(const std::vector<long>& cols) const {
  std::vector<Vec> vs;
  for (long c : cols) vs.push_back(vec(c));
  return cols_matrix(M_.R, n_, vs);
}

std::vector<long> CodeSpace::span(const std::vector<long>& gens) const {
  std::vector<char> mark(size_, 0);
  std::vector<long> cur = {0};
  mark[0] = 1;
  for (long g : gens) {
    std::vector<long> add_list;
    for (long s : cur)
      for (int c = 1; c < q_; ++c) {
        long t = add(s, scale(c, g));
        if (!mark[t]) {
          mark[t] = 1;
          add_list.push_back(t);
        }
      }
    cur.insert(cur.end(), add_list.begin(), add_list.end());
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

Bits CodeSpace::perp_bits(const std::vector<long>& gens) const {
  Bits b(static_cast<size_t>((size_ + 63) / 64), ~std::uint64_t(0));
  if (size_ % 64) b.back() = (std::uint64_t(1) << (size_ % 64)) - 1;
  for (long g : gens)
    for (size_t i = 0; i < b.size(); ++i) b[i] &= orth_[g][i];
  return b;
}

std::vector<long> CodeSpace::perp(const std::vector<long>& gens) const { return bits_list(perp_bits(gens)); }

bool CodeSpace::independent(const std::vector<long>& seq) const {
  long expect = 1;
  for (size_t i = 0; i < seq.size(); ++i) expect *= q_;
  return static_cast<long>(span(seq).size()) == expect;
}

// ---------------------------------------------------------------------------
// Sequence posets

int SeqPoset::find(const Seq& s) const {
  auto it = index.find(s);
  return it == index.end() ? -1 : it->second;
}

long SeqPoset::count_len(int k) const {
  return std::count_if(verts.begin(), verts.end(), [&](const Seq& s) { return static_cast<int>(s.size()) == k; });
}

SeqPoset make_seq_poset(std::string label, std::vector<Seq> verts) {
  std::sort(verts.begin(), verts.end(), [](const Seq& a, const Seq& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  SeqPoset P;
  P.label = std::move(label);
  P.verts = std::move(verts);
  for (int i = 0; i < P.size(); ++i) P.index.emplace(P.verts[i], i);
  return P;
}

bool is_subsequence(const Seq& small, const Seq& big) {
  size_t j = 0;
  for (size_t i = 0; i < big.size() && j < small.size(); ++i)
    if (big[i] == small[j]) ++j;
  return j == small.size();
}

std::vector<Seq> proper_subsequences(const Seq& v) {
  const int k = static_cast<int>(v.size());
  std::vector<Seq> out;
  for (int mask = 1; mask < (1 << k) - 1; ++mask) {
    Seq s;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) s.push_back(v[i]);
    out.push_back(std::move(s));
  }
  return out;
}

bool is_downward_closed(const SeqPoset& P) {
  for (const auto& v : P.verts)
    for (const auto& s : proper_subsequences(v))
      if (P.find(s) < 0) return false;
  return true;
}

Poset order_of(const SeqPoset& P) {
  Poset O;
  O.size = P.size();
  O.above.assign(O.size, {});
  for (int j = 0; j < P.size(); ++j)
    for (const auto& s : proper_subsequences(P.verts[j])) {
      int i = P.find(s);
      if (i >= 0) O.above[i].push_back(j);
    }
  for (auto& a : O.above) std::sort(a.begin(), a.end());
  return O;
}

Poset induced(const Poset& P, const std::vector<int>& verts) {
  std::vector<int> pos(P.size, -1);
  for (size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
  Poset Q;
  Q.size = static_cast<int>(verts.size());
  Q.above.assign(Q.size, {});
  for (size_t i = 0; i < verts.size(); ++i)
    for (int u : P.above[verts[i]])
      if (pos[u] >= 0) Q.above[i].push_back(pos[u]);
  return Q;
}

namespace {

bool leq(const Poset& P, int a, int b) {
  return a == b || std::binary_search(P.above[a].begin(), P.above[a].end(), b);
}

}  // namespace

std::vector<int> link_minus(const Poset& P, int v) {
  std::vector<int> out;
  for (int u = 0; u < P.size; ++u)
    if (u != v && leq(P, u, v)) out.push_back(u);
  return out;
}

std::vector<int> link_plus(const Poset& P, int v) { return P.above[v]; }

std::vector<int> link(const Poset& P, int v) {
  std::vector<int> out = link_minus(P, v);
  for (int u : P.above[v]) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> fiber(const Poset& Q, const std::vector<int>& f, int w) {
  std::vector<int> out;
  for (size_t v = 0; v < f.size(); ++v)
    if (leq(Q, f[v], w)) out.push_back(static_cast<int>(v));
  return out;
}

SeqPoset build_sequences(const CodeSpace& S, SeqKind kind, int max_len, const std::vector<long>& candidates,
                         const PosetBudget& b) {
  std::vector<long> cand = candidates;
  if (cand.empty())
    for (long x = 1; x < S.size(); ++x) cand.push_back(x);
  if (kind != SeqKind::Unimodular) {
    std::vector<long> keep;
    for (long x : cand)
      if (S.value(x) == 0) keep.push_back(x);
    cand.swap(keep);
  }
  std::vector<Seq> verts;
  std::vector<char> in_span(S.size(), 0);
  in_span[0] = 1;
  std::vector<long> span_list = {0};
  Seq cur;
  std::function<void()> dfs = [&]() {
    if (static_cast<int>(cur.size()) >= max_len) return;
    for (long x : cand) {
      if (in_span[x]) continue;
      if (kind == SeqKind::IsotropicUnimodular) {
        bool ok = true;
        for (long y : cur)
          if (S.pair(x, y) != 0) {
            ok = false;
            break;
          }
        if (!ok) continue;
      }
      cur.push_back(x);
      verts.push_back(cur);
      require(static_cast<long>(verts.size()) <= b.vertex_cap, ErrorKind::Budget,
              "poset exceeds the vertex cap of " + std::to_string(b.vertex_cap));
      const size_t old = span_list.size();
      for (size_t i = 0; i < old; ++i)
        for (int c = 1; c < S.q(); ++c) {
          long t = S.add(span_list[i], S.scale(c, x));
          if (!in_span[t]) {
            in_span[t] = 1;
            span_list.push_back(t);
          }
        }
      dfs();
      for (size_t i = old; i < span_list.size(); ++i) in_span[span_list[i]] = 0;
      span_list.resize(old);
      cur.pop_back();
    }
  };
  dfs();
  const char* names[] = {"U", "U'", "IU"};
  return make_seq_poset(names[static_cast<int>(kind)], std::move(verts));
}

SeqPoset build_U(const CodeSpace& S, int max_len, const PosetBudget& b) {
  return build_sequences(S, SeqKind::Unimodular, max_len, {}, b);
}
SeqPoset build_Uprime(const CodeSpace& S, int max_len, const PosetBudget& b) {
  return build_sequences(S, SeqKind::IsotropicEach, max_len, {}, b);
}
SeqPoset build_IU(const CodeSpace& S, int max_len, const PosetBudget& b) {
  return build_sequences(S, SeqKind::IsotropicUnimodular, max_len, {}, b);
}

SeqPoset complement_poset(const SeqPoset& P, const Seq& x) {
  require(P.find(x) >= 0, ErrorKind::Precondition, "sequence is not a vertex of the poset");
  std::vector<Seq> out;
  for (const auto& v : P.verts) {
    if (v.size() <= x.size()) continue;
    if (!std::equal(x.begin(), x.end(), v.end() - static_cast<long>(x.size()))) continue;
    out.emplace_back(v.begin(), v.end() - static_cast<long>(x.size()));
  }
  return make_seq_poset(P.label + "_x", std::move(out));
}

SeqPoset product_poset(const SeqPoset& P, long m) {
  require(m >= 1, ErrorKind::Input, "label set must be nonempty");
  std::vector<Seq> out;
  for (const auto& v : P.verts) {
    const size_t k = v.size();
    std::vector<long> lab(k, 0);
    for (;;) {
      Seq s(k);
      for (size_t i = 0; i < k; ++i) s[i] = v[i] * m + lab[i];
      out.push_back(std::move(s));
      size_t p = 0;
      while (p < k && ++lab[p] == m) lab[p++] = 0;
      if (p == k) break;
    }
  }
  return make_seq_poset(P.label + "<S>", std::move(out));
}

std::vector<int> section_map(const SeqPoset& P, const SeqPoset& PS, long m, long s0) {
  std::vector<int> f(P.size());
  for (int i = 0; i < P.size(); ++i) {
    Seq s = P.verts[i];
    for (auto& e : s) e = e * m + s0;
    f[i] = PS.find(s);
    require(f[i] >= 0, ErrorKind::Internal, "section leaves the product poset");
  }
  return f;
}

std::vector<int> projection_map(const SeqPoset& PS, const SeqPoset& P, long m) {
  std::vector<int> f(PS.size());
  for (int i = 0; i < PS.size(); ++i) {
    Seq s = PS.verts[i];
    for (auto& e : s) e /= m;
    f[i] = P.find(s);
    require(f[i] >= 0, ErrorKind::Internal, "projection leaves the base poset");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

// Smallest code x with pair(v_i, x) = delta_ij.
long dual_code(const CodeSpace& S, const Seq& v, size_t j) {
  for (long x = 0; x < S.size(); ++x) {
    bool ok = true;
    for (size_t i = 0; i < v.size() && ok; ++i) ok = S.pair(v[i], x) == (i == j ? 1 : 0);
    if (ok) return x;
  }
  fail(ErrorKind::Precondition, "sequence is not unimodular");
}

bool two_invertible(const CodeSpace& S) { return S.ring().characteristic() != 2; }

// Shift w by a multiple of v so that its value vanishes when 2 is invertible.
long normalize_code(const CodeSpace& S, long v, long w) {
  if (!two_invertible(S)) return w;
  int half = S.inv_el(S.add_el(1, 1));
  int t = S.neg_el(S.mul_el(S.value(w), half));
  return S.add(w, S.scale(t, v));
}

// w_j -= sum_{i<j} pair(w_i, w_j) v_i, in place.
void orthogonalize(const CodeSpace& S, const Seq& v, Seq& w) {
  for (size_t j = 0; j < w.size(); ++j)
    for (size_t i = 0; i < j; ++i) {
      int c = S.pair(w[i], w[j]);
      if (c) w[j] = S.sub(w[j], S.scale(c, v[i]));
    }
}

}  // namespace

WitnessCodes witness_codes(const CodeSpace& S, const Seq& v) {
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      require(S.pair(v[i], v[j]) == 0, ErrorKind::Precondition, "sequence is not isotropic");
  Seq w;
  for (size_t j = 0; j < v.size(); ++j) w.push_back(dual_code(S, v, j));
  orthogonalize(S, v, w);
  for (size_t j = 0; j < v.size(); ++j) w[j] = normalize_code(S, v[j], w[j]);
  return {v, w};
}

std::vector<Seq> all_witnesses(const CodeSpace& S, const Seq& v, long cap) {
  const size_t k = v.size();
  std::vector<std::vector<long>> cand(k);
  for (long x = 0; x < S.size(); ++x)
    for (size_t j = 0; j < k; ++j) {
      bool ok = true;
      for (size_t i = 0; i < k && ok; ++i) ok = S.pair(v[i], x) == (i == j ? 1 : 0);
      if (ok) cand[j].push_back(x);
    }
  std::vector<Seq> out;
  Seq cur;
  std::function<void(size_t)> dfs = [&](size_t j) {
    if (j == k) {
      out.push_back(cur);
      require(static_cast<long>(out.size()) <= cap, ErrorKind::Budget, "too many witnessing sequences");
      return;
    }
    for (long x : cand[j]) {
      bool ok = true;
      for (size_t i = 0; i < j && ok; ++i) ok = S.pair(cur[i], x) == 0;
      if (!ok) continue;
      cur.push_back(x);
      dfs(j + 1);
      cur.pop_back();
    }
  };
  dfs(0);
  return out;
}

std::vector<long> plane_complement(const CodeSpace& S, const Seq& v, const Seq& w) {
  Seq g = v;
  g.insert(g.end(), w.begin(), w.end());
  return S.perp(g);
}

std::vector<int> parity_of_codes(const CodeSpace& S, const std::vector<long>& codes) {
  std::set<int> r;
  for (long x : codes) r.insert(S.residue(S.value(x)));
  return {r.begin(), r.end()};
}

// ---------------------------------------------------------------------------
// F-likeness

namespace {

// A basis of the subspace given by its codes, greedily in ascending order.
std::vector<long> basis_of(const CodeSpace& S, const std::vector<long>& codes) {
  std::vector<long> basis;
  std::vector<char> mark(S.size(), 0);
  std::vector<long> span = {0};
  mark[0] = 1;
  for (long x : codes) {
    if (mark[x]) continue;
    basis.push_back(x);
    const size_t old = span.size();
    for (size_t i = 0; i < old; ++i)
      for (int c = 1; c < S.q(); ++c) {
        long t = S.add(span[i], S.scale(c, x));
        if (!mark[t]) {
          mark[t] = 1;
          span.push_back(t);
        }
      }
  }
  return basis;
}

Form gram_of(const CodeSpace& S, const std::vector<long>& basis) {
  const Ring& R = S.ring();
  const int k = static_cast<int>(basis.size());
  if (k == 0) return zero_form(R);
  Mat G = mat_zero(R, k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = R.element(S.pair(basis[i], basis[j]));
  return make_form(R, G);
}

int log_q(long size, int q) {
  int k = 0;
  while (size > 1) {
    size /= q;
    ++k;
  }
  return k;
}

}  // namespace

FLikeOracle::FLikeOracle(const CodeSpace& S, const Groupoid& G) : S_(S), G_(G) {
  require(S.ring() == G.R, ErrorKind::Unsupported, "groupoid over a different ring");
  require(S.ring().characteristic() == 2, ErrorKind::Unsupported,
          "F-likeness engine classifies complements by (rank, alternating): characteristic 2 only");
  std::vector<long> all(S.size());
  std::iota(all.begin(), all.end(), 0L);
  PM_ = parity_of_codes(S, all);
  cM_ = sbf::complexity(S.form());
  r_el_ = S.element_index(G.f);
}

Bits FLikeOracle::complement_bits(const Seq& v, const Seq& w) const {
  Seq g = v;
  g.insert(g.end(), w.begin(), w.end());
  return S_.perp_bits(g);
}

const FLikeOracle::Info& FLikeOracle::info(const Bits& comp) const {
  const int rank = log_q(bits_count(comp), S_.q());
  const bool alternating = bits_subset(comp, S_.isotropic_bits());
  auto key = std::make_pair(rank, alternating);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Form N = gram_of(S_, basis_of(S_, bits_list(comp)));
  Info inf;
  if (rank > 0) {
    inf.g = g_F(N, G_.f).value;
    inf.member = groupoid_member(G_, N);
  }
  return cache_.emplace(key, inf).first->second;
}

bool FLikeOracle::parity_preserving(const Seq& v, const Seq& w) const {
  Bits comp = complement_bits(v, w);
  // Characteristic 2: the values on a subspace are 0 or the whole field.
  std::vector<int> P = {0};
  if (!bits_subset(comp, S_.isotropic_bits())) {
    std::set<int> r;
    for (int a = 0; a < S_.q(); ++a) r.insert(S_.residue(a));
    P.assign(r.begin(), r.end());
  }
  return P == PM_;
}

int FLikeOracle::g_complement(const Seq& v, const Seq& w) const { return info(complement_bits(v, w)).g; }

bool FLikeOracle::complement_in_groupoid(const Seq& v, const Seq& w) const {
  return info(complement_bits(v, w)).member;
}

bool FLikeOracle::fully_F_like(const Seq& v) const {
  Seq w = witness_codes(S_, v).w;
  return parity_preserving(v, w) && g_complement(v, w) >= 1;
}

bool FLikeOracle::partly_F_like(const Seq& w) const {
  const Mod2Ctx& m = S_.ring().mod2();
  const int rc = m.sclass[S_.residue(r_el_)];
  for (long x : w)
    if (m.sclass[S_.residue(S_.value(x))] != rc) return false;
  return true;
}

std::vector<bool> FLikeOracle::realstuff_criteria(const Seq& v) const {
  std::vector<Seq> ws = all_witnesses(S_, v);
  bool pp_all = true, all_in = true, all_g = true, some_in = false, some_g = false, fully = false;
  for (const auto& w : ws) {
    pp_all = pp_all && parity_preserving(v, w);
    const Info& inf = info(complement_bits(v, w));
    all_in = all_in && inf.member;
    all_g = all_g && inf.g >= 1;
    some_in = some_in || inf.member;
    some_g = some_g || inf.g >= 1;
    fully = fully || (partly_F_like(w) && inf.member);
  }
  return {fully, pp_all && all_in, pp_all && all_g, pp_all && some_in, pp_all && some_g};
}

std::optional<Seq> FLikeOracle::create_partly_F_like(const Seq& v) const {
  Seq w = witness_codes(S_, v).w;
  if (!parity_preserving(v, w)) return std::nullopt;
  const Mod2Ctx& m = S_.ring().mod2();
  const int rres = S_.residue(r_el_);
  for (size_t i = 0; i < w.size(); ++i) {
    if (m.sclass[S_.residue(S_.value(w[i]))] == m.sclass[rres]) continue;
    std::vector<long> comp = bits_list(complement_bits(v, w));
    const int target = S_.residue(S_.value(w[i]));
    long x = -1, y = -1;
    for (long c : comp) {
      int r = S_.residue(S_.value(c));
      if (x < 0 && r == target) x = c;
      if (y < 0 && r == rres) y = c;
    }
    if (x < 0 || y < 0) return std::nullopt;
    w[i] = S_.add(w[i], S_.add(x, y));
  }
  return w;
}

std::optional<Seq> FLikeOracle::reader_friendly_witness(const Seq& v) const {
  require(cM_ > 0, ErrorKind::Precondition, "needs c(M) > 0");
  Seq w = witness_codes(S_, v).w;
  Bits compb = complement_bits(v, w);
  if (bits_subset(compb, S_.isotropic_bits())) return w;  // P(e^perp) = 0: already split
  // P(e^perp) = P(M): push every value into the complement's parity.
  std::vector<long> comp = bits_list(compb);
  for (size_t i = 0; i < w.size(); ++i) {
    const int val = S_.value(w[i]);
    if (val == 0) continue;
    long z = -1;
    for (long c : comp)
      if (S_.value(c) == val) {
        z = c;
        break;
      }
    if (z < 0) return std::nullopt;
    w[i] = S_.add(w[i], z);
  }
  orthogonalize(S_, v, w);
  return w;
}

SeqPoset build_FIU(const FLikeOracle& O, int max_len, const PosetBudget& b) {
  SeqPoset IU = build_IU(O.space(), max_len, b);
  std::vector<Seq> keep;
  for (const auto& s : IU.verts)
    if (O.fully_F_like(s)) keep.push_back(s);
  return make_seq_poset("FIU", std::move(keep));
}

SeqPoset build_FU(const FLikeOracle& O, int max_len, const PosetBudget& b) {
  const CodeSpace& S = O.space();
  const int r = S.element_index(O.groupoid().f);
  std::vector<Seq> verts;
  Seq vs, ws, cur;
  std::function<void()> dfs = [&]() {
    if (static_cast<int>(vs.size()) >= max_len) return;
    Seq g = vs;
    g.insert(g.end(), ws.begin(), ws.end());
    std::vector<long> comp = S.perp(g);
    for (long x : comp) {
      if (x == 0 || S.value(x) != 0) continue;
      for (long y : comp) {
        if (S.pair(x, y) != 1 || S.value(y) != r) continue;
        vs.push_back(x);
        ws.push_back(y);
        if (O.complement_in_groupoid(vs, ws)) {
          cur.push_back(x * S.size() + y);
          verts.push_back(cur);
          require(static_cast<long>(verts.size()) <= b.vertex_cap, ErrorKind::Budget, "FU exceeds the vertex cap");
          dfs();
          cur.pop_back();
        }
        vs.pop_back();
        ws.pop_back();
      }
    }
  };
  dfs();
  return make_seq_poset("FU", std::move(verts));
}

long count_F_embeddings(const FLikeOracle& O, int k) {
  // Independent route: images of the standard basis f_1, f_1', ... are
  // enumerated column by column; the Gram of F^k and complement membership
  // are checked on the generic form machinery.
  const CodeSpace& S = O.space();
  const Form& M = S.form();
  const Ring& R = M.R;
  const Form Fk = power(theta(R, O.groupoid().f), k);
  std::vector<int> gram(4 * k * k);
  for (int i = 0; i < 2 * k; ++i)
    for (int j = 0; j < 2 * k; ++j) gram[i * 2 * k + j] = S.element_index(Fk.G(i, j));
  long count = 0;
  std::vector<long> cols;
  std::function<void()> dfs = [&]() {
    const int j = static_cast<int>(cols.size());
    if (j == 2 * k) {
      Mat E = S.matrix(cols);
      if (mat_pair(R, E, M.G, E) != Fk.G) return;
      SubForm comp = orthogonal_complement(M, E);
      if (comp.form.rank() > 0 && groupoid_member(O.groupoid(), comp.form)) ++count;
      return;
    }
    for (long x = 0; x < S.size(); ++x) {
      bool ok = S.pair(x, x) == gram[j * 2 * k + j];
      for (int i = 0; i < j && ok; ++i) ok = S.pair(cols[i], x) == gram[i * 2 * k + j];
      if (!ok) continue;
      cols.push_back(x);
      dfs();
      cols.pop_back();
    }
  };
  dfs();
  return count;
}

GvReport g_v(const FLikeOracle& O, const Seq& v) {
  const int k = static_cast<int>(v.size());
  const int c = O.complexity();
  require(k >= c + 2, ErrorKind::Precondition, "g_v needs |v| >= c(M) + 2");
  const int full = 1 << k;
  std::vector<char> fully(full, 0), pp(full, 0);
  for (int mask = 1; mask < full; ++mask) {
    Seq s;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) s.push_back(v[i]);
    pp[mask] = O.parity_preserving(s);
    fully[mask] = O.fully_F_like(s);
  }
  GvReport rep;
  for (int mask = 1; mask < full; ++mask)
    if (fully[mask]) rep.max_fully = std::max(rep.max_fully, std::popcount(static_cast<unsigned>(mask)));
  rep.g_v = k - rep.max_fully;
  const int top = rep.max_fully;
  rep.bound_ok = rep.g_v >= 0 && rep.g_v <= c + 1 && top >= 1;
  rep.prop1 = top >= 1;
  rep.prop2 = true;
  for (int mask = 1; mask < full && rep.prop2; ++mask) {
    if (!fully[mask]) continue;
    bool ext = false;
    for (int sup = 1; sup < full && !ext; ++sup)
      ext = fully[sup] && (sup & mask) == mask && std::popcount(static_cast<unsigned>(sup)) == top;
    rep.prop2 = ext;
  }
  rep.prop3 = true;
  for (int mask = 1; mask < full; ++mask)
    if (std::popcount(static_cast<unsigned>(mask)) == top && pp[mask] && !fully[mask]) rep.prop3 = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Complement isomorphism

ComplementCheck complement_check(const CodeSpace& S, const SeqPoset& IU, const Seq& x, int max_len) {
  ComplementCheck out;
  out.local = complement_poset(IU, x);
  WitnessCodes wc = witness_codes(S, x);
  std::vector<long> Ncodes = plane_complement(S, x, wc.w);
  std::vector<long> Nbasis = basis_of(S, Ncodes);
  out.N = gram_of(S, Nbasis);
  std::vector<long> cand(Ncodes.begin() + 1, Ncodes.end());  // drop 0
  SeqPoset IUN = cand.empty() ? make_seq_poset("IU", {})
                              : build_sequences(S, SeqKind::IsotropicUnimodular, max_len, cand);
  out.zN = IUN.max_len();
  std::vector<long> span = S.span(x);
  const long m = static_cast<long>(span.size());
  SeqPoset prod = product_poset(IUN, m);
  std::vector<Seq> comp;
  std::set<Seq> image;
  for (const auto& s : prod.verts) {
    Seq enc(s.size()), img(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
      long v = s[i] / m, sc = span[s[i] % m];
      enc[i] = v * S.size() + sc;
      img[i] = S.add(v, sc);
    }
    comp.push_back(enc);
    image.insert(img);
  }
  out.comparison = make_seq_poset("IU(N)<span>", std::move(comp));
  std::set<Seq> local(out.local.verts.begin(), out.local.verts.end());
  out.bijective = image.size() == static_cast<size_t>(out.comparison.size()) && image == local;
  return out;
}

// ---------------------------------------------------------------------------
// Matroid complexes

namespace {

struct SmallField {
  int q;
  std::vector<int> add, mul, inv;
};

int rank_of(const SmallField& F, std::vector<std::vector<int>> rows) {
  int rank = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][c]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    int iv = F.inv[rows[rank][c]];
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || !rows[r][c]) continue;
      int f = F.mul[rows[r][c] * F.q + iv];
      for (int t = 0; t < cols; ++t) {
        int sub = F.mul[f * F.q + rows[rank][t]];
        // rows[r][t] -= sub
        int negsub = 0;
        for (int z = 0; z < F.q; ++z)
          if (F.add[sub * F.q + z] == 0) negsub = z;
        rows[r][t] = F.add[rows[r][t] * F.q + negsub];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

MatroidComplex matroid_good_faces(const Ring& R, const std::vector<Vec>& vectors) {
  require(R.is_field(), ErrorKind::Unsupported, "matroid complexes need a finite field");
  require(!vectors.empty(), ErrorKind::Input, "no vectors");
  SmallField F;
  F.q = static_cast<int>(R.field_order());
  F.add.resize(F.q * F.q);
  F.mul.resize(F.q * F.q);
  F.inv.assign(F.q, 0);
  for (int a = 0; a < F.q; ++a) {
    if (a) F.inv[a] = static_cast<int>(R.index_of(*R.unit_inverse(R.element(a))));
    for (int b = 0; b < F.q; ++b) {
      F.add[a * F.q + b] = static_cast<int>(R.index_of(R.add(R.element(a), R.element(b))));
      F.mul[a * F.q + b] = static_cast<int>(R.index_of(R.mul(R.element(a), R.element(b))));
    }
  }
  const int N = static_cast<int>(vectors.size());
  const int n = static_cast<int>(vectors[0].size());
  std::vector<std::vector<int>> rows(N);
  for (int i = 0; i < N; ++i)
    for (const auto& e : vectors[i]) rows[i].push_back(static_cast<int>(R.index_of(e)));
  require(rank_of(F, rows) == n, ErrorKind::Input, "vectors do not span the space");
  MatroidComplex X;
  X.k = N - 1;
  X.n = n;
  const int fsize = X.k - n + 1;  // vertices of a good face
  // Complement spans <=> face allowed; facets are faces of size fsize whose
  // complement is a basis.
  auto spans_without = [&](unsigned mask) {
    std::vector<std::vector<int>> r;
    for (int i = 0; i < N; ++i)
      if (!(mask >> i & 1)) r.push_back(rows[i]);
    return rank_of(F, r) == n;
  };
  std::vector<unsigned> faces;
  for (unsigned mask = 0; mask < (1u << N); ++mask)
    if (std::popcount(mask) <= fsize && spans_without(mask)) faces.push_back(mask);
  std::sort(faces.begin(), faces.end(), [](unsigned a, unsigned b) {
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
    return a < b;
  });
  std::set<unsigned> face_set(faces.begin(), faces.end());
  auto to_list = [&](unsigned mask) {
    std::vector<int> v;
    for (int i = 0; i < N; ++i)
      if (mask >> i & 1) v.push_back(i);
    return v;
  };
  for (unsigned f : faces) {
    X.faces.push_back(to_list(f));
    if (std::popcount(f) == fsize) X.facets.push_back(to_list(f));
  }
  X.exchange_ok = true;
  for (unsigned a : faces)
    for (unsigned b : faces) {
      if (std::popcount(a) <= std::popcount(b)) continue;
      bool found = false;
      unsigned diff = a & ~b;
      while (diff && !found) {
        unsigned bit = diff & (~diff + 1);
        found = face_set.count(b | bit) > 0;
        diff &= diff - 1;
      }
      if (!found) X.exchange_ok = false;
    }
  return X;
}

}  // namespace sbf
