#include "sbf/homology.hpp"

#include "sbf/error.hpp"
#include "sbf/snf.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sbf {

// ---------------------------------------------------------------------------
// Complexes

long Complex::count(int d) const {
  if (d + 1 < 0 || d + 1 >= static_cast<int>(cells.size())) return 0;
  return static_cast<long>(cells[d + 1].size()) / (d + 1 == 0 ? 1 : d + 1);
}

long Complex::find(int d, const int* verts) const {
  if (d == -1) return cells.empty() ? -1 : 0;
  const long n = count(d);
  const int w = d + 1;
  long lo = 0, hi = n;
  while (lo < hi) {
    long mid = (lo + hi) / 2;
    const int* s = simplex(d, mid);
    if (std::lexicographical_compare(s, s + w, verts, verts + w))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < n && std::equal(verts, verts + w, simplex(d, lo))) return lo;
  return -1;
}

namespace {

// The empty simplex is stored as a single placeholder entry.
Complex empty_complex() {
  Complex C;
  C.cells.push_back({-1});
  return C;
}

}  // namespace

Complex order_complex(const Poset& P, int dim_cap, long flag_cap) {
  Complex C = empty_complex();
  long flags = 0;
  std::vector<int> chain;
  std::function<void()> extend = [&]() {
    const int d = static_cast<int>(chain.size()) - 1;
    if (static_cast<int>(C.cells.size()) <= d + 1) C.cells.emplace_back();
    C.cells[d + 1].insert(C.cells[d + 1].end(), chain.begin(), chain.end());
    require(++flags <= flag_cap, ErrorKind::Budget, "order complex exceeds the flag cap of " + std::to_string(flag_cap));
    const auto& up = P.above[chain.back()];
    if (d >= dim_cap) {
      if (!up.empty()) C.truncated = true;
      return;
    }
    for (int u : up) {
      chain.push_back(u);
      extend();
      chain.pop_back();
    }
  };
  for (int v = 0; v < P.size; ++v) {
    chain = {v};
    extend();
  }
  C.dim_cap = dim_cap;
  return C;
}

Complex complex_from_faces(const std::vector<std::vector<int>>& faces) {
  Complex C = empty_complex();
  std::vector<std::vector<std::vector<int>>> by_dim;
  for (auto f : faces) {
    if (f.empty()) continue;
    std::sort(f.begin(), f.end());
    require(std::adjacent_find(f.begin(), f.end()) == f.end(), ErrorKind::Input, "face with a repeated vertex");
    if (by_dim.size() < f.size()) by_dim.resize(f.size());
    by_dim[f.size() - 1].push_back(std::move(f));
  }
  for (auto& list : by_dim) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    C.cells.emplace_back();
    for (const auto& f : list) C.cells.back().insert(C.cells.back().end(), f.begin(), f.end());
  }
  for (int d = 1; d <= C.top_dim(); ++d)
    for (long i = 0; i < C.count(d); ++i) {
      const int* s = C.simplex(d, i);
      std::vector<int> face(d);
      for (int skip = 0; skip <= d; ++skip) {
        int t = 0;
        for (int j = 0; j <= d; ++j)
          if (j != skip) face[t++] = s[j];
        require(C.find(d - 1, face.data()) >= 0, ErrorKind::Input, "face list is not closed under faces");
      }
    }
  return C;
}

long reduced_euler(const Complex& C) {
  long e = 0;
  for (int d = -1; d <= C.top_dim(); ++d) e += (d % 2 == 0 ? 1 : -1) * C.count(d);
  return e;
}

// ---------------------------------------------------------------------------
// Boundary matrices and sparse elimination

namespace {

using SparseCol = std::vector<std::pair<int, long>>;  // (row, value), rows ascending

// Columns of the boundary C_d -> C_{d-1}; empty when d > top_dim.
std::vector<SparseCol> boundary(const Complex& C, int d) {
  std::vector<SparseCol> cols(C.count(d));
  if (d == 0) {
    for (auto& c : cols) c = {{0, 1}};
    return cols;
  }
  std::vector<int> face(d);
  for (long i = 0; i < C.count(d); ++i) {
    const int* s = C.simplex(d, i);
    for (int skip = 0; skip <= d; ++skip) {
      int t = 0;
      for (int j = 0; j <= d; ++j)
        if (j != skip) face[t++] = s[j];
      long r = C.find(d - 1, face.data());
      require(r >= 0, ErrorKind::Internal, "complex is not closed under faces");
      cols[i].emplace_back(static_cast<int>(r), skip % 2 == 0 ? 1 : -1);
    }
    std::sort(cols[i].begin(), cols[i].end());
  }
  return cols;
}

long mod_norm(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long mod_inv(long a, long p) {
  long r = 1, b = mod_norm(a, p), e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

struct RankResult {
  long rank = 0;
  std::vector<Int> torsion;
};

// Rank (and over Z the invariant factors > 1) of a sparse matrix. Unit pivots
// are taken in Markowitz order (shortest row, then shortest column), so free
// faces are eliminated first without fill-in; the residual without unit
// entries is finished with a dense Smith form.
RankResult sparse_rank(const std::vector<SparseCol>& cols, long nrows, long p) {
  using Row = std::vector<std::pair<int, long>>;  // (col, value), cols ascending
  std::vector<Row> rows(nrows);
  std::vector<long> colcnt(cols.size(), 0);
  for (size_t c = 0; c < cols.size(); ++c)
    for (auto [r, v] : cols[c]) {
      long val = p ? mod_norm(v, p) : v;
      if (val) {
        rows[r].emplace_back(static_cast<int>(c), val);
        ++colcnt[c];
      }
    }
  std::vector<std::vector<int>> colrows(cols.size());  // superset of the rows holding c
  for (long r = 0; r < nrows; ++r)
    for (auto [c, v] : rows[r]) colrows[c].push_back(static_cast<int>(r));
  std::vector<char> row_done(nrows, 0);
  auto is_unit = [&](long v) { return p ? v != 0 : (v == 1 || v == -1); };
  auto entry = [&](int r, int c) -> long {
    const Row& row = rows[r];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(c, LONG_MIN));
    return it != row.end() && it->first == c ? it->second : 0;
  };

  // Queue of candidate pivot rows keyed by length; rows without a unit entry
  // leave the queue until they change.
  std::set<std::pair<size_t, int>> queue;
  for (long r = 0; r < nrows; ++r)
    if (!rows[r].empty()) queue.emplace(rows[r].size(), static_cast<int>(r));

  RankResult res;
  Row merged;
  while (!queue.empty()) {
    const int piv = queue.begin()->second;
    queue.erase(queue.begin());
    int pc = -1;
    for (auto [c, v] : rows[piv])
      if (is_unit(v) && (pc < 0 || colcnt[c] < colcnt[pc])) pc = c;
    if (pc < 0) continue;
    const long pinv = p ? mod_inv(entry(piv, pc), p) : entry(piv, pc);
    const Row prow = rows[piv];
    row_done[piv] = 1;
    for (auto [c, v] : prow) --colcnt[c];
    std::vector<int> targets = colrows[pc];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int r : targets) {
      if (row_done[r]) continue;
      const long v = entry(r, pc);
      if (!v) continue;
      const long f = p ? v * pinv % p : v * pinv;
      const Row& a = rows[r];
      queue.erase({a.size(), r});
      merged.clear();
      size_t i = 0, j = 0;
      while (i < a.size() || j < prow.size()) {
        if (j == prow.size() || (i < a.size() && a[i].first < prow[j].first)) {
          merged.push_back(a[i++]);
          continue;
        }
        const int cc = prow[j].first;
        const bool had = i < a.size() && a[i].first == cc;
        __int128 val = static_cast<__int128>(had ? a[i++].second : 0) - static_cast<__int128>(f) * prow[j].second;
        ++j;
        if (p) {
          val %= p;
          if (val < 0) val += p;
        } else {
          require(val <= LONG_MAX && val >= LONG_MIN, ErrorKind::Budget, "integer overflow in elimination");
        }
        if (val != 0) {
          merged.emplace_back(cc, static_cast<long>(val));
          if (!had) {
            colrows[cc].push_back(r);
            ++colcnt[cc];
          }
        } else if (had) {
          --colcnt[cc];
        }
      }
      rows[r].swap(merged);
      if (!rows[r].empty()) queue.emplace(rows[r].size(), r);
    }
    ++res.rank;
  }

  // Residual: surviving rows, none holding a unit entry.
  std::vector<int> rr, rc;
  std::vector<int> cpos(cols.size(), -1);
  for (long r = 0; r < nrows; ++r)
    if (!row_done[r] && !rows[r].empty()) rr.push_back(static_cast<int>(r));
  if (rr.empty()) return res;
  for (int r : rr)
    for (auto [c, v] : rows[r])
      if (cpos[c] < 0) {
        cpos[c] = static_cast<int>(rc.size());
        rc.push_back(c);
      }
  require(!p, ErrorKind::Internal, "nonzero residual over a field");
  require(rr.size() <= 2000 && rc.size() <= 2000, ErrorKind::Budget,
          "dense residual of " + std::to_string(rr.size()) + " x " + std::to_string(rc.size()) + " too large");
  Ring Z = Ring::integers();
  Mat A = mat_zero(Z, static_cast<int>(rr.size()), static_cast<int>(rc.size()));
  for (size_t i = 0; i < rr.size(); ++i)
    for (auto [c, v] : rows[rr[i]]) A(static_cast<int>(i), cpos[c]) = Z.from_int(v);
  Snf s = smith(Z, A);
  res.rank += s.rank;
  for (int i = 0; i < s.rank; ++i) {
    Int d = abs(s.D(i, i).c[0]);
    if (d > 1) res.torsion.push_back(d);
  }
  std::sort(res.torsion.begin(), res.torsion.end());
  return res;
}

}  // namespace

bool boundary_squared_zero(const Complex& C, int d) {
  if (d < 1 || d > C.top_dim()) return true;
  auto outer = boundary(C, d);
  auto inner = boundary(C, d - 1);
  for (const auto& col : outer) {
    std::vector<std::pair<int, long>> acc;
    for (auto [r, v] : col)
      for (auto [r2, v2] : inner[r]) acc.emplace_back(r2, v * v2);
    std::sort(acc.begin(), acc.end());
    for (size_t i = 0; i < acc.size();) {
      long s = 0;
      size_t j = i;
      for (; j < acc.size() && acc[j].first == acc[i].first; ++j) s += acc[j].second;
      if (s) return false;
      i = j;
    }
  }
  return true;
}

HomologyProfile homology(const Complex& C, int up_to, long p) {
  require(up_to >= -1, ErrorKind::Input, "homology degree below -1");
  require(!(C.truncated && up_to + 1 > C.dim_cap), ErrorKind::Precondition,
          "complex truncated at dimension " + std::to_string(C.dim_cap) + ", degree " + std::to_string(up_to) +
              " needs dimension " + std::to_string(up_to + 1));
  // ranks[d] = rank of the boundary C_d -> C_{d-1}, d = 0 .. up_to + 1.
  std::vector<RankResult> ranks(up_to + 2);
  for (int d = 0; d <= up_to + 1; ++d) {
    if (d > C.top_dim()) continue;
    require(boundary_squared_zero(C, d), ErrorKind::Internal, "boundary of boundary is nonzero");
    ranks[d] = sparse_rank(boundary(C, d), C.count(d - 1), p);
  }
  HomologyProfile H;
  H.p = p;
  for (int k = -1; k <= up_to; ++k) {
    HomologyGroup g;
    g.degree = k;
    const long out = k >= 0 ? ranks[k].rank : 0;
    g.betti = C.count(k) - out - ranks[k + 1].rank;
    if (p == 0) g.torsion = ranks[k + 1].torsion;
    H.groups.push_back(std::move(g));
  }
  if (!C.truncated && up_to >= C.top_dim()) {
    long e = 0;
    for (const auto& g : H.groups) e += (g.degree % 2 == 0 ? 1 : -1) * g.betti;
    require(e == reduced_euler(C), ErrorKind::Internal, "Euler characteristic mismatch");
  }
  return H;
}

int homological_connectivity(const Complex& C, int cap) {
  int top = C.truncated ? C.dim_cap - 1 : C.top_dim();
  int upto = std::min(cap, top);
  HomologyProfile H = homology(C, std::max(upto, -1));
  int c = -2;
  for (int k = -1; k <= H.up_to(); ++k) {
    if (!H.vanishes(k)) return c;
    c = k;
  }
  if (!C.truncated && upto >= C.top_dim()) return kAcyclic;
  return c;
}

ConnectivityVerdict connectivity_verdict(const Complex& C, int claimed) {
  ConnectivityVerdict v;
  v.claimed = claimed;
  v.nonempty = C.count(0) > 0;
  v.pi1_caveat = claimed >= 1;
  if (claimed < -1) {
    v.vacuous = true;
    v.pass = true;
    v.detail = "bound below -1: no condition";
  }
  const int need = std::max(claimed, 0);
  const int avail = C.truncated ? C.dim_cap - 1 : need;
  HomologyProfile H = homology(C, std::min(need, avail));
  v.vanishing_through = -2;
  for (int k = -1; k <= H.up_to(); ++k) {
    if (!H.vanishes(k)) break;
    v.vanishing_through = k;
  }
  v.connected = v.nonempty && H.up_to() >= 0 && H.vanishes(0);
  if (v.vacuous) return v;
  require(H.up_to() >= claimed, ErrorKind::Precondition, "complex truncated below the claimed degree");
  v.pass = v.vanishing_through >= claimed;
  if (v.pass)
    v.detail = claimed == -1 ? "nonempty" : "reduced homology vanishes through degree " + std::to_string(claimed);
  else
    v.detail = "reduced H_" + std::to_string(v.vanishing_through + 1) + " is nonzero";
  if (v.pi1_caveat) v.detail += "; fundamental group not verified";
  return v;
}

// ---------------------------------------------------------------------------
// Section into P<S>

namespace {

bool order_preserving(const Poset& A, const Poset& B, const std::vector<int>& f) {
  for (int a = 0; a < A.size; ++a)
    for (int b : A.above[a])
      if (f[a] != f[b] && !std::binary_search(B.above[f[a]].begin(), B.above[f[a]].end(), f[b])) return false;
  return true;
}

}  // namespace

AddsetReport addset_check(const SeqPoset& P, long m, int max_degree, long flag_cap) {
  require(is_downward_closed(P), ErrorKind::Precondition, "poset is not downward closed");
  AddsetReport rep;
  // Hypothesis level: P itself (the empty v) and every P_v.
  long n = homological_connectivity(order_complex(order_of(P), INT_MAX, flag_cap), max_degree + 1);
  for (const auto& v : P.verts) {
    if (static_cast<long>(v.size()) - 2 >= n) continue;  // conn(P_v) >= -2 cannot lower n
    SeqPoset Pv = complement_poset(P, v);
    int c = homological_connectivity(order_complex(order_of(Pv), INT_MAX, flag_cap), max_degree + 1);
    n = std::min<long>(n, static_cast<long>(c) + static_cast<long>(v.size()));
  }
  rep.n = static_cast<int>(std::min<long>(n, kAcyclic));
  rep.checked_through = std::min(rep.n, max_degree);

  SeqPoset PS = product_poset(P, m);
  Poset O = order_of(P), OS = order_of(PS);
  auto sec = section_map(P, PS, m, 0);
  auto proj = projection_map(PS, P, m);
  rep.maps_ok = order_preserving(O, OS, sec) && order_preserving(OS, O, proj);
  for (int i = 0; i < P.size() && rep.maps_ok; ++i) rep.maps_ok = proj[sec[i]] == i;

  const int deg = std::max(rep.checked_through, -1);
  rep.base = homology(order_complex(O, deg + 1, flag_cap), deg);
  rep.product = homology(order_complex(OS, deg + 1, flag_cap), deg);
  rep.profiles_equal = true;
  for (int k = 0; k <= rep.checked_through; ++k)
    if (!(rep.base.at(k) == rep.product.at(k))) rep.profiles_equal = false;
  rep.pass = rep.maps_ok && rep.profiles_equal;
  return rep;
}

}  // namespace sbf
