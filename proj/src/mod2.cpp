#include "sbf/mod2.hpp"

#include "sbf/error.hpp"

#include <algorithm>
#include <set>

namespace sbf {

namespace {

// floor((P + sqrt(D)) / Q) for non-square D.
Int cf_floor(const Int& P, const Int& Q, const Int& s) {
  if (Q > 0) return floor_div(P + s, Q);
  return -(floor_div(P + s, -Q) + 1);
}

// Residue representatives of R/(2) in coordinate-lexicographic order.
std::vector<RElem> enumerate_residues(const Ring& R) {
  std::vector<RElem> out;
  if (R.two_invertible()) {
    out.push_back(R.zero());
    return out;
  }
  const int k = R.dim();
  long count = 1L << k;
  require(count <= 256, ErrorKind::Unsupported, "R/(2) too large for residue tables");
  for (long code = 0; code < count; ++code) {
    RElem e = R.zero();
    for (int i = 0; i < k; ++i) e.c[i] = (code >> (k - 1 - i)) & 1;
    out.push_back(e);
  }
  return out;
}

}  // namespace

int Mod2Ctx::one_idx() const { return two_invertible ? 0 : (size() == 2 ? 1 : size() / 2); }

int Mod2Ctx::reduce(const Ring& R, const RElem& a) const {
  if (two_invertible) return 0;
  const int k = R.dim();
  int idx = 0;
  for (int i = 0; i < k; ++i) idx = 2 * idx + static_cast<int>(mod_floor(a.c[i], Int(2)).convert_to<long>());
  return idx;
}

bool Mod2Ctx::is_unit_square(int r) const {
  return std::binary_search(unit_squares.begin(), unit_squares.end(), r);
}

int Mod2Ctx::u_inv(int a) const {
  for (int b : squares)
    if (mul[a][b] == one_idx()) return b;
  fail(ErrorKind::Internal, "U(R) element has no inverse");
}

int Mod2Ctx::from_coords(const std::vector<int>& c) const {
  int r = 0;
  for (size_t i = 0; i < c.size(); ++i) r = add[r][mul[c[i]][basis[i]]];
  return r;
}

std::optional<RElem> fundamental_unit(const Ring& R, long budget) {
  require(R.kind() == RingKind::Quadratic && R.disc() > 0, ErrorKind::Internal,
          "fundamental unit requested for a ring without one");
  const long D = R.disc();
  const bool d1 = ((D % 4) + 4) % 4 == 1;
  Int s = boost::multiprecision::sqrt(Int(D));
  // w = (P0 + sqrt D)/Q0 with Q0 | D - P0^2.
  Int P = d1 ? 1 : 0;
  Int Q = d1 ? 2 : 1;
  Int h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (long step = 0; step < budget; ++step) {
    Int a = cf_floor(P, Q, s);
    Int h = a * h1 + h2;
    Int kk = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = kk;
    RElem small = R.make({h, -kk});  // h - k*w, close to zero
    Int n = R.qnorm(small);
    if (n == 1 || n == -1) return R.conj(small);
    Int Pn = a * Q - P;
    Int Qn = (Int(D) - Pn * Pn) / Q;
    P = Pn;
    Q = Qn;
  }
  return std::nullopt;
}

AssumptionVerdict check_assumption(const Ring& R, long budget) {
  AssumptionVerdict v;
  switch (R.kind()) {
    case RingKind::Integers:
      v.holds = Tri::Yes;
      v.route = "integers";
      v.unit_generator = R.from_int(-1);
      return v;
    case RingKind::FiniteField:
      v.holds = Tri::Yes;
      v.route = R.characteristic() == 2 ? "field of characteristic 2" : "field, 2 invertible";
      return v;
    case RingKind::Quadratic:
      break;
  }
  const long D = R.disc();
  const long r8 = ((D % 8) + 8) % 8;
  const long r4 = r8 % 4;
  if (r4 == 2 || r4 == 3) {
    v.holds = Tri::Yes;
    v.route = "D = 2,3 (mod 4)";
    v.detail = "every square is congruent to an integer, hence to 0 or 1, mod 2";
  } else if (r8 == 1) {
    v.holds = Tri::No;
    v.route = "D = 1 (mod 8)";
    v.witness = R.gen();
    v.detail = "w^2 = w (mod 2): 2 splits and R/(2) = F2 x F2";
  } else {
    v.route = "D = 5 (mod 8), unit clause";
    std::vector<RElem> gens;
    if (D < 0) {
      RElem g = R.from_int(-1);
      for (const auto& u : R.finite_units())
        if (R.pow(u, 2) != R.one() && R.pow(u, 3) != R.one() && R.pow(u, 4) != R.one()) g = u;
      if (D == -1) g = R.gen();
      if (D == -3) g = R.gen();
      v.unit_generator = g;
      gens.push_back(g);
    } else {
      auto eps = fundamental_unit(R, budget);
      if (!eps) {
        v.holds = Tri::Unknown;
        v.detail = "fundamental unit search exceeded the step budget";
        return v;
      }
      v.unit_generator = *eps;
      gens.push_back(*eps);
    }
    const RElem& g = gens.front();
    RElem gm = R.sub(g, R.one());
    bool g_is_one_mod2 = R.divide_exact(gm, R.from_int(2)).has_value();
    if (g_is_one_mod2) {
      v.holds = Tri::No;
      v.witness = R.gen();
      v.detail = "unit generator is 1 mod 2, so unit squares are 1 mod 2 while w^2 = w+1 (mod 2)";
    } else {
      v.holds = Tri::Yes;
      v.detail = "unit generator is not 1 mod 2; R/(2) = F4 and every nonzero residue is a unit square";
    }
  }
  // Exhaustive cross-check over residues.
  const Mod2Ctx& m = R.mod2();
  bool ex = true;
  int bad = -1;
  for (int r = 0; r < m.size(); ++r) {
    int s = m.square_of[r];
    if (s != 0 && !m.is_unit_square(s)) {
      ex = false;
      if (bad < 0) bad = r;
    }
  }
  require(ex == (v.holds == Tri::Yes), ErrorKind::Internal,
          "assumption case analysis disagrees with the exhaustive residue check");
  if (v.holds == Tri::No && bad >= 0) v.witness = m.residues[bad];
  return v;
}

Mod2Ctx build_mod2(const Ring& R) {
  Mod2Ctx m;
  m.two_invertible = R.two_invertible();
  m.residues = enumerate_residues(R);
  const int n = m.size();
  m.add.assign(n, std::vector<int>(n));
  m.mul.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      m.add[a][b] = m.reduce(R, R.add(m.residues[a], m.residues[b]));
      m.mul[a][b] = m.reduce(R, R.mul(m.residues[a], m.residues[b]));
    }
  m.square_of.resize(n);
  std::set<int> sq;
  for (int a = 0; a < n; ++a) {
    m.square_of[a] = m.mul[a][a];
    sq.insert(m.square_of[a]);
  }
  m.squares.assign(sq.begin(), sq.end());

  // Units and their squares mod 2, with a witnessing unit root for each.
  m.unit_root.assign(n, RElem{});
  auto note_unit = [&](const RElem& u) {
    int s = m.reduce(R, R.mul(u, u));
    if (m.unit_root[s].c.empty()) m.unit_root[s] = u;
  };
  if (m.two_invertible) {
    note_unit(R.one());
  } else if (R.units_finite() && !(R.is_field() && R.field_order() > 65536)) {
    for (const auto& u : R.finite_units()) note_unit(u);
  } else if (R.is_field()) {
    fail(ErrorKind::Unsupported, "field too large for mod-2 tables");
  } else {
    auto eps = fundamental_unit(R);
    require(eps.has_value(), ErrorKind::Budget, "fundamental unit budget exceeded");
    RElem x = R.one();
    for (int i = 0; i < 2 * n + 2; ++i) {
      note_unit(x);
      note_unit(R.neg(x));
      x = R.mul(x, *eps);
    }
  }
  for (int r = 0; r < n; ++r)
    if (!m.unit_root[r].c.empty()) m.unit_squares.push_back(r);

  m.assumption = true;
  for (int a = 0; a < n; ++a) {
    int s = m.square_of[a];
    if (s != 0 && !m.is_unit_square(s)) m.assumption = false;
  }

  // S(R): orbits under multiplication by unit squares.
  m.sclass.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    if (m.sclass[a] >= 0) continue;
    int id = static_cast<int>(m.sclass_reps.size());
    m.sclass_reps.push_back(a);
    for (int u : m.unit_squares) m.sclass[m.mul[u][a]] = id;
    m.sclass[a] = id;
  }

  if (m.assumption && !m.two_invertible) {
    // Greedy U-basis: 1 first, then residues in enumeration order.
    std::vector<int> span = {0};
    auto extend = [&](int b) {
      std::set<int> next;
      for (int s : span)
        for (int u : m.squares) next.insert(m.add[s][m.mul[u][b]]);
      span.assign(next.begin(), next.end());
    };
    std::vector<int> order = {m.one_idx()};
    for (int r = 1; r < n; ++r)
      if (r != m.one_idx()) order.push_back(r);
    for (int r : order) {
      if (std::find(span.begin(), span.end(), r) != span.end()) continue;
      m.basis.push_back(r);
      extend(r);
    }
    m.u_dim = static_cast<int>(m.basis.size());
    m.coords.assign(n, {});
    // Enumerate all U-combinations of the basis.
    const int qU = static_cast<int>(m.squares.size());
    long total = 1;
    for (int i = 0; i < m.u_dim; ++i) total *= qU;
    for (long code = 0; code < total; ++code) {
      std::vector<int> c(m.u_dim);
      long t = code;
      for (int i = 0; i < m.u_dim; ++i) {
        c[i] = m.squares[t % qU];
        t /= qU;
      }
      int r = m.from_coords(c);
      m.coords[r] = c;
    }
  }
  return m;
}

}  // namespace sbf
