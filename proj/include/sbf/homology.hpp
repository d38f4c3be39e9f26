#pragma once

#include "sbf/bigint.hpp"
#include "sbf/posets.hpp"

#include <climits>
#include <string>
#include <vector>

namespace sbf {

// Simplicial complex with the empty simplex always present, so every
// homology computed from it is reduced.
struct Complex {
  int dim_cap = INT_MAX;   // simplices of dimension <= dim_cap were generated
  bool truncated = false;  // some simplex above dim_cap was dropped
  // cells[d + 1]: d-simplices as flat ascending vertex lists with stride d + 1,
  // lexicographically sorted. cells[0] holds the empty simplex.
  std::vector<std::vector<int>> cells;

  int top_dim() const { return static_cast<int>(cells.size()) - 2; }
  long count(int d) const;
  const int* simplex(int d, long i) const { return cells[d + 1].data() + i * (d + 1); }
  // Index of a d-simplex given by d + 1 ascending vertices; -1 if absent.
  long find(int d, const int* verts) const;
};

// Flags of P: chains v_0 < ... < v_d, up to dimension dim_cap.
Complex order_complex(const Poset& P, int dim_cap = INT_MAX, long flag_cap = 10'000'000);
// Complex from an explicit face list; Input error unless closed under faces.
Complex complex_from_faces(const std::vector<std::vector<int>>& faces);

struct HomologyGroup {
  int degree = 0;
  long betti = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next
  friend bool operator==(const HomologyGroup& a, const HomologyGroup& b) {
    return a.degree == b.degree && a.betti == b.betti && a.torsion == b.torsion;
  }
};

struct HomologyProfile {
  long p = 0;  // 0: integers, otherwise the prime field F_p
  std::vector<HomologyGroup> groups;  // degrees -1 .. up_to, reduced
  const HomologyGroup& at(int k) const { return groups.at(k + 1); }
  int up_to() const { return static_cast<int>(groups.size()) - 2; }
  bool vanishes(int k) const { return at(k).betti == 0 && at(k).torsion.empty(); }
  std::string coeffs() const { return p == 0 ? "Z" : "F" + std::to_string(p); }
};

// Reduced homology in degrees -1 .. up_to. Precondition error when a needed
// dimension was truncated. Checks the boundary of boundary and, when every
// degree is covered, the Euler characteristic (Internal error on failure).
HomologyProfile homology(const Complex& C, int up_to, long p = 0);

// Alternating simplex count over d >= -1.
long reduced_euler(const Complex& C);
// The composite of consecutive boundaries vanishes.
bool boundary_squared_zero(const Complex& C, int d);

// Largest c <= cap with reduced H_j = 0 for -1 <= j <= c (so -2 for the
// empty complex); kAcyclic when every degree vanishes.
constexpr int kAcyclic = INT_MAX / 4;
int homological_connectivity(const Complex& C, int cap = INT_MAX);

struct ConnectivityVerdict {
  int claimed = 0;
  bool pass = false;
  bool vacuous = false;    // claimed < -1
  bool nonempty = false;
  bool connected = false;  // nonempty with reduced H_0 = 0
  int vanishing_through = -2;
  bool pi1_caveat = false;  // claimed >= 1: simple connectivity is not decided
  std::string detail;
};

// n-connected read homologically: reduced H_j = 0 for -1 <= j <= claimed.
ConnectivityVerdict connectivity_verdict(const Complex& C, int claimed);

// Homology iso under the section P -> P<S>, |S| = m, in degrees 0..n where
// n = min over v in P and the empty sequence of conn(P_v) + |v|, certified
// homologically. The section is split by the projection, so equal profiles
// force the induced map to be an isomorphism.
struct AddsetReport {
  int n = 0;
  int checked_through = -1;
  bool maps_ok = false;  // both maps order preserving, projection after section = identity
  bool profiles_equal = false;
  bool pass = false;
  HomologyProfile base, product;
};

AddsetReport addset_check(const SeqPoset& P, long m, int max_degree = 2, long flag_cap = 10'000'000);

}  // namespace sbf
