#pragma once

#include "sbf/form.hpp"
#include "sbf/posets.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sbf {

// ---------------------------------------------------------------------------
// Isometry groups of forms over small finite fields. An element T (with
// T^T G T = G) is packed column-major in base q: entry (i, j) is the digit
// at position j * n + i, so column j is the vector code (key / q^(n j)) mod q^n.

using GKey = std::uint64_t;

class FiniteGroup {
 public:
  FiniteGroup(const Form& M, std::vector<GKey> elements);

  const Form& form() const { return M_; }
  int rank() const { return n_; }
  int q() const { return q_; }
  long order() const { return static_cast<long>(elements_.size()); }
  const std::vector<GKey>& elements() const { return elements_; }  // ascending
  GKey identity() const { return id_; }

  long index_of(GKey g) const;  // -1 when absent
  bool contains(GKey g) const { return index_of(g) >= 0; }
  GKey mul(GKey a, GKey b) const;
  GKey inv(GKey a) const;
  GKey pack(const Mat& T) const;
  Mat matrix(GKey g) const;
  long column(GKey g, int j) const;

  // A small generating set, chosen greedily from a seeded shuffle.
  const std::vector<GKey>& generators() const;

 private:
  Form M_;
  int n_, q_;
  long vsize_;
  std::vector<GKey> elements_;
  GKey id_ = 0;
  std::vector<int> add_, mul_;
  std::vector<int> ginv_;  // G^{-1} as element indices, row-major
  std::vector<int> g_;     // G as element indices, row-major
  mutable std::vector<GKey> gens_;
};

struct GroupBudget {
  long max_order = 10'000'000;
  std::uint64_t seed = 20240611;
};

// Backtracking over column images with the Gram checked incrementally. With
// a quadratic refinement U (upper triangular, U + U^T = G off the diagonal,
// characteristic 2) only isometries preserving x -> x^T U x are kept.
FiniteGroup orthogonal_group(const Form& M, const GroupBudget& b = {}, const std::optional<Mat>& quadratic = {});
// Independent count over all q^(n^2) matrices with the generic matrix layer.
long orthogonal_order_brute_force(const Form& M, long max_matrices = 1L << 20);
// Every element is invertible, preserves the Gram and the set is closed.
bool verify_group(const FiniteGroup& G);

// g -> g (+) id_F, as a map into the group of M (+) F.
GKey stab_map(const FiniteGroup& small, const FiniteGroup& big, GKey g);
struct StabCheck {
  bool into = false, injective = false, homomorphism = false, identity_ok = false;
};
StabCheck check_stab_map(const FiniteGroup& small, const FiniteGroup& big);

// ---------------------------------------------------------------------------
// Abelianization

struct Abelianization {
  long derived_order = 0;
  std::vector<long> factors;  // invariant factors > 1, each dividing the next
  std::vector<int> coset;     // element index -> coset id, identity coset 0
  std::vector<GKey> reps;     // coset id -> representative
  long order() const { return static_cast<long>(reps.size()); }
  std::string describe() const;
};

Abelianization abelianization(const FiniteGroup& G, const GroupBudget& b = {});
// Invariant factors of a finite abelian group from its element orders.
std::vector<long> invariant_factors_from_orders(const std::vector<long>& orders);

// Map on abelianizations induced by a homomorphism given on elements.
struct InducedMap {
  std::vector<int> image;  // coset id -> coset id
  bool homomorphism = false, injective = false, surjective = false;
  std::string kind() const;  // iso, epi, mono, zero or neither
};

InducedMap induced_map(const FiniteGroup& A, const Abelianization& Aab, const FiniteGroup& B,
                       const Abelianization& Bab, const std::function<GKey(GKey)>& f);

// ---------------------------------------------------------------------------
// Stability ranges: the largest degree i for which each statement applies.

enum class RangeKind { MainlEpi, MainlIso, MainlSplitEpi, MainlSplitIso, MainlGeneralEpi, MainlGeneralIso, Homstab, Useintro };

struct RangeQuery {
  RangeKind kind = RangeKind::MainlIso;
  int z = 0, c = 0;  // isotropic rank and complexity of M
  int r = 0;         // coefficient-system degree
  int n = 0;         // number of summands for Homstab / Useintro
  int cR = 0;        // c(R) for Homstab
};

long range_bound(const RangeQuery& q);
RangeKind parse_range_kind(const std::string& s);
std::string range_kind_name(RangeKind k);

struct StabilityRow {
  int n = 0;
  long order = 0;
  std::vector<long> h1;
  int z = 0, c = 0;
  long iso_bound = 0;           // constant coefficients, stabilization of M0 (+) F^n by F
  std::optional<long> homstab;  // present when F is the minimal cofinal metabolic form
  std::string label;            // "proven-range" when degree 1 lies in some bound, else "observed"
  std::string map_kind;    // induced map on H1 to the next row, empty for the last
  std::vector<int> map_image;
};

// Rows for M0 (+) F^n, n = n_from .. n_to; M0 may be the zero form. With
// cofinal_cR >= 0, F is taken to be the minimal cofinal metabolic form and
// the cofinal-power bound with that c(R) is reported too.
std::vector<StabilityRow> h1_stability_table(const Form& M0, const Form& F, int n_from, int n_to,
                                             const GroupBudget& b = {}, int cofinal_cR = -1);
std::string stability_tsv(const std::vector<StabilityRow>& rows);

}  // namespace sbf
