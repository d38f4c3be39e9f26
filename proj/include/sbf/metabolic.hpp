#pragma once

#include "sbf/form.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbf {

enum class Exactness { Exact, LowerBound, TheoremBacked, Unknown };
std::string exactness_name(Exactness e);

// Bounded-height search controls for rings with infinitely many vectors.
// Heights escalate by doubling from height to height_cap.
struct SearchBudget {
  long height = 3;
  long height_cap = 12;
  long max_vectors = 4'000'000;
};

struct WitnessPair {
  Mat V, W;  // columns v_i and w_i
};

// Witnesses w with pair(v_i, w_j) = delta_ij and pair(w_i, w_j) = 0 for i != j.
WitnessPair witnessing_sequence(const Form& M, const Mat& V);
bool check_witness_pair(const Form& M, const WitnessPair& p);
// Columns v_1, w_1, v_2, w_2, ...: the plane sum e_{v,w}, Gram = (+) theta(pair(w_i, w_i)).
Mat plane_basis(const WitnessPair& p);

struct IsoSearch {
  enum Outcome { Found, NoneProof, Unknown } outcome = Unknown;
  Vec v;
  std::string reason;
};

IsoSearch find_isotropic_vector(const Form& M, const SearchBudget& b = {});

struct RankReport {
  int value = 0;
  Exactness exactness = Exactness::Unknown;
  WitnessPair certificate;  // isotropic unimodular sequence of length >= value when search-certified
  std::string route;
};

RankReport isotropic_rank(const Form& M, const SearchBudget& b = {});

struct PlaneSplit {
  Form plane;
  SubForm complement;
  Isometry iso;  // plane (+) complement -> M
};

PlaneSplit plane_split(const Form& M, const Vec& v, const Vec& w);

struct PlaneDecomp {
  std::vector<RElem> classes;
  Isometry iso;  // (+) theta(classes) -> M
};

Form theta_sum(const Ring& R, const std::vector<RElem>& classes);
PlaneDecomp lagrangian_to_planes(const Form& M, const Mat& L);
// Greedy plane splitting; nullopt when some step finds no isotropic vector.
std::optional<PlaneDecomp> metabolic_planes(const Form& M, const SearchBudget& b = {});

struct MetabolicNF {
  std::vector<RElem> classes;  // canonical parity basis, then zeros
  Isometry cert;               // M -> theta_sum(classes)
};

// Rewrites a plane decomposition into canonical form.
MetabolicNF normalize_planes(const PlaneDecomp& d);
MetabolicNF metabolic_nf(const Form& M, const SearchBudget& b = {});

struct IsoVerdict {
  enum Kind { Isometric, NotIsometric, Unknown } kind = Unknown;
  std::optional<Isometry> cert;
  std::string reason;
};

std::string verdict_name(IsoVerdict::Kind k);
IsoVerdict metabolic_isometry(const Form& M, const Form& N, const SearchBudget& b = {});
IsoVerdict plane_isometry_decision(const Ring& R, const RElem& r, const RElem& s, const SearchBudget& b = {});

struct CofinalityReport {
  bool exists = false;
  std::vector<RElem> classes;
  Form minimal;
  int u_dim = 0;
};

CofinalityReport cofinality_report(const Ring& R);

struct HyperbolicEmbedding {
  int count = 0;
  Mat embedding;  // columns e_1, f_1, ..., spanning H^count inside M
  SubForm complement;
  Isometry iso;   // H^count (+) complement -> M
};

HyperbolicEmbedding hyperbolic_summands(const Form& M, const SearchBudget& b = {});

// M (+) F -> M (+) F' through the normal forms of both sums.
Isometry plane_swap_iso(const Form& M, const Form& F, const Form& Fp, const SearchBudget& b = {});

// Isometry theta(r) -> theta(s) built from unit scaling and translation
// when s * u^2 = r (mod 2) for a unit u; nullopt otherwise.
std::optional<Isometry> plane_move_iso(const Ring& R, const RElem& r, const RElem& s);

// Elementary plane moves, as isometries new -> old on a sum of planes.
Mat move_translate(const Ring& R, int planes, int j, const RElem& t);  // r_j -> r_j + 2t
Mat move_scale(const Ring& R, int planes, int j, const RElem& u);      // r_j -> u^2 r_j
Mat move_add(const Ring& R, int planes, int i, int j, const RElem& ri);  // r_j -> r_j + r_i
Mat move_swap(const Ring& R, int planes, int i, int j);

}  // namespace sbf
