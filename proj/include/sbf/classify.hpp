#pragma once

#include "sbf/metabolic.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sbf {

// ---------------------------------------------------------------------------
// Generic certificate search

// Depth-first search for T with T^T G_N T = G_M, columns drawn from the
// height-h box of N, escalating h up to b.height. nullopt when exhausted.
std::optional<Isometry> search_isometry(const Form& M, const Form& N, const SearchBudget& b = {});

// ---------------------------------------------------------------------------
// Integers: rank, signature, parity

struct ZClass {
  int rank = 0, pos = 0, neg = 0;
  bool odd = false;  // some value pair(x, x) is odd
  bool definite() const { return pos == 0 || neg == 0; }
  friend bool operator==(const ZClass& a, const ZClass& b) {
    return a.rank == b.rank && a.pos == b.pos && a.neg == b.neg && a.odd == b.odd;
  }
};

ZClass classify_z(const Form& M);

struct ZVerdict {
  IsoVerdict verdict;
  Exactness exactness = Exactness::Unknown;
};

// Indefinite forms: equal triples decide isometry (theorem-backed unless a
// certificate is found, then exact). Definite forms: bounded search only.
ZVerdict z_isometry(const Form& M, const Form& N, const SearchBudget& b = {});

// ---------------------------------------------------------------------------
// Finite fields of characteristic 2: a form is H^k or [1]^n

struct Char2NF {
  bool alternating = false;
  Form canonical;  // H^(n/2) or [1]^n
  Isometry cert;   // M -> canonical
};

Char2NF char2_normal_form(const Form& M);

// ---------------------------------------------------------------------------
// Gaussian integers

// Explicit isometries F (+) [c] -> diagonal form for F = theta(r),
// r in {0, 1, i, 1 + i}, c in {1, i}. Indices: r as 0..3, c as 0 (1) or 1 (i).
Isometry zi_odd_diagonalize(const Ring& R, int plane, int unit);
// theta(1) -> diag(1, 1) and theta(i) -> diag(i, i).
Isometry zi_theta_to_diagonal(const Ring& R, bool imaginary);

struct ZiDiagonal {
  int ones = 0, is = 0;  // [1]^ones (+) [i]^is
  std::optional<Isometry> cert;  // M -> diag(1,...,1,i,...,i)
};

// Diagonal forms up to isometry: classified by rank, parity and discriminant.
ZiDiagonal zi_diagonal_normal(const Ring& R, int ones, int is);
// Diagonalizes M when possible. NotIsometric-style proof: parity without a
// unit class. Returns nullopt with reason on failure.
struct ZiDiagResult {
  Tri diagonalizable = Tri::Unknown;
  ZiDiagonal diag;
  std::string reason;
};
ZiDiagResult zi_diagonalize(const Form& M, const SearchBudget& b = {});

// ---------------------------------------------------------------------------
// g_F and cancellative groupoids

struct GValue {
  int value = 0;
  std::string route;
};

// Maximum n with theta(f)^n a direct summand of M, through the classification
// available for the ring and form. Unsupported when none applies.
GValue g_F(const Form& M, const RElem& f, const SearchBudget& b = {});

enum class GroupoidKind { MetF, DiagZi, FullZ, FullChar2 };
std::string groupoid_name(GroupoidKind k);

struct Groupoid {
  GroupoidKind kind;
  Ring R;
  RElem f;  // F = theta(f)
};

// Unsupported for ring/oracle mismatches.
Groupoid make_groupoid(GroupoidKind kind, const Ring& R, const RElem& f);
bool groupoid_member(const Groupoid& G, const Form& M, const SearchBudget& b = {});

}  // namespace sbf
