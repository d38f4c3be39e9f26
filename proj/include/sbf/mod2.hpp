#pragma once

#include "sbf/ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbf {

// Structure of R/(2). Residues are indexed by their position in the
// coordinate-lexicographic enumeration; all tables use these indices.
struct Mod2Ctx {
  bool two_invertible = false;
  std::vector<RElem> residues;
  std::vector<std::vector<int>> add, mul;
  std::vector<int> square_of;
  std::vector<int> squares;        // U(R), sorted residue indices
  std::vector<int> unit_squares;   // residues u^2 for units u
  std::vector<RElem> unit_root;    // per residue: a unit u with u^2 = residue, or empty coords
  std::vector<int> sclass;         // residue -> class id
  std::vector<int> sclass_reps;    // class id -> smallest residue index
  bool assumption = false;
  int u_dim = 0;
  std::vector<int> basis;                  // U(R)-basis of R/(2), residue 1 first
  std::vector<std::vector<int>> coords;    // residue -> coordinates (U elements as residue indices)

  int size() const { return static_cast<int>(residues.size()); }
  int zero_idx() const { return 0; }
  int one_idx() const;
  int reduce(const Ring& R, const RElem& a) const;
  bool is_unit_square(int r) const;
  // U(R) field operations (arguments must lie in squares).
  int u_inv(int a) const;
  // Residue from U-coordinates.
  int from_coords(const std::vector<int>& c) const;
};

Mod2Ctx build_mod2(const Ring& R);

enum class Tri { Yes, No, Unknown };

struct AssumptionVerdict {
  Tri holds = Tri::Unknown;
  std::optional<RElem> witness;     // r with r^2 neither 0 nor a unit square mod 2
  std::string route;
  std::optional<RElem> unit_generator;  // fundamental unit (D > 0) or torsion generator
  std::string detail;
};

AssumptionVerdict check_assumption(const Ring& R, long budget = 1'000'000);

// Fundamental unit > 1 of a real quadratic ring via the continued fraction
// of w; nullopt when the step budget runs out.
std::optional<RElem> fundamental_unit(const Ring& R, long budget = 1'000'000);

}  // namespace sbf
