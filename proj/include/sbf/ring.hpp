#pragma once

#include "sbf/bigint.hpp"

#include <boost/container/small_vector.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sbf {

using Coords = boost::container::small_vector<Int, 2>;

// Coordinates in the ring's fixed basis: {1} for Z, {1, w} for quadratic
// rings, {1, x, ..., x^(k-1)} for GF(p)[x]/(f). Always canonically reduced.
struct RElem {
  Coords c;

  friend bool operator==(const RElem& a, const RElem& b) { return a.c == b.c; }
  friend bool operator!=(const RElem& a, const RElem& b) { return !(a == b); }
  // Coordinate-lexicographic.
  friend bool operator<(const RElem& a, const RElem& b) {
    return std::lexicographical_compare(a.c.begin(), a.c.end(), b.c.begin(), b.c.end());
  }
};

enum class RingKind { Integers, Quadratic, FiniteField };

struct Mod2Ctx;

class Ring {
 public:
  static Ring integers();
  // Throws Input unless D is on the accepted norm-Euclidean list.
  static Ring quadratic(long D);
  // f: coefficients low-to-high, irreducible mod p; normalized to monic.
  static Ring finite_field(long p, std::vector<long> f);
  static const std::vector<long>& accepted_discriminants();

  RingKind kind() const;
  long disc() const;
  long characteristic() const;  // 0 for Z and quadratic rings
  const std::vector<long>& modulus() const;
  int dim() const;  // number of coordinates
  bool is_field() const { return kind() == RingKind::FiniteField; }
  bool two_invertible() const { return is_field() && characteristic() != 2; }
  long field_order() const;
  std::string name() const;
  bool operator==(const Ring& o) const;
  bool operator!=(const Ring& o) const { return !(*this == o); }

  RElem zero() const;
  RElem one() const;
  RElem from_int(const Int& n) const;
  RElem from_int(long n) const { return from_int(Int(n)); }
  RElem make(const std::vector<Int>& coords) const;
  RElem gen() const;  // w for quadratic rings, x for fields, 1 for Z

  bool is_zero(const RElem& a) const;
  bool is_one(const RElem& a) const { return a == one(); }
  RElem add(const RElem& a, const RElem& b) const;
  RElem sub(const RElem& a, const RElem& b) const;
  RElem neg(const RElem& a) const;
  RElem mul(const RElem& a, const RElem& b) const;
  RElem pow(const RElem& a, unsigned long e) const;

  // Quadratic rings: Galois conjugate and field norm.
  RElem conj(const RElem& a) const;
  Int qnorm(const RElem& a) const;
  // Euclidean norm: |a| on Z, |N(a)| on quadratic rings, 0/1 on fields.
  Int euclid_norm(const RElem& a) const;

  bool is_unit(const RElem& a) const;
  std::optional<RElem> unit_inverse(const RElem& a) const;
  // a = q*b + r with euclid_norm(r) < euclid_norm(b).
  std::pair<RElem, RElem> divmod(const RElem& a, const RElem& b) const;
  std::optional<RElem> divide_exact(const RElem& a, const RElem& b) const;

  struct Xgcd {
    RElem g, x, y;  // g = x*a + y*b, g normalized
  };
  Xgcd xgcd(const RElem& a, const RElem& b) const;
  // (n, u) with n = u*a the canonical associate and u a unit.
  std::pair<RElem, RElem> normalize(const RElem& a) const;
  // Full unit group when finite (Z, imaginary quadratic, fields with q <= 2^16).
  std::vector<RElem> finite_units() const;
  bool units_finite() const;

  std::string str(const RElem& a) const;
  const Mod2Ctx& mod2() const;

  // Finite fields: element <-> index in [0, q), index = sum c_i p^i.
  long index_of(const RElem& a) const;
  RElem element(long idx) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  friend struct RingAccess;
};

}  // namespace sbf
