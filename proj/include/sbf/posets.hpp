#pragma once

#include "sbf/classify.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sbf {

// ---------------------------------------------------------------------------
// Vectors of a form over a finite field, encoded as base-q integers with
// coordinate 0 least significant. Field elements are ring element indices.

using Bits = std::vector<std::uint64_t>;

long bits_count(const Bits& b);
std::vector<long> bits_list(const Bits& b);
bool bits_subset(const Bits& a, const Bits& b);

class CodeSpace {
 public:
  explicit CodeSpace(const Form& M, long max_size = 1L << 22);

  const Form& form() const { return M_; }
  const Ring& ring() const { return M_.R; }
  int rank() const { return n_; }
  int q() const { return q_; }
  long size() const { return size_; }

  int digit(long x, int i) const { return digits_[static_cast<size_t>(x) * n_ + i]; }
  int add_el(int a, int b) const { return add_[a * q_ + b]; }
  int mul_el(int a, int b) const { return mul_[a * q_ + b]; }
  int neg_el(int a) const { return neg_[a]; }
  int inv_el(int a) const { return inv_[a]; }

  long add(long x, long y) const;
  long sub(long x, long y) const;
  long scale(int c, long x) const;
  int pair(long x, long y) const;
  int value(long x) const { return pair(x, x); }

  Vec vec(long x) const;
  long code(const Vec& v) const;
  Mat matrix(const std::vector<long>& cols) const;

  // All linear combinations of gens, ascending.
  std::vector<long> span(const std::vector<long>& gens) const;
  // Codes x with pair(x, g) = 0 for every g.
  std::vector<long> perp(const std::vector<long>& gens) const;
  bool independent(const std::vector<long>& seq) const;
  // Residue index in R/(2) of a field element index.
  int residue(int el) const { return res_[el]; }
  int element_index(const RElem& a) const { return static_cast<int>(M_.R.index_of(a)); }

  // Bitsets over codes.
  const Bits& orth(long x) const { return orth_[x]; }
  Bits perp_bits(const std::vector<long>& gens) const;
  const Bits& isotropic_bits() const { return iso_; }

 private:
  Form M_;
  int n_, q_;
  long size_;
  std::vector<int> digits_, add_, mul_, neg_, inv_, res_;
  std::vector<long> gx_;
  std::vector<long> pow_;
  std::vector<Bits> orth_;
  Bits iso_;
};

// ---------------------------------------------------------------------------
// Posets of sequences with distinct entries, ordered by subsequence.

using Seq = std::vector<long>;

struct SeqPoset {
  std::string label;
  std::vector<Seq> verts;  // ascending by (length, lexicographic): a linear extension
  std::map<Seq, int> index;

  int size() const { return static_cast<int>(verts.size()); }
  int find(const Seq& s) const;
  int max_len() const { return verts.empty() ? 0 : static_cast<int>(verts.back().size()); }
  long count_len(int k) const;
};

SeqPoset make_seq_poset(std::string label, std::vector<Seq> verts);
bool is_subsequence(const Seq& small, const Seq& big);
// Every nonempty proper subsequence of v.
std::vector<Seq> proper_subsequences(const Seq& v);
bool is_downward_closed(const SeqPoset& P);

// Abstract finite poset; indices form a linear extension.
struct Poset {
  int size = 0;
  std::vector<std::vector<int>> above;  // strictly greater elements, ascending
};

Poset order_of(const SeqPoset& P);
// Induced subposet on the given vertices (ascending); returns indices in the new poset.
Poset induced(const Poset& P, const std::vector<int>& verts);

// Link^-, Link^+ and Link of v inside P, as vertex lists.
std::vector<int> link_minus(const Poset& P, int v);
std::vector<int> link_plus(const Poset& P, int v);
std::vector<int> link(const Poset& P, int v);
// Fibre f/w = {v in P : f(v) <= w in Q}.
std::vector<int> fiber(const Poset& Q, const std::vector<int>& f, int w);

struct PosetBudget {
  long vertex_cap = 2'000'000;
};

enum class SeqKind { Unimodular, IsotropicEach, IsotropicUnimodular };

// Sequences of independent vectors drawn from candidates (all nonzero codes
// when empty) satisfying the kind's condition, up to max_len.
SeqPoset build_sequences(const CodeSpace& S, SeqKind kind, int max_len, const std::vector<long>& candidates = {},
                         const PosetBudget& b = {});
SeqPoset build_U(const CodeSpace& S, int max_len, const PosetBudget& b = {});
SeqPoset build_Uprime(const CodeSpace& S, int max_len, const PosetBudget& b = {});
SeqPoset build_IU(const CodeSpace& S, int max_len, const PosetBudget& b = {});

// P_x = {w : w x in P}.
SeqPoset complement_poset(const SeqPoset& P, const Seq& x);

// P<S> with S = {0..m-1}: entries encode (x, s) as x * m + s.
SeqPoset product_poset(const SeqPoset& P, long m);
// l_{s0}: P -> P<S>, as vertex indices.
std::vector<int> section_map(const SeqPoset& P, const SeqPoset& PS, long m, long s0);
// Projection P<S> -> P.
std::vector<int> projection_map(const SeqPoset& PS, const SeqPoset& P, long m);

// ---------------------------------------------------------------------------
// Witnesses, parity preservation and F-likeness over a finite field

struct WitnessCodes {
  Seq v, w;
};

// Closed-form witnessing sequence.
WitnessCodes witness_codes(const CodeSpace& S, const Seq& v);
// Every witnessing sequence to v.
std::vector<Seq> all_witnesses(const CodeSpace& S, const Seq& v, long cap = 1'000'000);
std::vector<long> plane_complement(const CodeSpace& S, const Seq& v, const Seq& w);
// Parity of the subspace given by its codes, as a residue set.
std::vector<int> parity_of_codes(const CodeSpace& S, const std::vector<long>& codes);

// F-likeness tests for a fixed ambient form, groupoid and F = theta(r).
// Complement classes are keyed by (rank, alternating), which determines the
// isometry class over fields of characteristic 2; membership and g_F are
// evaluated once per key on a concrete complement.
class FLikeOracle {
 public:
  FLikeOracle(const CodeSpace& S, const Groupoid& G);

  const CodeSpace& space() const { return S_; }
  const Groupoid& groupoid() const { return G_; }
  const std::vector<int>& ambient_parity() const { return PM_; }
  int complexity() const { return cM_; }

  bool parity_preserving(const Seq& v, const Seq& w) const;
  bool parity_preserving(const Seq& v) const { return parity_preserving(v, witness_codes(S_, v).w); }
  int g_complement(const Seq& v, const Seq& w) const;
  bool complement_in_groupoid(const Seq& v, const Seq& w) const;  // in G and nonzero
  // Criterion: parity preserving and g_F of one complement >= 1.
  bool fully_F_like(const Seq& v) const;
  // Partly F-like: every pair(w_i, w_i) has the class of r.
  bool partly_F_like(const Seq& w) const;
  // Criteria (1)-(5), each evaluated over all witnesses where quantified.
  std::vector<bool> realstuff_criteria(const Seq& v) const;
  // Repair a witness so that every value has the class of r; nullopt when
  // v is not parity preserving.
  std::optional<Seq> create_partly_F_like(const Seq& v) const;
  // Witness with P(M) = P(e) (+) P(e^perp), for c(M) > 0.
  std::optional<Seq> reader_friendly_witness(const Seq& v) const;

 private:
  struct Info {
    int g = 0;
    bool member = false;
  };
  const Info& info(const Bits& comp) const;
  Bits complement_bits(const Seq& v, const Seq& w) const;

  const CodeSpace& S_;
  Groupoid G_;
  std::vector<int> PM_;
  int cM_ = 0;
  int r_el_ = 0;
  mutable std::map<std::pair<int, bool>, Info> cache_;
};

SeqPoset build_FIU(const FLikeOracle& O, int max_len, const PosetBudget& b = {});
// Pairs (v, w) encoded as v * size + w.
SeqPoset build_FU(const FLikeOracle& O, int max_len, const PosetBudget& b = {});
// Independent count of embeddings F^k -> M with complement in G and nonzero.
long count_F_embeddings(const FLikeOracle& O, int k);

struct GvReport {
  int g_v = 0;
  int max_fully = 0;
  bool bound_ok = false, prop1 = false, prop2 = false, prop3 = false;
};

// Brute force over subsequences; requires |v| >= c(M) + 2.
GvReport g_v(const FLikeOracle& O, const Seq& v);

// ---------------------------------------------------------------------------
// Complement isomorphism IU(M)_x = IU(N)<<span x>>

struct ComplementCheck {
  SeqPoset local;       // IU(M)_x
  SeqPoset comparison;  // IU(N)<span x>, entries encoded v * size + s
  Form N;
  int zN = 0;
  bool bijective = false;  // (v, s) -> v + s maps comparison onto local
};

ComplementCheck complement_check(const CodeSpace& S, const SeqPoset& IU, const Seq& x, int max_len);

// ---------------------------------------------------------------------------
// Matroid complexes of good faces

struct MatroidComplex {
  int k = 0, n = 0;  // k + 1 vectors spanning an n-dimensional space
  std::vector<std::vector<int>> faces;  // every face including the empty one, by size then lex
  std::vector<std::vector<int>> facets;
  bool exchange_ok = false;
};

MatroidComplex matroid_good_faces(const Ring& R, const std::vector<Vec>& vectors);

}  // namespace sbf
