#include "sbf/classify.hpp"
#include "sbf/error.hpp"
#include "sbf/homology.hpp"
#include "sbf/json_io.hpp"
#include "sbf/metabolic.hpp"
#include "sbf/posets.hpp"
#include "sbf/stability.hpp"
#include "sbf/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

using namespace sbf;

namespace {

// Exit codes: 0 success, 1 mathematical no, 2 unknown or budget, 3 input error.
enum Exit { kOk = 0, kNo = 1, kUnknown = 2, kInput = 3 };

struct Globals {
  long height = 3;
  long vertex_cap = 2'000'000;
  long group_cap = 10'000'000;
  std::uint64_t seed = 20240611;
  int jobs = 1;

  SearchBudget search() const {
    SearchBudget b;
    b.height = height;
    b.height_cap = std::max(height, b.height_cap);
    return b;
  }
  PosetBudget poset() const { return PosetBudget{vertex_cap}; }
  GroupBudget group() const { return GroupBudget{group_cap, seed}; }
};

// "@path" reads a file, "-" reads stdin, anything else is the text itself.
std::string read_arg(const std::string& v) {
  if (v == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  if (!v.empty() && v[0] == '@') {
    std::ifstream f(v.substr(1));
    require(f.good(), ErrorKind::Input, "cannot read " + v.substr(1));
    return {std::istreambuf_iterator<char>(f), {}};
  }
  return v;
}

Json arg_json(const std::string& v, const std::string& what) { return parse_json(read_arg(v), what); }

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

Json tri_json(Tri t) { return t == Tri::Yes ? Json(true) : t == Tri::No ? Json(false) : Json("unknown"); }

Json parity_json(const Ring& R, const ParitySpace& P) {
  Json out = Json::array();
  if (P.two_invertible) return out;
  for (int r : P.elements) out.push_back(elem_to_json(R, R.mod2().residues[r]));
  return out;
}

// ---------------------------------------------------------------------------

int cmd_ring_check(const std::string& ring_arg) {
  Ring R = ring_from_json(arg_json(ring_arg, "--ring"));
  AssumptionVerdict v = check_assumption(R);
  Json out{{"ring", R.name()},
           {"holds", tri_json(v.holds)},
           {"witness", v.witness ? elem_to_json(R, *v.witness) : Json(nullptr)},
           {"route", v.route},
           {"unit_generator", v.unit_generator ? elem_to_json(R, *v.unit_generator) : Json(nullptr)},
           {"detail", v.detail}};
  emit(out);
  return v.holds == Tri::Yes ? kOk : v.holds == Tri::No ? kNo : kUnknown;
}

std::optional<Ring> optional_ring(const std::string& ring_arg) {
  if (ring_arg.empty()) return std::nullopt;
  if (ring_arg == "Z") return Ring::integers();
  return ring_from_json(arg_json(ring_arg, "--ring"));
}

Form read_form(const std::string& arg, const std::optional<Ring>& R, const std::string& what) {
  return form_from_json(arg_json(arg, what), R ? &*R : nullptr);
}

int cmd_classify(const std::string& form_arg, const std::string& ring_arg, const Globals& g) {
  const auto R = optional_ring(ring_arg);
  Form M = read_form(form_arg, R, "--form");
  Json out{{"ring", M.R.name()}, {"rank", M.rank()}};
  out["parity"] = parity_json(M.R, parity(M));
  const Mod2Ctx& m = M.R.mod2();
  out["complexity"] = m.assumption ? Json(complexity(M)) : Json(nullptr);
  RankReport z = isotropic_rank(M, g.search());
  out["isotropic_rank"] = Json{{"value", z.value}, {"exactness", exactness_name(z.exactness)}, {"route", z.route}};
  if (M.R.kind() == RingKind::Integers) {
    ZClass c = classify_z(M);
    out["z_class"] = Json{{"rank", c.rank}, {"positive", c.pos}, {"negative", c.neg}, {"odd", c.odd}};
  }
  if (M.R.is_field() && M.R.characteristic() == 2) {
    Char2NF nf = char2_normal_form(M);
    out["normal_form"] = Json{{"alternating", nf.alternating}, {"canonical", form_to_json(nf.canonical)},
                              {"certificate", isometry_to_json(nf.cert)}};
  }
  if (m.assumption && M.rank() % 2 == 0 && 2 * z.value == M.rank()) {
    MetabolicNF nf = metabolic_nf(M, g.search());
    Json cls = Json::array();
    for (const auto& c : nf.classes) cls.push_back(elem_to_json(M.R, c));
    out["metabolic"] = Json{{"classes", cls}, {"certificate", isometry_to_json(nf.cert)}};
  } else {
    out["metabolic"] = nullptr;
  }
  emit(out);
  return kOk;
}

struct Decision {
  IsoVerdict verdict;
  Exactness exactness = Exactness::Unknown;
};

Decision decide(const Form& A, const Form& B, const Globals& g) {
  Decision d;
  require(A.R == B.R, ErrorKind::Input, "forms live over different rings");
  if (A.rank() != B.rank()) {
    d.verdict.kind = IsoVerdict::NotIsometric;
    d.verdict.reason = "rank";
    d.exactness = Exactness::Exact;
    return d;
  }
  const Ring& R = A.R;
  if (R.kind() == RingKind::Integers) {
    ZVerdict z = z_isometry(A, B, g.search());
    d.verdict = z.verdict;
    d.exactness = z.exactness;
    return d;
  }
  if (R.is_field() && R.characteristic() == 2) {
    Char2NF a = char2_normal_form(A), b = char2_normal_form(B);
    d.exactness = Exactness::Exact;
    if (a.canonical == b.canonical) {
      d.verdict.kind = IsoVerdict::Isometric;
      d.verdict.cert = compose(inverse(b.cert), a.cert);
      d.verdict.reason = "same characteristic-2 normal form";
    } else {
      d.verdict.kind = IsoVerdict::NotIsometric;
      d.verdict.reason = "exactly one form is alternating";
    }
    return d;
  }
  // Planes written as [[0,1],[1,r]] go through the plane decision, which also covers rings failing the assumption.
  auto plane_class = [&](const Form& M) -> std::optional<RElem> {
    if (M.rank() == 2 && M.G == theta(R, M.G(1, 1)).G) return M.G(1, 1);
    return std::nullopt;
  };
  if (auto r = plane_class(A), s = plane_class(B); r && s) {
    d.verdict = plane_isometry_decision(R, *r, *s, g.search());
    d.exactness = d.verdict.kind == IsoVerdict::Unknown ? Exactness::Unknown : Exactness::Exact;
    return d;
  }
  try {
    d.verdict = metabolic_isometry(A, B, g.search());
    if (d.verdict.kind != IsoVerdict::Unknown) {
      d.exactness = Exactness::Exact;
      return d;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Input) throw;
  }
  if (auto iso = search_isometry(A, B, g.search())) {
    d.verdict.kind = IsoVerdict::Isometric;
    d.verdict.cert = *iso;
    d.verdict.reason = "bounded search";
    d.exactness = Exactness::Exact;
  } else {
    d.verdict.kind = IsoVerdict::Unknown;
    d.verdict.reason = "no decision procedure applies and the bounded search found nothing";
    d.exactness = Exactness::Unknown;
  }
  return d;
}

int cmd_isometry(const std::string& a_arg, const std::string& b_arg, const std::string& ring_arg, const std::string& cert_arg,
                 bool verify, const Globals& g) {
  if (verify) {
    require(!cert_arg.empty(), ErrorKind::Input, "--verify needs --cert");
    const Json j = arg_json(cert_arg, "--cert");
    Json body = j.is_object() && j.contains("certificate") ? j.at("certificate") : j;
    Form src = form_from_json(body.at("source")), tgt = form_from_json(body.at("target"));
    const bool ok = src.R == tgt.R && verify_isometry(mat_from_json(src.R, body.at("matrix")), src, tgt);
    emit(Json{{"verified", ok}});
    return ok ? kOk : kNo;
  }
  require(!a_arg.empty() && !b_arg.empty(), ErrorKind::Input, "isometry needs --a and --b");
  const auto R = optional_ring(ring_arg);
  Form A = read_form(a_arg, R, "--a"), B = read_form(b_arg, R, "--b");
  Decision d = decide(A, B, g);
  if (d.verdict.cert) require(verify_isometry(d.verdict.cert->T, A, B), ErrorKind::Internal, "certificate failed");
  emit(Json{{"verdict", verdict_name(d.verdict.kind)},
            {"certificate", d.verdict.cert ? isometry_to_json(*d.verdict.cert) : Json(nullptr)},
            {"exactness", exactness_name(d.exactness)},
            {"reason", d.verdict.reason}});
  return d.verdict.kind == IsoVerdict::Isometric ? kOk : d.verdict.kind == IsoVerdict::NotIsometric ? kNo : kUnknown;
}

int cmd_cofinal(const std::string& ring_arg) {
  Ring R = ring_from_json(arg_json(ring_arg, "--ring"));
  CofinalityReport c = cofinality_report(R);
  Json cls = Json::array();
  for (const auto& x : c.classes) cls.push_back(elem_to_json(R, x));
  emit(Json{{"ring", R.name()}, {"exists", c.exists}, {"classes", cls}, {"u_dim", c.u_dim},
            {"minimal", c.exists ? form_to_json(c.minimal) : Json(nullptr)}});
  return c.exists ? kOk : kNo;
}

struct PosetArgs {
  std::string form, ring, kind = "IU", groupoid = "MetF", f = "1";
  int max_len = 3;
};

GroupoidKind parse_groupoid(const std::string& s) {
  for (GroupoidKind k : {GroupoidKind::MetF, GroupoidKind::DiagZi, GroupoidKind::FullZ, GroupoidKind::FullChar2})
    if (groupoid_name(k) == s) return k;
  fail(ErrorKind::Input, "unknown groupoid: " + s);
}

struct BuiltPoset {
  std::unique_ptr<CodeSpace> S;
  SeqPoset P;
  bool pairs = false;
};

BuiltPoset build_poset(const PosetArgs& a, const Globals& g) {
  const auto R = optional_ring(a.ring);
  Form M = read_form(a.form, R, "--form");
  require(M.R.is_field(), ErrorKind::Input, "posets are built over finite fields");
  BuiltPoset out;
  out.S = std::make_unique<CodeSpace>(M);
  const CodeSpace& S = *out.S;
  if (a.kind == "IU") {
    out.P = build_IU(S, a.max_len, g.poset());
  } else if (a.kind == "U") {
    out.P = build_U(S, a.max_len, g.poset());
  } else if (a.kind == "Uprime") {
    out.P = build_Uprime(S, a.max_len, g.poset());
  } else if (a.kind == "FIU" || a.kind == "FU") {
    const RElem f = elem_from_json(M.R, parse_json(a.f, "--f"));
    FLikeOracle O(S, make_groupoid(parse_groupoid(a.groupoid), M.R, f));
    out.pairs = a.kind == "FU";
    out.P = out.pairs ? build_FU(O, a.max_len, g.poset()) : build_FIU(O, a.max_len, g.poset());
  } else {
    fail(ErrorKind::Input, "unknown poset kind: " + a.kind);
  }
  return out;
}

int cmd_poset(const PosetArgs& a, const Globals& g) {
  BuiltPoset b = build_poset(a, g);
  const CodeSpace& S = *b.S;
  const Ring& R = S.ring();
  auto vec_json = [&](long code) {
    Json v = Json::array();
    for (const auto& x : S.vec(code)) v.push_back(elem_to_json(R, x));
    return v;
  };
  for (int i = 0; i < b.P.size(); ++i) {
    const Seq& s = b.P.verts[i];
    Json seq = Json::array();
    for (long e : s) {
      if (b.pairs)
        seq.push_back(Json{{"v", vec_json(e / S.size())}, {"w", vec_json(e % S.size())}});
      else
        seq.push_back(vec_json(e));
    }
    std::vector<int> parents;
    for (size_t k = 0; k < s.size() && s.size() > 1; ++k) {
      Seq sub = s;
      sub.erase(sub.begin() + static_cast<long>(k));
      const int p = b.P.find(sub);
      if (p >= 0) parents.push_back(p);
    }
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    emit(Json{{"id", i}, {"seq", seq}, {"parents", parents}});
  }
  return kOk;
}

int cmd_homology(const PosetArgs& a, const std::string& faces_arg, bool closed, int up_to, long p,
                 std::optional<int> claimed, const Globals& g) {
  Complex C;
  Json head = Json::object();
  if (!faces_arg.empty()) {
    const Json j = arg_json(faces_arg, "--faces");
    std::set<std::vector<int>> faces;
    for (const auto& f : j) {
      std::vector<int> s = f.get<std::vector<int>>();
      std::sort(s.begin(), s.end());
      if (closed) {
        faces.insert(s);
        continue;
      }
      const int k = static_cast<int>(s.size());
      require(k <= 20, ErrorKind::Input, "facet too large");
      for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> t;
        for (int i = 0; i < k; ++i)
          if (mask >> i & 1) t.push_back(s[i]);
        faces.insert(t);
      }
    }
    C = complex_from_faces({faces.begin(), faces.end()});
  } else {
    BuiltPoset b = build_poset(a, g);
    C = order_complex(order_of(b.P));
    head["poset"] = b.P.label;
    head["vertices"] = b.P.size();
  }
  const int top = C.top_dim();
  const int deg = up_to >= -1 ? std::min(up_to, std::max(top, -1)) : std::max(top, -1);
  head["dimension"] = top;
  head["profile"] = profile_to_json(homology(C, deg, p));
  int code = kOk;
  if (claimed) {
    ConnectivityVerdict v = connectivity_verdict(C, *claimed);
    head["verdict"] = Json{{"claimed", v.claimed}, {"pass", v.pass}, {"vacuous", v.vacuous},
                           {"vanishing_through", v.vanishing_through}, {"detail", v.detail}};
    code = v.pass ? kOk : kNo;
  }
  emit(head);
  return code;
}

struct StabArgs {
  std::string ring, base, stab, range, format = "json";
  int from = 1, to = 3, cofinal_cR = -1;
  int z = 0, c = 0, r = 0, n = 0, cR = 0;
};

int cmd_stability(const StabArgs& a, const Globals& g) {
  if (!a.range.empty()) {
    RangeQuery q{parse_range_kind(a.range), a.z, a.c, a.r, a.n, a.cR};
    const long bound = range_bound(q);
    emit(Json{{"kind", a.range}, {"bound", bound}, {"vacuous", bound < 0}});
    return kOk;
  }
  const auto R = optional_ring(a.ring);
  require(!a.stab.empty(), ErrorKind::Input, "stability needs --stab (or --range)");
  Form F = read_form(a.stab, R, "--stab");
  Form M0 = a.base.empty() ? zero_form(F.R) : read_form(a.base, std::optional<Ring>(F.R), "--base");
  auto rows = h1_stability_table(M0, F, a.from, a.to, g.group(), a.cofinal_cR);
  if (a.format == "tsv")
    std::cout << stability_tsv(rows);
  else if (a.format == "json")
    emit(stability_to_json(rows));
  else
    fail(ErrorKind::Input, "unknown format: " + a.format);
  return kOk;
}

int cmd_verify_suite(const std::string& level, const std::vector<int>& only, const Globals& g) {
  SuiteOptions opt;
  opt.level = level;
  opt.seed = g.seed;
  opt.vertex_cap = g.vertex_cap;
  opt.group_cap = g.group_cap;
  opt.only = only;
  const int planned = only.empty() ? 12 : static_cast<int>(only.size());
  std::cout << "TAP version 13\n1.." << planned << '\n' << std::flush;
  int k = 0, failed = 0;
  opt.on_line = [&](const SuiteLine& l) {
    ++k;
    failed += !l.pass;
    std::cout << (l.pass ? "ok " : "not ok ") << k << " - criterion " << l.id << ": " << l.name << " # " << l.detail
              << '\n'
              << std::flush;
  };
  run_suite(opt);
  std::cout << "# " << (k - failed) << " passed, " << failed << " failed\n";
  return failed ? kNo : kOk;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Input:
    case ErrorKind::Precondition: return kInput;
    case ErrorKind::Budget:
    case ErrorKind::Unsupported:
    case ErrorKind::Internal: return kUnknown;
  }
  return kUnknown;
}

std::string kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Input: return "input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric bilinear forms over small PIDs: classification, posets, homology and stability"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--height", g.height, "search height for vectors over infinite rings")->check(CLI::PositiveNumber);
  app.add_option("--vertex-cap", g.vertex_cap, "maximum poset vertices")->check(CLI::PositiveNumber);
  app.add_option("--group-cap", g.group_cap, "maximum isometry group order")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--jobs", g.jobs, "worker cap; computations run on one worker")->check(CLI::PositiveNumber);

  std::string ring, form, a_form, b_form, cert, faces, level = "desk";
  bool verify = false, closed = false;
  int up_to = -2;
  long coeffs = 0;
  std::optional<int> claimed;
  std::vector<int> only;
  PosetArgs pa;
  StabArgs sa;

  auto* rc = app.add_subcommand("ring-check", "check the mod-2 assumption on a ring");
  rc->add_option("--ring", ring, "ring descriptor JSON")->required();

  auto* cl = app.add_subcommand("classify", "invariants and normal forms of a form");
  cl->add_option("--form", form, "form JSON")->required();
  cl->add_option("--ring", ring, "ring descriptor, when the form omits it");

  auto* is = app.add_subcommand("isometry", "decide isometry with a certificate, or verify one");
  is->add_option("--a", a_form, "first form JSON");
  is->add_option("--b", b_form, "second form JSON");
  is->add_option("--ring", ring, "ring descriptor, when the forms omit it");
  is->add_flag("--verify", verify, "verify the certificate given by --cert");
  is->add_option("--cert", cert, "certificate JSON (or a result object containing one)");

  auto* co = app.add_subcommand("cofinal", "minimal metabolic cofinal form");
  co->add_option("--ring", ring, "ring descriptor JSON")->required();

  auto add_poset_opts = [&](CLI::App* s, bool need_form) {
    auto* o = s->add_option("--form", pa.form, "form JSON over a finite field");
    if (need_form) o->required();
    s->add_option("--ring", pa.ring, "ring descriptor, when the form omits it");
    s->add_option("--kind", pa.kind, "IU, U, Uprime, FIU or FU")->capture_default_str();
    s->add_option("--max-len", pa.max_len, "maximum sequence length")->capture_default_str();
    s->add_option("--groupoid", pa.groupoid, "groupoid for FIU/FU")->capture_default_str();
    s->add_option("--f", pa.f, "element r of F = theta(r), JSON")->capture_default_str();
  };
  auto* po = app.add_subcommand("poset", "dump a sequence poset as JSON lines");
  add_poset_opts(po, true);

  auto* ho = app.add_subcommand("homology", "reduced homology of a poset's order complex or a simplicial complex");
  add_poset_opts(ho, false);
  ho->add_option("--faces", faces, "JSON list of simplices (vertex lists); closed under faces unless --closed");
  ho->add_flag("--closed", closed, "the face list is already closed");
  ho->add_option("--up-to", up_to, "highest degree");
  ho->add_option("--coeffs", coeffs, "0 for integers, or a prime p")->capture_default_str();
  ho->add_option("--claimed", claimed, "connectivity bound to test");

  auto* st = app.add_subcommand("stability", "H_1 stability tables or stability-range bounds");
  st->add_option("--ring", sa.ring, "ring descriptor, when the forms omit it");
  st->add_option("--stab", sa.stab, "stabilizing form F");
  st->add_option("--base", sa.base, "base form M0 (default zero)");
  st->add_option("--from", sa.from, "first summand count")->capture_default_str();
  st->add_option("--to", sa.to, "last summand count")->capture_default_str();
  st->add_option("--cofinal-cR", sa.cofinal_cR, "c(R) when F is the minimal cofinal metabolic form");
  st->add_option("--format", sa.format, "json or tsv")->capture_default_str();
  st->add_option("--range", sa.range, "bound kind: mainl-epi, mainl-iso, mainl-split-epi, mainl-split-iso, "
                                       "mainl-general-epi, mainl-general-iso, homstab, useintro");
  st->add_option("--z", sa.z, "isotropic rank");
  st->add_option("--c", sa.c, "complexity");
  st->add_option("--r", sa.r, "coefficient-system degree");
  st->add_option("--n", sa.n, "number of summands");
  st->add_option("--cR", sa.cR, "c(R)");

  auto* vs = app.add_subcommand("verify-suite", "run the acceptance battery");
  vs->add_option("--level", level, "desk or quick")->capture_default_str();
  vs->add_option("--only", only, "criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e);
    return rc_code == 0 ? kOk : kInput;
  }

  try {
    if (*rc) return cmd_ring_check(ring);
    if (*cl) return cmd_classify(form, ring, g);
    if (*is) return cmd_isometry(a_form, b_form, ring, cert, verify, g);
    if (*co) return cmd_cofinal(ring);
    if (*po) return cmd_poset(pa, g);
    if (*ho) {
      require(!faces.empty() || !pa.form.empty(), ErrorKind::Input, "homology needs --faces or --form");
      return cmd_homology(pa, faces, closed, up_to, coeffs, claimed, g);
    }
    if (*st) return cmd_stability(sa, g);
    if (*vs) return cmd_verify_suite(level, only, g);
  } catch (const Error& e) {
    std::cerr << Json{{"error", kind_name(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return exit_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << Json{{"error", "input"}, {"message", e.what()}}.dump() << '\n';
    return kInput;
  }
  return kInput;
}
