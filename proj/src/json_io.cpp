#include "sbf/json_io.hpp"

#include "sbf/error.hpp"

namespace sbf {

namespace {

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    require(s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos, ErrorKind::Input,
            "not an integer: " + s);
    return Int(s);
  }
  fail(ErrorKind::Input, "expected an integer, got " + j.dump());
}

Json int_to_json(const Int& a) {
  if (a >= Int(std::numeric_limits<long long>::min()) && a <= Int(std::numeric_limits<long long>::max()))
    return Json(static_cast<long long>(a));
  return Json(to_string(a));
}

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::Input, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Input, what + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Ring ring_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "Z") return Ring::integers();
  if (kind == "quadratic") return Ring::quadratic(field(j, "D").get<long>());
  if (kind == "gf") {
    std::vector<long> f;
    for (const auto& c : field(j, "f")) f.push_back(c.get<long>());
    return Ring::finite_field(field(j, "p").get<long>(), f);
  }
  fail(ErrorKind::Input, "unknown ring kind: " + kind);
}

Json ring_to_json(const Ring& R) {
  switch (R.kind()) {
    case RingKind::Integers: return Json{{"kind", "Z"}};
    case RingKind::Quadratic: return Json{{"kind", "quadratic"}, {"D", R.disc()}};
    case RingKind::FiniteField: return Json{{"kind", "gf"}, {"p", R.characteristic()}, {"f", R.modulus()}};
  }
  fail(ErrorKind::Internal, "unknown ring kind");
}

RElem elem_from_json(const Ring& R, const Json& j) {
  if (!j.is_array()) return R.from_int(int_from_json(j));
  require(static_cast<int>(j.size()) == R.dim(), ErrorKind::Input,
          "element " + j.dump() + " needs " + std::to_string(R.dim()) + " coordinates");
  std::vector<Int> c;
  for (const auto& x : j) c.push_back(int_from_json(x));
  return R.make(c);
}

Json elem_to_json(const Ring& R, const RElem& a) {
  (void)R;
  Json out = Json::array();
  for (const Int& c : a.c) out.push_back(int_to_json(c));
  return out;
}

Mat mat_from_json(const Ring& R, const Json& j) {
  require(j.is_array(), ErrorKind::Input, "matrix must be an array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = rows ? static_cast<int>(j[0].size()) : 0;
  Mat A = mat_zero(R, rows, cols);
  for (int i = 0; i < rows; ++i) {
    require(j[i].is_array() && static_cast<int>(j[i].size()) == cols, ErrorKind::Input,
            "matrix row " + std::to_string(i) + " has the wrong length");
    for (int k = 0; k < cols; ++k) A(i, k) = elem_from_json(R, j[i][k]);
  }
  return A;
}

Json mat_to_json(const Ring& R, const Mat& A) {
  Json out = Json::array();
  for (int i = 0; i < A.rows; ++i) {
    Json row = Json::array();
    for (int k = 0; k < A.cols; ++k) row.push_back(elem_to_json(R, A(i, k)));
    out.push_back(row);
  }
  return out;
}

Form form_from_json(const Json& j, const Ring* fallback_ring) {
  if (j.is_array()) {
    require(fallback_ring != nullptr, ErrorKind::Input, "a bare Gram matrix needs a ring");
    return make_form(*fallback_ring, mat_from_json(*fallback_ring, j));
  }
  Ring R = j.is_object() && j.contains("ring") ? ring_from_json(j.at("ring"))
           : fallback_ring                    ? *fallback_ring
                                              : (fail(ErrorKind::Input, "form needs a ring"), Ring::integers());
  return make_form(R, mat_from_json(R, field(j, "gram")));
}

Json form_to_json(const Form& M) { return Json{{"ring", ring_to_json(M.R)}, {"gram", mat_to_json(M.R, M.G)}}; }

Isometry isometry_from_json(const Json& j) {
  Form src = form_from_json(field(j, "source"));
  Form tgt = form_from_json(field(j, "target"));
  require(src.R == tgt.R, ErrorKind::Input, "source and target live over different rings");
  Mat T = mat_from_json(src.R, field(j, "matrix"));
  require(verify_isometry(T, src, tgt), ErrorKind::Input, "certificate does not verify");
  return Isometry{src, tgt, T};
}

Json isometry_to_json(const Isometry& f) {
  return Json{{"source", form_to_json(f.source)}, {"target", form_to_json(f.target)}, {"matrix", mat_to_json(f.source.R, f.T)}};
}

Json profile_to_json(const HomologyProfile& H) {
  Json out = Json::array();
  for (const auto& g : H.groups) {
    Json t = Json::array();
    for (const Int& d : g.torsion) t.push_back(int_to_json(d));
    out.push_back(Json{{"degree", g.degree}, {"betti", g.betti}, {"torsion", t}, {"coeffs", H.coeffs()}});
  }
  return out;
}

Json stability_to_json(const std::vector<StabilityRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row{{"n", r.n},
             {"order", r.order},
             {"h1", r.h1},
             {"map_to_next", r.map_kind.empty() ? Json(nullptr) : Json(r.map_kind)},
             {"map_image", r.map_image},
             {"z", r.z},
             {"c", r.c},
             {"iso_bound", r.iso_bound},
             {"homstab_bound", r.homstab ? Json(*r.homstab) : Json(nullptr)},
             {"label", r.label}};
    out.push_back(row);
  }
  return out;
}

}  // namespace sbf
