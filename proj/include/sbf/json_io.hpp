#pragma once

#include "sbf/form.hpp"
#include "sbf/homology.hpp"
#include "sbf/stability.hpp"

#include <json.hpp>

#include <string>

namespace sbf {

using Json = nlohmann::ordered_json;

// Parses text, reporting the byte offset of syntax errors as Input errors.
Json parse_json(const std::string& text, const std::string& what);

// {"kind":"Z"} | {"kind":"quadratic","D":-1} | {"kind":"gf","p":2,"f":[1,1,1]}
Ring ring_from_json(const Json& j);
Json ring_to_json(const Ring& R);

// Coordinate arrays; a bare integer n is accepted as n * 1.
RElem elem_from_json(const Ring& R, const Json& j);
Json elem_to_json(const Ring& R, const RElem& a);

Mat mat_from_json(const Ring& R, const Json& j);
Json mat_to_json(const Ring& R, const Mat& A);

// {"ring": ..., "gram": [[elem, ...], ...]}; with fallback_ring, "ring" may be
// omitted and a bare Gram array is accepted.
Form form_from_json(const Json& j, const Ring* fallback_ring = nullptr);
Json form_to_json(const Form& M);

// {"source": form, "target": form, "matrix": [[...]]}, checked on load.
Isometry isometry_from_json(const Json& j);
Json isometry_to_json(const Isometry& f);

Json profile_to_json(const HomologyProfile& H);
Json stability_to_json(const std::vector<StabilityRow>& rows);

}  // namespace sbf
