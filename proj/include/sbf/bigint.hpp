#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace sbf {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Floor division and the matching non-negative remainder (b > 0 for mod_floor).
Int floor_div(const Int& a, const Int& b);
Int mod_floor(const Int& a, const Int& b);
// Nearest integer to a/b, ties toward +infinity.
Int round_div(const Int& a, const Int& b);
// Exact integer square root test.
bool is_square(const Int& a, Int* root = nullptr);
long to_long(const Int& a);
std::string to_string(const Int& a);

}  // namespace sbf
