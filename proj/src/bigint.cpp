#include "sbf/bigint.hpp"

#include "sbf/error.hpp"

namespace sbf {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

Int mod_floor(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

Int round_div(const Int& a, const Int& b) {
  // floor((2a + b) / 2b)
  return floor_div(2 * a + b, 2 * b);
}

bool is_square(const Int& a, Int* root) {
  if (a < 0) return false;
  Int r = boost::multiprecision::sqrt(a);
  if (r * r != a) return false;
  if (root) *root = r;
  return true;
}

long to_long(const Int& a) {
  require(a >= std::numeric_limits<long>::min() && a <= std::numeric_limits<long>::max(),
          ErrorKind::Internal, "integer does not fit in a machine word");
  return a.convert_to<long>();
}

std::string to_string(const Int& a) { return a.str(); }

}  // namespace sbf
