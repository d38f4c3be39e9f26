#include "sbf/ring.hpp"

#include "sbf/error.hpp"
#include "sbf/mod2.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace sbf {

// 17 is norm-Euclidean but deliberately excluded (see README).
static const std::vector<long> kAccepted = {-11, -7, -3, -2, -1, 2,  3,  5,  6,  7,
                                            11,  13, 19, 21, 29, 33, 37, 41, 57, 73};

struct Ring::Impl {
  RingKind kind = RingKind::Integers;
  long D = 0;
  bool d1mod4 = false;
  long m = 0;  // w^2 = D (D = 2,3 mod 4) or w^2 = w + m (D = 1 mod 4)
  long p = 0;
  std::vector<long> f;  // monic, low-to-high, degree k
  int k = 1;
  long q = 0;
  mutable std::once_flag mod2_once;
  mutable std::unique_ptr<Mod2Ctx> mod2;
  mutable std::once_flag unit_once;
  mutable std::optional<RElem> unit;  // fundamental unit, real quadratic rings
};

namespace {

bool squarefree(long d) {
  long a = d < 0 ? -d : d;
  for (long i = 2; i * i <= a; ++i)
    if (a % (i * i) == 0) return false;
  return true;
}

long modp(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

long inv_modp(long a, long p) {
  long t = 0, nt = 1, r = p, nr = modp(a, p);
  while (nr != 0) {
    long qq = r / nr;
    t -= qq * nt;
    std::swap(t, nt);
    r -= qq * nr;
    std::swap(r, nr);
  }
  return modp(t, p);
}

// Remainder of g modulo monic h over F_p (both low-to-high).
std::vector<long> poly_rem(std::vector<long> g, const std::vector<long>& h, long p) {
  int dh = static_cast<int>(h.size()) - 1;
  for (int i = static_cast<int>(g.size()) - 1; i >= dh; --i) {
    long c = g[i];
    if (c == 0) continue;
    for (int j = 0; j <= dh; ++j) g[i - dh + j] = modp(g[i - dh + j] - c * h[j], p);
  }
  g.resize(std::max(dh, 0));
  return g;
}

bool is_irreducible(const std::vector<long>& f, long p) {
  int k = static_cast<int>(f.size()) - 1;
  if (k <= 1) return k == 1;
  // Trial division by every monic polynomial of degree 1..k/2.
  for (int d = 1; d <= k / 2; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) {
      count *= p;
      require(count <= 4'000'000, ErrorKind::Unsupported, "finite field too large for irreducibility check");
    }
    for (long code = 0; code < count; ++code) {
      std::vector<long> h(d + 1);
      long c = code;
      for (int i = 0; i < d; ++i) {
        h[i] = c % p;
        c /= p;
      }
      h[d] = 1;
      auto r = poly_rem(f, h, p);
      if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; })) return false;
    }
  }
  return true;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long i = 2; i * i <= p; ++i)
    if (p % i == 0) return false;
  return true;
}

}  // namespace

const std::vector<long>& Ring::accepted_discriminants() { return kAccepted; }

Ring Ring::integers() {
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::Integers;
  Ring r;
  r.impl_ = impl;
  return r;
}

Ring Ring::quadratic(long D) {
  require(D != 0 && D != 1 && squarefree(D), ErrorKind::Input,
          "quadratic ring: D must be squarefree and not 0 or 1");
  require(std::find(kAccepted.begin(), kAccepted.end(), D) != kAccepted.end(), ErrorKind::Input,
          "quadratic ring: D=" + std::to_string(D) + " is not on the accepted norm-Euclidean list");
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::Quadratic;
  impl->D = D;
  impl->k = 2;
  long r4 = modp(D, 4);
  impl->d1mod4 = (r4 == 1);
  impl->m = impl->d1mod4 ? (D - 1) / 4 : D;
  Ring r;
  r.impl_ = impl;
  return r;
}

Ring Ring::finite_field(long p, std::vector<long> f) {
  require(is_prime(p), ErrorKind::Input, "finite field: p must be prime");
  require(p <= 2'000'000'000L, ErrorKind::Unsupported, "finite field: p too large");
  while (!f.empty() && modp(f.back(), p) == 0) f.pop_back();
  require(f.size() >= 2, ErrorKind::Input, "finite field: modulus must have degree >= 1");
  for (auto& c : f) c = modp(c, p);
  long lead_inv = inv_modp(f.back(), p);
  for (auto& c : f) c = static_cast<long>((static_cast<__int128>(c) * lead_inv) % p);
  require(is_irreducible(f, p), ErrorKind::Input, "finite field: modulus is not irreducible");
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::FiniteField;
  impl->p = p;
  impl->f = f;
  impl->k = static_cast<int>(f.size()) - 1;
  __int128 q = 1;
  for (int i = 0; i < impl->k; ++i) {
    q *= p;
    require(q < (static_cast<__int128>(1) << 62), ErrorKind::Unsupported, "finite field: order too large");
  }
  impl->q = static_cast<long>(q);
  Ring r;
  r.impl_ = impl;
  return r;
}

RingKind Ring::kind() const { return impl_->kind; }
long Ring::disc() const { return impl_->D; }
long Ring::characteristic() const { return impl_->kind == RingKind::FiniteField ? impl_->p : 0; }
const std::vector<long>& Ring::modulus() const { return impl_->f; }
int Ring::dim() const { return impl_->k; }
long Ring::field_order() const { return impl_->q; }

std::string Ring::name() const {
  switch (impl_->kind) {
    case RingKind::Integers:
      return "Z";
    case RingKind::Quadratic:
      return "O(Q(sqrt(" + std::to_string(impl_->D) + ")))";
    case RingKind::FiniteField: {
      std::ostringstream os;
      os << "GF(" << impl_->p;
      if (impl_->k > 1) os << "^" << impl_->k;
      os << ")";
      return os.str();
    }
  }
  return "?";
}

bool Ring::operator==(const Ring& o) const {
  if (impl_ == o.impl_) return true;
  if (impl_->kind != o.impl_->kind) return false;
  switch (impl_->kind) {
    case RingKind::Integers:
      return true;
    case RingKind::Quadratic:
      return impl_->D == o.impl_->D;
    case RingKind::FiniteField:
      return impl_->p == o.impl_->p && impl_->f == o.impl_->f;
  }
  return false;
}

RElem Ring::zero() const {
  RElem e;
  e.c.assign(impl_->k, Int(0));
  return e;
}

RElem Ring::one() const { return from_int(Int(1)); }

RElem Ring::from_int(const Int& n) const {
  RElem e = zero();
  e.c[0] = n;
  if (is_field()) e.c[0] = mod_floor(n, Int(impl_->p));
  return e;
}

RElem Ring::make(const std::vector<Int>& coords) const {
  require(static_cast<int>(coords.size()) == impl_->k, ErrorKind::Input,
          "element has " + std::to_string(coords.size()) + " coordinates, ring " + name() + " expects " +
              std::to_string(impl_->k));
  RElem e;
  e.c.assign(coords.begin(), coords.end());
  if (is_field())
    for (auto& x : e.c) x = mod_floor(x, Int(impl_->p));
  return e;
}

RElem Ring::gen() const {
  RElem e = zero();
  if (impl_->k >= 2)
    e.c[1] = 1;
  else if (is_field())
    e.c[0] = mod_floor(Int(-impl_->f[0]), Int(impl_->p));  // root of a linear modulus
  else
    e.c[0] = 1;
  return e;
}

bool Ring::is_zero(const RElem& a) const {
  for (const auto& x : a.c)
    if (x != 0) return false;
  return true;
}

RElem Ring::add(const RElem& a, const RElem& b) const {
  RElem r;
  r.c.resize(impl_->k);
  for (int i = 0; i < impl_->k; ++i) {
    r.c[i] = a.c[i] + b.c[i];
    if (is_field() && r.c[i] >= impl_->p) r.c[i] -= impl_->p;
  }
  return r;
}

RElem Ring::neg(const RElem& a) const {
  RElem r;
  r.c.resize(impl_->k);
  for (int i = 0; i < impl_->k; ++i) {
    r.c[i] = -a.c[i];
    if (is_field() && r.c[i] != 0) r.c[i] += impl_->p;
  }
  return r;
}

RElem Ring::sub(const RElem& a, const RElem& b) const { return add(a, neg(b)); }

RElem Ring::mul(const RElem& a, const RElem& b) const {
  const Impl& I = *impl_;
  switch (I.kind) {
    case RingKind::Integers: {
      RElem r;
      r.c.push_back(a.c[0] * b.c[0]);
      return r;
    }
    case RingKind::Quadratic: {
      const Int& x = a.c[0];
      const Int& y = a.c[1];
      const Int& u = b.c[0];
      const Int& v = b.c[1];
      Int yv = y * v;
      RElem r;
      r.c.resize(2);
      if (I.d1mod4) {
        r.c[0] = x * u + yv * I.m;
        r.c[1] = x * v + y * u + yv;
      } else {
        r.c[0] = x * u + yv * I.D;
        r.c[1] = x * v + y * u;
      }
      return r;
    }
    case RingKind::FiniteField: {
      const long p = I.p;
      const int k = I.k;
      std::vector<long> g(2 * k - 1, 0);
      for (int i = 0; i < k; ++i) {
        long ai = a.c[i].convert_to<long>();
        if (ai == 0) continue;
        for (int j = 0; j < k; ++j) {
          long bj = b.c[j].convert_to<long>();
          g[i + j] = static_cast<long>((g[i + j] + static_cast<__int128>(ai) * bj) % p);
        }
      }
      auto rem = poly_rem(g, I.f, p);
      RElem r;
      r.c.resize(k);
      for (int i = 0; i < k; ++i) r.c[i] = rem[i];
      return r;
    }
  }
  return zero();
}

RElem Ring::pow(const RElem& a, unsigned long e) const {
  RElem result = one();
  RElem base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

RElem Ring::conj(const RElem& a) const {
  require(kind() == RingKind::Quadratic, ErrorKind::Internal, "conj on non-quadratic ring");
  RElem r;
  r.c.resize(2);
  if (impl_->d1mod4) {
    r.c[0] = a.c[0] + a.c[1];
    r.c[1] = -a.c[1];
  } else {
    r.c[0] = a.c[0];
    r.c[1] = -a.c[1];
  }
  return r;
}

Int Ring::qnorm(const RElem& a) const {
  require(kind() == RingKind::Quadratic, ErrorKind::Internal, "qnorm on non-quadratic ring");
  const Int& x = a.c[0];
  const Int& y = a.c[1];
  if (impl_->d1mod4) return x * x + x * y - y * y * impl_->m;
  return x * x - y * y * impl_->D;
}

Int Ring::euclid_norm(const RElem& a) const {
  switch (kind()) {
    case RingKind::Integers:
      return abs(a.c[0]);
    case RingKind::Quadratic:
      return abs(qnorm(a));
    case RingKind::FiniteField:
      return is_zero(a) ? Int(0) : Int(1);
  }
  return 0;
}

bool Ring::is_unit(const RElem& a) const {
  switch (kind()) {
    case RingKind::Integers:
      return a.c[0] == 1 || a.c[0] == -1;
    case RingKind::Quadratic: {
      Int n = qnorm(a);
      return n == 1 || n == -1;
    }
    case RingKind::FiniteField:
      return !is_zero(a);
  }
  return false;
}

std::optional<RElem> Ring::unit_inverse(const RElem& a) const {
  if (!is_unit(a)) return std::nullopt;
  switch (kind()) {
    case RingKind::Integers:
      return a;
    case RingKind::Quadratic: {
      RElem c = conj(a);
      if (qnorm(a) == -1) c = neg(c);
      return c;
    }
    case RingKind::FiniteField: {
      // a^(q-2) via square-and-multiply on the Int exponent.
      Int e = Int(impl_->q) - 2;
      RElem result = one();
      RElem base = a;
      while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0)) result = mul(result, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
      }
      return result;
    }
  }
  return std::nullopt;
}

std::pair<RElem, RElem> Ring::divmod(const RElem& a, const RElem& b) const {
  require(!is_zero(b), ErrorKind::Precondition, "division by zero");
  switch (kind()) {
    case RingKind::Integers: {
      Int q = round_div(a.c[0], b.c[0]);
      RElem qq = from_int(q);
      return {qq, sub(a, mul(qq, b))};
    }
    case RingKind::FiniteField: {
      RElem qq = mul(a, *unit_inverse(b));
      return {qq, zero()};
    }
    case RingKind::Quadratic: {
      // a/b = a*conj(b)/N(b); search integral points near the rounded quotient.
      RElem num = mul(a, conj(b));
      Int n = qnorm(b);
      Int nb = abs(n);
      auto search = [&](const RElem& nm, int max_radius) -> std::optional<RElem> {
        Int x0 = round_div(nm.c[0], n);
        Int y0 = round_div(nm.c[1], n);
        std::optional<RElem> best_q;
        Int best_norm;
        for (int radius = 1; radius <= max_radius; ++radius) {
          for (int dx = -radius; dx <= radius; ++dx)
            for (int dy = -radius; dy <= radius; ++dy) {
              if (std::max(std::abs(dx), std::abs(dy)) != radius && radius > 1) continue;
              RElem qq;
              qq.c = {x0 + dx, y0 + dy};
              // N(nm/n - q) * n^2 = N(nm - q n); compare against n^2.
              RElem t = sub(nm, mul(qq, from_int(n)));
              Int tn = abs(qnorm(t));
              if (!best_q || tn < best_norm) {
                best_q = qq;
                best_norm = tn;
              }
            }
          if (best_q && best_norm < nb * nb) return best_q;
        }
        return std::nullopt;
      };
      if (auto q = search(num, impl_->D < 0 ? 24 : 2)) return {*q, sub(a, mul(*q, b))};
      if (impl_->D > 0) {
        // Real quadratic rings: good quotients can lie far out along the
        // hyperbola |N| < 1. Write a/b = q0 + rho with q0 rounded and rho
        // small; N is invariant under units, so for a few unit powers e^k we
        // look for integral d with |N(e^k rho - d)| < 1, scanning each
        // w-coordinate y and taking x next to the two roots of the norm.
        std::call_once(impl_->unit_once, [this] { impl_->unit = fundamental_unit(*this); });
        require(impl_->unit.has_value(), ErrorKind::Budget, "fundamental unit unavailable");
        const RElem& eps = *impl_->unit;
        const RElem eps_inv = *unit_inverse(eps);
        RElem q0;
        q0.c = {round_div(num.c[0], n), round_div(num.c[1], n)};
        RElem rn = sub(num, mul(q0, from_int(n)));  // rho = rn / n
        Int n2 = n * n;
        long double sq = std::sqrt(static_cast<long double>(impl_->D));
        long double w1 = impl_->d1mod4 ? (1 + sq) / 2 : sq;
        long double w2 = impl_->d1mod4 ? (1 - sq) / 2 : -sq;
        auto ld = [](const Int& v) { return v.convert_to<long double>(); };
        long double e1 = ld(eps.c[0]) + ld(eps.c[1]) * w1;
        long ymax = static_cast<long>(std::ceil(2 * std::sqrt(e1) / sq)) + 2;
        long double nd = ld(n);
        for (int kk = 0; kk <= 8; ++kk) {
          long k = (kk % 2 ? 1 : -1) * ((kk + 1) / 2);
          RElem scale = pow(k >= 0 ? eps : eps_inv, static_cast<unsigned long>(std::labs(k)));
          RElem rk = mul(rn, scale);
          // Embeddings of rho_k = rk / n; the larger one is exact enough and
          // the smaller one follows from the norm.
          long double s1 = (ld(rk.c[0]) + ld(rk.c[1]) * w1) / nd;
          long double s2 = (ld(rk.c[0]) + ld(rk.c[1]) * w2) / nd;
          long double nr = ld(qnorm(rk)) / (nd * nd);
          if (std::fabs(s1) >= std::fabs(s2) && s1 != 0) s2 = nr / s1;
          else if (s2 != 0) s1 = nr / s2;
          for (long y = -ymax; y <= ymax; ++y) {
            long double roots[2] = {s1 - y * w1, s2 - y * w2};
            for (long double rt : roots) {
              long base = static_cast<long>(std::floor(rt));
              for (long x = base - 1; x <= base + 2; ++x) {
                RElem d;
                d.c = {Int(x), Int(y)};
                RElem t = sub(rk, mul(d, from_int(n)));
                if (abs(qnorm(t)) < n2) {
                  RElem qq = add(q0, mul(d, k >= 0 ? pow(eps_inv, k) : pow(eps, -k)));
                  RElem r = sub(a, mul(qq, b));
                  require(euclid_norm(r) < nb, ErrorKind::Internal, "unit-shifted division lost the norm bound");
                  return {qq, r};
                }
              }
            }
          }
        }
      }
      fail(ErrorKind::Internal, "norm-Euclidean division failed to find a small remainder for " + str(a) +
                                    " / " + str(b));
    }
  }
  return {zero(), zero()};
}

std::optional<RElem> Ring::divide_exact(const RElem& a, const RElem& b) const {
  if (is_zero(b)) return is_zero(a) ? std::optional<RElem>(zero()) : std::nullopt;
  switch (kind()) {
    case RingKind::Integers: {
      if (a.c[0] % b.c[0] != 0) return std::nullopt;
      return from_int(Int(a.c[0] / b.c[0]));
    }
    case RingKind::FiniteField:
      return mul(a, *unit_inverse(b));
    case RingKind::Quadratic: {
      RElem num = mul(a, conj(b));
      Int n = qnorm(b);
      if (num.c[0] % n != 0 || num.c[1] % n != 0) return std::nullopt;
      RElem r;
      r.c = {Int(num.c[0] / n), Int(num.c[1] / n)};
      return r;
    }
  }
  return std::nullopt;
}

bool Ring::units_finite() const {
  switch (kind()) {
    case RingKind::Integers:
      return true;
    case RingKind::Quadratic:
      return impl_->D < 0;
    case RingKind::FiniteField:
      return true;
  }
  return false;
}

std::vector<RElem> Ring::finite_units() const {
  require(units_finite(), ErrorKind::Unsupported, "unit group of " + name() + " is infinite");
  std::vector<RElem> out;
  switch (kind()) {
    case RingKind::Integers:
      out = {from_int(1), from_int(-1)};
      break;
    case RingKind::Quadratic: {
      RElem g;
      if (impl_->D == -1)
        g = gen();
      else if (impl_->D == -3)
        g = gen();  // (1+sqrt(-3))/2, a primitive sixth root of unity
      else
        g = from_int(-1);
      RElem x = one();
      do {
        out.push_back(x);
        x = mul(x, g);
      } while (x != one());
      break;
    }
    case RingKind::FiniteField:
      require(impl_->q <= 65536, ErrorKind::Unsupported, "unit list of a large field requested");
      for (long i = 1; i < impl_->q; ++i) out.push_back(element(i));
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<RElem, RElem> Ring::normalize(const RElem& a) const {
  if (is_zero(a)) return {a, one()};
  switch (kind()) {
    case RingKind::Integers:
      return a.c[0] < 0 ? std::make_pair(neg(a), from_int(-1)) : std::make_pair(a, one());
    case RingKind::FiniteField: {
      RElem u = *unit_inverse(a);
      return {one(), u};
    }
    case RingKind::Quadratic: {
      if (impl_->D < 0) {
        RElem best = a, bu = one();
        for (const auto& u : finite_units()) {
          RElem c = mul(u, a);
          if (best < c) {
            best = c;
            bu = u;
          }
        }
        return {best, bu};
      }
      const Int& lead = a.c[0] != 0 ? a.c[0] : a.c[1];
      return lead < 0 ? std::make_pair(neg(a), from_int(-1)) : std::make_pair(a, one());
    }
  }
  return {a, one()};
}

Ring::Xgcd Ring::xgcd(const RElem& a, const RElem& b) const {
  // Invariant: r0 = x0*a + y0*b, r1 = x1*a + y1*b.
  RElem r0 = a, r1 = b, x0 = one(), y0 = zero(), x1 = zero(), y1 = one();
  while (!is_zero(r1)) {
    auto [q, r] = divmod(r0, r1);
    RElem x2 = sub(x0, mul(q, x1));
    RElem y2 = sub(y0, mul(q, y1));
    r0 = std::move(r1);
    r1 = std::move(r);
    x0 = std::move(x1);
    x1 = std::move(x2);
    y0 = std::move(y1);
    y1 = std::move(y2);
  }
  auto [g, u] = normalize(r0);
  return {g, mul(u, x0), mul(u, y0)};
}

std::string Ring::str(const RElem& a) const {
  std::ostringstream os;
  switch (kind()) {
    case RingKind::Integers:
      os << a.c[0];
      break;
    case RingKind::Quadratic: {
      const char* w = impl_->D == -1 ? "i" : "w";
      if (a.c[1] == 0) {
        os << a.c[0];
      } else {
        if (a.c[0] != 0) os << a.c[0] << (a.c[1] > 0 ? "+" : "");
        if (a.c[1] == -1)
          os << "-";
        else if (a.c[1] != 1)
          os << a.c[1];
        os << w;
      }
      break;
    }
    case RingKind::FiniteField: {
      bool first = true;
      for (int i = 0; i < impl_->k; ++i) {
        if (a.c[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || a.c[i] != 1) os << a.c[i];
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
      }
      if (first) os << "0";
      break;
    }
  }
  return os.str();
}

long Ring::index_of(const RElem& a) const {
  require(is_field(), ErrorKind::Internal, "index_of on a non-field");
  long idx = 0;
  for (int i = impl_->k - 1; i >= 0; --i) idx = idx * impl_->p + a.c[i].convert_to<long>();
  return idx;
}

RElem Ring::element(long idx) const {
  require(is_field() && idx >= 0 && idx < impl_->q, ErrorKind::Internal, "element index out of range");
  RElem e;
  e.c.resize(impl_->k);
  for (int i = 0; i < impl_->k; ++i) {
    e.c[i] = idx % impl_->p;
    idx /= impl_->p;
  }
  return e;
}

const Mod2Ctx& Ring::mod2() const {
  std::call_once(impl_->mod2_once, [this] { impl_->mod2 = std::make_unique<Mod2Ctx>(build_mod2(*this)); });
  return *impl_->mod2;
}

}  // namespace sbf
