#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/integer.hpp>

#include "tatekit/bigint.hpp"

namespace tatekit {

using u64 = std::uint64_t;

// Dense polynomial over F_p, lowest coefficient first, no trailing zeros.
using FpPoly = std::vector<u64>;
// Element of F_{p^r}: exactly r coefficients in [0, p).
using FieldElement = std::vector<u64>;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly poly_mod(FpPoly a, const FpPoly& m, u64 p) {
  trim(a);
  const u64 lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    const u64 c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

inline FpPoly poly_mul(const FpPoly& a, const FpPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(c);
  return c;
}

inline FpPoly poly_powmod(FpPoly base, u64 e, const FpPoly& m, u64 p) {
  FpPoly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
    base = poly_mod(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return poly_mod(std::move(r), m, p);
}

inline FpPoly poly_gcd(FpPoly a, FpPoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: a degree-n polynomial is irreducible iff gcd(x^{p^i} - x, f) = 1
// for every i <= n/2.
inline bool is_irreducible(const FpPoly& f, u64 p) {
  const std::size_t n = f.size() - 1;
  if (n == 0) return false;
  FpPoly xp{0, 1};
  for (std::size_t i = 1; i <= n / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    FpPoly diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2));
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (poly_gcd(f, diff, p).size() != 1) return false;
  }
  return true;
}

}  // namespace detail

// The finite field F_{p^r} = F_p[x]/(modulus) for an odd prime p.
class ResidueField {
 public:
  ResidueField() = default;

  ResidueField(u64 p, FpPoly modulus) : p_(p), modulus_(std::move(modulus)) {
    if (p == 2 || !detail::is_prime(p)) throw Error(ErrorCode::InvalidArgument, "residue characteristic must be an odd prime");
    if (p >= (u64{1} << 31)) throw Error(ErrorCode::TooLarge, "residue characteristic too large");
    for (u64 c : modulus_)
      if (c >= p) throw Error(ErrorCode::InvalidArgument, "modulus coefficients must lie in [0, p)");
    if (modulus_.size() < 2 || modulus_.back() != 1) throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree >= 1");
    if (!detail::is_irreducible(modulus_, p)) throw Error(ErrorCode::InvalidArgument, "modulus is not irreducible");
    r_ = modulus_.size() - 1;
    q_ = 1;
    for (std::size_t i = 0; i < r_; ++i) {
      if (q_ > (u64{1} << 62) / p) throw Error(ErrorCode::TooLarge, "field size exceeds 2^62");
      q_ *= p;
    }
  }

  // F_p with modulus x.
  static ResidueField prime(u64 p) { return ResidueField(p, {0, 1}); }

  // F_{p^r} with the first irreducible monic modulus in the order of
  // sum c_i p^i over the lower coefficients.
  static ResidueField canonical(u64 p, std::size_t r) {
    if (r == 1) return prime(p);
    if (r == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be positive");
    FpPoly m(r + 1);
    m[r] = 1;
    for (;;) {
      if (m[0] != 0 && detail::is_irreducible(m, p)) return ResidueField(p, m);
      std::size_t i = 0;
      while (i < r && ++m[i] == p) m[i++] = 0;
      if (i == r) throw Error(ErrorCode::InvalidArgument, "no irreducible modulus found");
    }
  }

  u64 p() const { return p_; }
  std::size_t degree() const { return r_; }
  u64 size() const { return q_; }
  const FpPoly& modulus() const { return modulus_; }

  FieldElement zero() const { return FieldElement(r_, 0); }
  FieldElement one() const {
    FieldElement e = zero();
    e[0] = 1;
    return e;
  }
  FieldElement from_int(long long v) const {
    FieldElement e = zero();
    const long long pp = static_cast<long long>(p_);
    e[0] = static_cast<u64>(((v % pp) + pp) % pp);
    return e;
  }
  FieldElement from_coeffs(const std::vector<long long>& coeffs) const {
    if (coeffs.size() > r_) throw Error(ErrorCode::InvalidArgument, "too many coefficients for the residue field");
    FieldElement e = zero();
    const long long pp = static_cast<long long>(p_);
    for (std::size_t i = 0; i < coeffs.size(); ++i) e[i] = static_cast<u64>(((coeffs[i] % pp) + pp) % pp);
    return e;
  }
  // Element with base-p digits of k as coefficients, 0 <= k < q.
  FieldElement element(u64 k) const {
    FieldElement e = zero();
    for (std::size_t i = 0; i < r_; ++i, k /= p_) e[i] = k % p_;
    return e;
  }
  u64 index(const FieldElement& e) const {
    u64 k = 0;
    for (std::size_t i = r_; i-- > 0;) k = k * p_ + e[i];
    return k;
  }

  bool is_zero(const FieldElement& a) const {
    for (u64 c : a)
      if (c != 0) return false;
    return true;
  }
  FieldElement add(const FieldElement& a, const FieldElement& b) const {
    FieldElement c(r_);
    for (std::size_t i = 0; i < r_; ++i) c[i] = (a[i] + b[i]) % p_;
    return c;
  }
  FieldElement sub(const FieldElement& a, const FieldElement& b) const {
    FieldElement c(r_);
    for (std::size_t i = 0; i < r_; ++i) c[i] = (a[i] + p_ - b[i]) % p_;
    return c;
  }
  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    return pad(detail::poly_mod(detail::poly_mul(trimmed(a), trimmed(b), p_), modulus_, p_));
  }
  FieldElement pow(const FieldElement& a, u64 e) const {
    return pad(detail::poly_powmod(trimmed(a), e, modulus_, p_));
  }
  FieldElement inverse(const FieldElement& a) const {
    if (is_zero(a)) throw Error(ErrorCode::ZeroInput, "zero has no inverse");
    return pow(a, q_ - 2);
  }

  // Euler's criterion: a^{(q-1)/2} = 1. Zero is not a square unit.
  bool is_square(const FieldElement& a) const {
    if (is_zero(a)) throw Error(ErrorCode::ZeroInput, "squareness of zero is not defined");
    return pow(a, (q_ - 1) / 2) == one();
  }

  // Smallest element (by index) that is not a square.
  FieldElement first_non_square() const {
    for (u64 k = 1; k < q_; ++k)
      if (!is_square(element(k))) return element(k);
    throw Error(ErrorCode::InvalidArgument, "field has no non-square");
  }

  // A root in this field of `sub`'s modulus, which defines an embedding
  // sub -> this. Requires deg(sub) | deg(this).
  FieldElement embedding_root(const ResidueField& sub) const {
    if (sub.p() != p_ || r_ % sub.degree() != 0) throw Error(ErrorCode::InvalidArgument, "not a subfield");
    if (is_zero(eval(sub.modulus(), zero()))) return zero();
    const u64 cofactor = (q_ - 1) / (sub.size() - 1);
    const auto primes = detail::prime_factors(sub.size() - 1);
    for (u64 k = 1; k < q_; ++k) {
      FieldElement g = pow(element(k), cofactor);
      bool generates = true;
      for (u64 l : primes) generates = generates && pow(g, (sub.size() - 1) / l) != one();
      if (!generates) continue;
      // Powers of g together with 0 are the copy of the subfield.
      FieldElement y = one();
      for (u64 j = 0; j + 1 < sub.size(); ++j, y = mul(y, g))
        if (is_zero(eval(sub.modulus(), y))) return y;
    }
    throw Error(ErrorCode::InvalidArgument, "subfield modulus has no root");
  }

  // Image of a sub-field element under the embedding x -> root.
  FieldElement embed(const FieldElement& a, const FieldElement& root) const {
    FieldElement out = zero(), power = one();
    for (u64 c : a) {
      FieldElement term = zero();
      for (std::size_t i = 0; i < r_; ++i) term[i] = detail::mulmod(c, power[i], p_);
      out = add(out, term);
      power = mul(power, root);
    }
    return out;
  }

  std::string to_string(const FieldElement& a) const {
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  }

  friend bool operator==(const ResidueField& a, const ResidueField& b) { return a.p_ == b.p_ && a.modulus_ == b.modulus_; }

 private:
  FieldElement eval(const FpPoly& f, const FieldElement& x) const {
    FieldElement acc = zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = add(mul(acc, x), from_int(static_cast<long long>(f[i])));
    return acc;
  }
  FpPoly trimmed(FieldElement a) const {
    detail::trim(a);
    return a;
  }
  FieldElement pad(FpPoly a) const {
    a.resize(r_, 0);
    return a;
  }

  u64 p_ = 3;
  std::size_t r_ = 1;
  u64 q_ = 3;
  FpPoly modulus_{0, 1};
};

// A class in O_K / p^N for K unramified with prime residue field.
struct TruncatedElement {
  Int value;
  unsigned precision = 0;
};

struct TeichmullerResult {
  TruncatedElement lift;
  std::vector<Int> iterates;  // x_0 = alpha, x_{k+1} = x_k^q mod p^N, ending at the fixed point
};

// The (q-1)-st root of unity mod p^N lifting alpha, by iterating x -> x^q.
inline TeichmullerResult teichmuller_lift_traced(long long alpha, const ResidueField& field, unsigned precision) {
  if (field.degree() != 1) throw Error(ErrorCode::InvalidArgument, "Teichmuller lifts are implemented for prime residue fields only");
  if (precision == 0) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  const Int p = field.p();
  const Int modulus = tatekit::pow(p, precision);
  Int x = floor_mod(Int(alpha), p);
  if (x == 0) throw Error(ErrorCode::ZeroInput, "zero has no Teichmuller lift");
  TeichmullerResult out;
  out.iterates.push_back(x);
  for (unsigned step = 0;; ++step) {
    // x_k is correct mod p^{k+1}, so the fixed point is reached by step N.
    if (step > precision) throw Error(ErrorCode::InvalidArgument, "Teichmuller iteration did not converge");
    Int next = boost::multiprecision::powm(x, p, modulus);
    if (next == x) break;
    x = next;
    out.iterates.push_back(x);
  }
  out.lift = {x, precision};
  return out;
}

inline TruncatedElement teichmuller_lift(long long alpha, const ResidueField& field, unsigned precision) {
  return teichmuller_lift_traced(alpha, field, precision).lift;
}

// K^x / (K^x)^2 as a Klein four-group: bit 0 is the unit part, bit 1 the
// valuation parity, so multiplication is xor.
enum class SquareClass : unsigned { One = 0, Eps = 1, Pi = 2, EpsPi = 3 };

inline SquareClass operator*(SquareClass a, SquareClass b) {
  return static_cast<SquareClass>(static_cast<unsigned>(a) ^ static_cast<unsigned>(b));
}

inline std::string_view square_class_name(SquareClass c) {
  switch (c) {
    case SquareClass::One: return "ONE";
    case SquareClass::Eps: return "EPS";
    case SquareClass::Pi: return "PI";
    case SquareClass::EpsPi: return "EPS_PI";
  }
  return "ONE";
}

inline SquareClass square_class(long long valuation, const FieldElement& unit_residue, const ResidueField& field) {
  unsigned bits = field.is_square(unit_residue) ? 0u : 1u;
  if (valuation % 2 != 0) bits |= 2u;
  return static_cast<SquareClass>(bits);
}

inline bool is_square(long long valuation, const FieldElement& unit_residue, const ResidueField& field) {
  return square_class(valuation, unit_residue, field) == SquareClass::One;
}

// Symbolic tame-by-wild extension L/K: [L:K] = p^wild * f * e with residue
// degree f and tame ramification e. alpha is the residue of pi_L^e / pi_K in
// k_E = F_{q^f}, written in the field returned by residue_extension.
struct TameExtDescriptor {
  unsigned wild_exponent = 0;
  u64 f = 1;
  u64 e = 1;
  FieldElement alpha;
};

// k_E for a descriptor over k_K: k_K itself when f = 1.
inline ResidueField residue_extension(const ResidueField& base, u64 f) {
  if (f == 1) return base;
  return ResidueField::canonical(base.p(), base.degree() * f);
}

struct QuadraticSubextension {
  SquareClass square_class = SquareClass::One;
  // Unit part beta in k_K with alpha = alpha_1^2 beta, when e is even.
  std::optional<FieldElement> beta;
  std::vector<std::string> trace;
};

inline QuadraticSubextension quadratic_subextension(const TameExtDescriptor& ext, const ResidueField& field) {
  const u64 p = field.p();
  if (p % 2 == 0) throw Error(ErrorCode::WildEven, "wild degree is even");
  if (ext.f == 0 || ext.e == 0) throw Error(ErrorCode::InvalidDescriptor, "f and e must be positive");
  if (ext.e % p == 0) throw Error(ErrorCode::InvalidDescriptor, "tame ramification index must be prime to p");
  if ((ext.f * ext.e) % 2 != 0) throw Error(ErrorCode::OddDegree, "extension has odd degree");

  QuadraticSubextension out;
  out.trace.push_back("drop the wild part of degree " + std::to_string(p) + "^" + std::to_string(ext.wild_exponent) +
                      ", which is odd");
  if (ext.f % 2 == 0) {
    out.square_class = SquareClass::Eps;
    out.trace.push_back("residue degree f = " + std::to_string(ext.f) +
                        " is even: the unramified quadratic extension K(sqrt(eps)) lies in E");
    return out;
  }
  out.trace.push_back("f = " + std::to_string(ext.f) + " is odd, so e = " + std::to_string(ext.e) + " = 2d is even");
  const ResidueField ke = residue_extension(field, ext.f);
  if (ext.alpha.size() != ke.degree()) throw Error(ErrorCode::InvalidDescriptor, "alpha must have one coefficient per degree of k_E");
  for (u64 c : ext.alpha)
    if (c >= p) throw Error(ErrorCode::InvalidDescriptor, "alpha coefficients must lie in [0, p)");
  if (ke.is_zero(ext.alpha)) throw Error(ErrorCode::ZeroInput, "alpha must be a unit residue");

  const bool alpha_square = ke.is_square(ext.alpha);
  const FieldElement beta = alpha_square ? field.one() : field.first_non_square();
  // alpha / iota(beta) must be a square in k_E.
  const FieldElement beta_e = ke == field ? beta : ke.embed(beta, ke.embedding_root(field));
  if (!ke.is_square(ke.mul(ext.alpha, ke.inverse(beta_e))))
    throw Error(ErrorCode::InvalidArgument, "square classes of k_K and k_E do not correspond");
  out.beta = beta;
  out.square_class = (alpha_square ? SquareClass::One : SquareClass::Eps) * SquareClass::Pi;
  out.trace.push_back(std::string("alpha is ") + (alpha_square ? "a square" : "a non-square") + " in k_E of size " +
                      std::to_string(ke.size()));
  out.trace.push_back("alpha = alpha_1^2 * beta with beta = " + field.to_string(beta) + " in k_K");
  out.trace.push_back(std::string("(pi_L^d / (b alpha_1))^2 = beta pi_K, class ") +
                      std::string(square_class_name(out.square_class)));
  return out;
}

}  // namespace tatekit
