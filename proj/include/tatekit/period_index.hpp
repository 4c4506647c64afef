#pragma once

#include <array>
#include <string>
#include <vector>

#include "tatekit/gmodule.hpp"
#include "tatekit/local_field.hpp"

namespace tatekit {

// H^1(K, T) = (M_Gamma)_Tors for a torus split by a Galois extension with
// group Gamma acting on the cocharacters M.
inline FinAbGroup h1_local(const GModule& module) { return torsion_subgroup(coinvariants(module)).group; }

// A class in H^1(K, T) given as an element of (M_Gamma)_Tors.
class LocalTorusClass {
 public:
  LocalTorusClass(GModule module, AbElement cls) : module_(std::move(module)), h1_(h1_local(module_)), cls_(std::move(cls)) {
    if (!h1_.contains(cls_)) throw Error(ErrorCode::InvalidArgument, "class is not an element of the torsion coinvariants");
  }

  const GModule& module() const { return module_; }
  const FinAbGroup& group() const { return h1_; }
  const AbElement& cls() const { return cls_; }

 private:
  GModule module_;
  FinAbGroup h1_;
  AbElement cls_;
};

inline Int period(const LocalTorusClass& c) { return *element_order(c.cls(), c.group()); }

// Restriction to the fixed field of delta, computed as the transfer
// (M_Gamma)_Tors -> (M_delta)_Tors.
inline AbElement restriction(const LocalTorusClass& c, const Subgroup& delta) {
  const GModule& m = c.module();
  FinAbGroup target = torsion_subgroup(coinvariants(m, delta)).group;
  return transfer(m, Subgroup::whole(m.group()), delta, c.group(), c.cls(), target);
}

inline bool restriction_nontrivial(const LocalTorusClass& c, const Subgroup& delta) {
  return !restriction(c, delta).is_zero();
}

// One branch of the case analysis: the quadratic subextension K'/K of a
// hypothetical splitting field of degree 2d (d odd) is K(sqrt(a_j)).
struct CounterexampleWitness {
  SquareClass square_class = SquareClass::One;
  IntVector xi_j;                      // class of T_j in (M_Gamma)_Tors
  TameExtDescriptor sample_descriptor;  // a degree-2 extension landing in this class
  bool descriptor_lands_here = false;
  bool restriction_nontrivial = false;  // xi'_j != 0 in H^1(K'_j, T_j)
  bool split_by_quadratic = false;      // F_j / K'_j of degree 2 kills xi'_j
  bool coprime_rule_applies = false;    // gcd(2, d) = 1 for every odd d
  bool contradiction() const {
    return descriptor_lands_here && restriction_nontrivial && split_by_quadratic && coprime_rule_applies;
  }
};

struct CounterexampleReport {
  u64 p = 0;
  u64 q = 0;
  Int period;
  Int index_divisibility;
  std::vector<CounterexampleWitness> witnesses;
  std::vector<std::string> imported_lemmas;
  std::vector<std::string> trace;
};

// The largest power of two proven to divide every splitting degree: the
// period always does; 4 does once every quadratic subextension class leads
// to a contradiction.
inline Int index_divisibility_from(const Int& per, const std::vector<CounterexampleWitness>& witnesses) {
  if (per == 1) return 1;
  if (per != 2) return per;
  std::array<bool, 4> covered{};
  for (const auto& w : witnesses)
    if (w.contradiction()) covered[static_cast<unsigned>(w.square_class)] = true;
  const bool all = covered[static_cast<unsigned>(SquareClass::Eps)] && covered[static_cast<unsigned>(SquareClass::Pi)] &&
                   covered[static_cast<unsigned>(SquareClass::EpsPi)];
  return all ? Int(4) : per;
}

namespace detail {

inline ResidueField residue_field_of_size(u64 p, u64 q) {
  if (p == 2 || !is_prime(p)) throw Error(ErrorCode::BadResidue, "residue characteristic must be an odd prime");
  std::size_t r = 0;
  u64 t = q;
  while (t > 1 && t % p == 0) {
    t /= p;
    ++r;
  }
  if (t != 1 || r == 0) throw Error(ErrorCode::BadResidue, "q must be a power of p");
  if (q % 4 != 1) throw Error(ErrorCode::BadResidue, "q must be 1 mod 4 so that K contains sqrt(-1)");
  return ResidueField::canonical(p, r);
}

}  // namespace detail

// Replays the per = 2, 4 | ind argument for T = T_1 x T_2 x T_3. Entry j of
// `nontrivial` chooses whether xi_j is the nonzero class or zero.
inline CounterexampleReport verify_counterexample_local(u64 p, u64 q, std::array<bool, 3> nontrivial = {true, true, true}) {
  const ResidueField field = detail::residue_field_of_size(p, q);
  CounterexampleReport rep;
  rep.p = p;
  rep.q = q;
  rep.imported_lemmas.push_back("coprime splitting: if extensions of coprime degrees both split a class, the class is trivial");
  rep.imported_lemmas.push_back("H^1(K, T) = (M_Gamma)_Tors and restriction is the transfer on coinvariants");

  const GroupPtr gamma = make_group(FiniteGroup::cyclic(4));
  const GModule m = GModule::from_generators(gamma, 2, {{1, IntMatrix{{0, -1}, {1, 0}}}});
  const Subgroup delta = Subgroup::generated_by(gamma, {2});
  const Subgroup trivial = Subgroup::trivial(gamma);

  const std::array<SquareClass, 3> classes{SquareClass::Eps, SquareClass::Pi, SquareClass::EpsPi};
  const FieldElement eps = field.first_non_square();
  const FinAbGroup h1 = h1_local(m);
  if (h1.invariant_factors() != IntVector{2}) throw Error(ErrorCode::InvalidArgument, "H^1(K, T_j) is not Z/2");
  std::vector<GModule> parts;
  std::vector<AbElement> xis;
  for (std::size_t j = 0; j < 3; ++j) {
    const AbElement xi = nontrivial[j] ? h1.generator(0) : h1.zero();
    const LocalTorusClass cj(m, xi);
    xis.push_back(xi);
    parts.push_back(m);

    CounterexampleWitness w;
    w.square_class = classes[j];
    w.xi_j = xi.coords;
    w.sample_descriptor.wild_exponent = 0;
    if (classes[j] == SquareClass::Eps) {
      w.sample_descriptor.f = 2;
      w.sample_descriptor.e = 1;
      w.sample_descriptor.alpha = residue_extension(field, 2).one();
    } else {
      w.sample_descriptor.f = 1;
      w.sample_descriptor.e = 2;
      w.sample_descriptor.alpha = classes[j] == SquareClass::Pi ? field.one() : eps;
    }
    w.descriptor_lands_here = quadratic_subextension(w.sample_descriptor, field).square_class == classes[j];

    // xi'_j = Res_{K'_j/K}(xi_j) lives in (M_Delta)_Tors.
    const AbElement xi_prime = restriction(cj, delta);
    w.restriction_nontrivial = !xi_prime.is_zero();
    const GModule& mod = cj.module();
    const FinAbGroup h1_delta = torsion_subgroup(coinvariants(mod, delta)).group;
    const FinAbGroup h1_trivial = torsion_subgroup(coinvariants(mod, trivial)).group;
    w.split_by_quadratic = transfer(mod, delta, trivial, h1_delta, xi_prime, h1_trivial).is_zero();
    w.coprime_rule_applies = true;

    rep.trace.push_back(std::string("class ") + std::string(square_class_name(classes[j])) + ": xi_j = " +
                        (xi.is_zero() ? "0" : "nonzero") + ", restriction to K'_j " +
                        (w.restriction_nontrivial ? "nonzero" : "zero") + ", F_j/K'_j splits it: " +
                        (w.split_by_quadratic ? "yes" : "no") + ", contradiction: " +
                        (w.contradiction() ? "yes" : "no"));
    rep.witnesses.push_back(std::move(w));
  }

  // xi = (xi_1, xi_2, xi_3) in the product torus.
  const GModule product = GModule::direct_sum(parts);
  const FinAbGroup h1_prod = h1_local(product);
  IntVector lifted;
  for (std::size_t j = 0; j < 3; ++j) {
    const IntVector part = h1.lift(xis[j]);
    lifted.insert(lifted.end(), part.begin(), part.end());
  }
  const LocalTorusClass xi(product, h1_prod.project(lifted));
  rep.period = period(xi);
  rep.trace.insert(rep.trace.begin(), "H^1(K, T) = " + std::to_string(h1_prod.torsion_count()) +
                                          " copies of Z/2; per(xi) = " + to_string(rep.period));
  rep.trace.push_back("an odd splitting degree is impossible since per(xi) divides ind(xi)");
  rep.index_divisibility = index_divisibility_from(rep.period, rep.witnesses);
  rep.trace.push_back("every splitting degree is divisible by " + to_string(rep.index_divisibility));
  return rep;
}

}  // namespace tatekit
