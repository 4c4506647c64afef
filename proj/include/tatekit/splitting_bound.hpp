#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tatekit/global_sha.hpp"

namespace tatekit {

inline constexpr std::size_t kMaxEnumerationOrder = 64;
inline constexpr std::size_t kMaxTowerGroupOrder = 4096;

// Every subgroup, smallest first within each BFS layer (deterministic).
inline std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g) {
  if (g->order() > kMaxEnumerationOrder)
    throw Error(ErrorCode::TooLarge, "subgroup enumeration is limited to order " + std::to_string(kMaxEnumerationOrder));
  std::vector<Subgroup> found{Subgroup::trivial(g)};
  std::set<std::vector<std::size_t>> seen{found.front().members()};
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Subgroup cur = found[i];
    for (std::size_t x = 0; x < g->order(); ++x) {
      if (cur.contains(x)) continue;
      std::vector<std::size_t> gens = cur.generators();
      gens.push_back(x);
      Subgroup next = Subgroup::generated_by(g, gens);
      if (seen.insert(next.members()).second) found.push_back(std::move(next));
    }
  }
  return found;
}

inline unsigned floor_log2(std::size_t v) {
  unsigned k = 0;
  while (v >>= 1) ++k;
  return k;
}

struct SubgroupBound {
  std::size_t count = 0;
  unsigned lambda = 0;
  Int bound;  // theta^lambda
  bool holds = false;
};

inline SubgroupBound subgroup_bound_check(const GroupPtr& g) {
  SubgroupBound b;
  b.count = enumerate_subgroups(g).size();
  b.lambda = floor_log2(g->order());
  b.bound = boost::multiprecision::pow(Int(g->order()), b.lambda);
  b.holds = Int(b.count) <= b.bound;
  return b;
}

struct DegreeExponents {
  unsigned lambda = 0;
  Int rho;  // (theta - 1) theta^lambda + 1
  Int d;    // rho + lambda + 1
};

inline DegreeExponents degree_exponents(std::size_t theta) {
  if (theta == 0) throw Error(ErrorCode::InvalidArgument, "group order must be positive");
  DegreeExponents e;
  e.lambda = floor_log2(theta);
  e.rho = Int(theta - 1) * boost::multiprecision::pow(Int(theta), e.lambda) + 1;
  e.d = e.rho + e.lambda + 1;
  return e;
}

struct Domination {
  std::size_t place;     // index into data.places
  std::size_t selected;  // index of the dominating selected place
  std::size_t conjugator;  // g with D_place inside g D_selected g^-1
};

struct PlaceSelection {
  std::vector<std::size_t> selected;  // indices into data.places
  std::vector<Domination> certificate;
  Int bound;                          // theta^lambda
};

namespace detail {

// Some g with a inside g b g^-1.
inline std::optional<std::size_t> conjugate_into(const Subgroup& a, const Subgroup& b) {
  const FiniteGroup& g = *a.parent();
  if (a.order() > b.order() || b.order() % a.order() != 0) return std::nullopt;
  for (std::size_t x = 0; x < g.order(); ++x)
    if (a.is_subgroup_of(b.conjugate(x))) return x;
  return std::nullopt;
}

}  // namespace detail

// One place per conjugacy class of maximal decomposition groups.
inline PlaceSelection select_places_property56(const GlobalData& data) {
  data.validate();
  if (data.places.empty()) throw Error(ErrorCode::InvalidArgument, "no places given");
  const auto& pl = data.places;
  PlaceSelection out;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const Subgroup& d = pl[i].decomposition;
    bool maximal = true;
    for (std::size_t j = 0; j < pl.size() && maximal; ++j)
      if (pl[j].decomposition.order() > d.order() && detail::conjugate_into(d, pl[j].decomposition)) maximal = false;
    if (!maximal) continue;
    bool fresh = true;
    for (std::size_t s : out.selected)
      if (pl[s].decomposition.order() == d.order() && detail::conjugate_into(d, pl[s].decomposition)) fresh = false;
    if (fresh) out.selected.push_back(i);
  }
  for (std::size_t i = 0; i < pl.size(); ++i) {
    bool found = false;
    for (std::size_t s : out.selected) {
      if (auto g = detail::conjugate_into(pl[i].decomposition, pl[s].decomposition)) {
        out.certificate.push_back({i, s, *g});
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::NoDominator, "place " + pl[i].label + " has no dominating selected place");
  }
  out.bound = boost::multiprecision::pow(Int(data.theta->order()), floor_log2(data.theta->order()));
  if (Int(out.selected.size()) > out.bound) throw Error(ErrorCode::BoundViolated, "more selected places than theta^lambda");
  return out;
}

// Decomposition group of a base place inside Theta x Z/N (N = n^(r-1)):
// generated by kernel x 0 and (frobenius, 1). Its image in Theta must be the
// place's decomposition group, and it surjects onto Z/N by construction.
struct TowerPlace {
  Subgroup kernel;
  std::size_t frobenius = 0;
};

struct TowerConfig {
  GlobalData data;
  std::size_t n = 1;
  std::optional<std::size_t> r;        // tower length; rho + 1 when absent
  std::vector<TowerPlace> tower_places;  // one per data place; defaults to D_v x Z/N
  std::size_t max_group_order = kMaxTowerGroupOrder;
};

// A power n^e kept as a pair.
struct PowerOf {
  std::size_t base = 1;
  Int exponent;
};

struct ClassAtLevel {
  std::string name;
  IntVector invariants;  // of the group holding the class
  AbElement value;
};

struct SimulationReport {
  std::size_t r = 0;
  std::size_t chosen_s = 0;
  std::vector<std::size_t> cardinalities;  // #S'_{FL_s}, s = 1..r
  std::size_t lower_bound = 0;             // #S_{L_1} + 1
  std::size_t upper_bound = 0;             // theta #S_{L_1} + 1
  std::vector<ClassAtLevel> alpha_trace;   // alpha_1, alpha_{s-1}, alpha_s
  bool isomorphism_certified = false;
  bool transitivity_holds = false;         // T_{1,s} = T_{s-1,s} T_{1,s-1}
  bool images_coincide = false;
  bool transfer_is_multiplication = false;
  bool transfer_vanished = false;
  PowerOf splitting_degree;
  PowerOf bound;
  GModule level_module;   // M[S_{FL_s}]_0 over Theta x Z/n^(s-1), index x m + k
  IntVector alpha_1_lift;  // a lattice vector of alpha_1
  std::vector<std::string> trace;
};

namespace detail {

inline std::size_t pow_mod(std::size_t base, std::size_t exp, std::size_t mod) {
  std::size_t r = 1 % mod, b = base % mod;
  for (; exp; exp >>= 1) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
  }
  return r;
}

inline bool checked_pow(std::size_t base, std::size_t exp, std::size_t limit, std::size_t& out) {
  out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > limit / base) return false;
    out *= base;
  }
  return out <= limit;
}

inline std::vector<TowerPlace> tower_places(const TowerConfig& cfg) {
  const auto& places = cfg.data.places;
  if (cfg.tower_places.empty()) {
    std::vector<TowerPlace> out;
    for (const auto& p : places) out.push_back({p.decomposition, cfg.data.theta->identity()});
    return out;
  }
  if (cfg.tower_places.size() != places.size())
    throw Error(ErrorCode::InvalidConfig, "need one tower decomposition per place");
  const FiniteGroup& g = *cfg.data.theta;
  for (std::size_t i = 0; i < places.size(); ++i) {
    const TowerPlace& t = cfg.tower_places[i];
    if (!same_group(t.kernel.parent(), cfg.data.theta) || t.frobenius >= g.order())
      throw Error(ErrorCode::InvalidConfig, "tower decomposition of " + places[i].label + " is not in theta");
    for (std::size_t k : t.kernel.members())
      if (!t.kernel.contains(g.conjugate(t.frobenius, k)))
        throw Error(ErrorCode::InvalidConfig, "frobenius of " + places[i].label + " does not normalize its kernel");
    std::vector<std::size_t> gens = t.kernel.generators();
    gens.push_back(t.frobenius);
    if (!(Subgroup::generated_by(cfg.data.theta, gens) == places[i].decomposition))
      throw Error(ErrorCode::InvalidConfig, "tower decomposition of " + places[i].label + " does not project onto its decomposition group");
  }
  return cfg.tower_places;
}

// Points of FL_s above a base place: theta / |<kernel, frobenius^(n^(s-1))>|.
inline std::size_t fiber_size(const GroupPtr& theta, const TowerPlace& t, std::size_t n, std::size_t s) {
  const FiniteGroup& g = *theta;
  const std::size_t o = g.element_order(t.frobenius);
  std::vector<std::size_t> gens = t.kernel.generators();
  gens.push_back(g.power(t.frobenius, pow_mod(n, s - 1, o)));
  return g.order() / g.closure(gens).size();
}

}  // namespace detail

// Replays the tower argument over abstract data: alpha is an element of the
// sha1_S kernel of cfg.data with n alpha = 0.
inline SimulationReport simulate_splitting_tower(const TowerConfig& cfg, const AbElement& alpha) {
  const GlobalData& data = cfg.data;
  data.validate();
  if (cfg.n == 0) throw Error(ErrorCode::InvalidConfig, "n must be positive");
  const GroupPtr& theta = data.theta;
  const FiniteGroup& tg = *theta;
  const std::size_t vt = tg.order();
  const std::size_t n = cfg.n;
  const auto places = detail::tower_places(cfg);
  const std::size_t base = data.places.size();

  SimulationReport rep;
  const DegreeExponents ex = degree_exponents(vt);
  if (cfg.r) {
    rep.r = *cfg.r;
  } else {
    if (ex.rho > Int(1000000)) throw Error(ErrorCode::TooLarge, "tower length rho + 1 is too long to scan");
    rep.r = static_cast<std::size_t>(ex.rho) + 1;
  }
  rep.bound = {n, ex.rho};
  if (rep.r < 2 || rep.r <= (vt - 1) * base + 1)
    throw Error(ErrorCode::InvalidConfig, "tower length must exceed (theta - 1) #S + 1");
  rep.trace.push_back("degree_exponents: theta = " + std::to_string(vt) + ", lambda = " + std::to_string(ex.lambda) +
                      ", rho = " + ex.rho.str() + ", r = " + std::to_string(rep.r));

  KernelResult sha = sha1_S(data);
  if (!sha.kernel.contains(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha is not an element of the sha1_S group");
  if (!sha.kernel.scale(Int(n), alpha).is_zero())
    throw Error(ErrorCode::InvalidArgument, "n alpha must vanish");

  // Cardinalities of S'_{FL_s}: fibers over the base places plus the fixed place.
  rep.lower_bound = base + 1;
  rep.upper_bound = vt * base + 1;
  for (std::size_t s = 1; s <= rep.r; ++s) {
    std::size_t c = 1;
    for (const auto& t : places) c += detail::fiber_size(theta, t, n, s);
    rep.cardinalities.push_back(c);
    if (c < rep.lower_bound || c > rep.upper_bound || (s > 1 && c < rep.cardinalities[s - 2]))
      throw Error(ErrorCode::NoPigeonhole, "cardinality sequence leaves its bounds");
  }
  for (std::size_t s = 2; s <= rep.r && rep.chosen_s == 0; ++s)
    if (rep.cardinalities[s - 1] == rep.cardinalities[s - 2]) rep.chosen_s = s;
  if (rep.chosen_s == 0) throw Error(ErrorCode::NoPigeonhole, "no level with equal consecutive cardinalities");
  const std::size_t s = rep.chosen_s;
  rep.splitting_degree = {n, Int(s - 1)};
  rep.trace.push_back("pigeonhole: #S'_{FL_" + std::to_string(s - 1) + "} = #S'_{FL_" + std::to_string(s) +
                      "} = " + std::to_string(rep.cardinalities[s - 1]) + ", s = " + std::to_string(s));

  // Gamma_1 = Theta x Z/m with m = n^(s-1); element (x, k) has index x m + k.
  std::size_t m = 1;
  if (!detail::checked_pow(n, s - 1, cfg.max_group_order, m) || vt * m > cfg.max_group_order)
    throw Error(ErrorCode::TooLarge, "Theta x Z/n^(s-1) exceeds the group size limit");
  GroupPtr g1 = make_group(FiniteGroup::direct_product(tg, FiniteGroup::cyclic(m)));
  auto pair = [m](std::size_t x, std::size_t k) { return x * m + k % m; };
  std::vector<std::size_t> to_theta(g1->order());
  for (std::size_t e = 0; e < g1->order(); ++e) to_theta[e] = e / m;
  GModule m1 = data.module.pullback(g1, to_theta);
  const Subgroup cyclic_part = Subgroup::generated_by(g1, {pair(tg.identity(), 1)});

  std::vector<PlaceDatum> level;
  for (std::size_t i = 0; i < base; ++i) {
    std::vector<std::size_t> gens;
    for (std::size_t k : places[i].kernel.generators()) gens.push_back(pair(k, 0));
    gens.push_back(pair(places[i].frobenius, 1));
    level.push_back({data.places[i].label, Subgroup::generated_by(g1, gens)});
  }
  level.push_back({"w", cyclic_part});

  PushforwardResult iso = lemma53_pushforward(m1, cyclic_part, level);
  rep.isomorphism_certified = iso.hypothesis_holds && iso.isomorphism();
  if (!rep.isomorphism_certified) throw Error(ErrorCode::HypothesisFail, "pushforward to the base level is not an isomorphism");
  rep.trace.push_back("lemma53_pushforward: beta and s_! certified inverse on (M[S_{FL_s}]_0)_{Gamma_1}");

  // alpha_S in the zero-part coordinates of S'_F = S_F plus the orbit of w.
  GlobalData primed = data;
  primed.places.push_back({"w", Subgroup::trivial(theta)});
  const PlaceModule pm = build_place_module(data);
  const PlaceModule pp = build_place_module(primed);
  const std::size_t rk = data.module.rank();
  IntVector full(pp.points() * rk);
  if (pm.points() > 0) {
    IntVector a = pm.inclusion.apply(sha.domain.lift(sha.include(alpha)));
    std::copy(a.begin(), a.end(), full.begin());
  }
  // Points of S'_F against the base-level points of the pushforward.
  const PlaceModule& low = iso.lower;
  IntVector lowered(low.points() * rk);
  for (std::size_t w = 0; w < pp.points(); ++w) {
    const Subgroup& dv = primed.places[pp.point_place[w]].decomposition;
    std::optional<std::size_t> hit;
    for (std::size_t u = 0; u < low.points() && !hit; ++u)
      if (low.point_place[u] == pp.point_place[w] &&
          dv.contains(tg.mul(tg.inverse(pp.point_rep[w]), to_theta[low.point_rep[u]])))
        hit = u;
    if (!hit) throw Error(ErrorCode::InvalidConfig, "place sets at the base level do not match");
    for (std::size_t k = 0; k < rk; ++k) lowered[*hit * rk + k] = full[w * rk + k];
  }
  const IntVector alpha_low = low.to_zero_coords(lowered);
  const IntVector alpha_up = iso.section.apply(alpha_low);

  const GModule& a = iso.upper.zero_part;
  const Subgroup gamma1 = Subgroup::whole(g1);
  std::vector<std::size_t> prev_gens;
  for (std::size_t x : tg.generators()) prev_gens.push_back(pair(x, 0));
  const Subgroup gamma_last = Subgroup::generated_by(g1, prev_gens);
  prev_gens.push_back(pair(tg.identity(), m / n));
  const Subgroup gamma_prev = Subgroup::generated_by(g1, prev_gens);

  const FinAbGroup t1 = torsion_subgroup(coinvariants(a, gamma1)).group;
  const FinAbGroup tp = torsion_subgroup(coinvariants(a, gamma_prev)).group;
  const FinAbGroup ts = torsion_subgroup(coinvariants(a, gamma_last)).group;
  const AbElement alpha1 = t1.project(alpha_up);
  rep.level_module = a;
  rep.alpha_1_lift = alpha_up;
  if (!t1.scale(Int(n), alpha1).is_zero()) throw Error(ErrorCode::InvalidArgument, "n alpha_1 does not vanish");

  const IntMatrix t_1p = transfer_matrix(a, gamma1, gamma_prev);
  const IntMatrix t_ps = transfer_matrix(a, gamma_prev, gamma_last);
  const IntMatrix t_1s = transfer_matrix(a, gamma1, gamma_last);

  rep.transitivity_holds = true;
  for (const auto& x : t1.generators()) {
    const IntVector v = t1.lift(x);
    if (ts.project(t_1s.apply(v)) != ts.project(t_ps.apply(t_1p.apply(v)))) rep.transitivity_holds = false;
  }
  std::set<IntMatrix> img_prev, img_last;
  for (std::size_t x : gamma_prev.members()) img_prev.insert(a.action(x));
  for (std::size_t x : gamma_last.members()) img_last.insert(a.action(x));
  rep.images_coincide = img_prev == img_last;
  rep.transfer_is_multiplication = true;
  for (const auto& x : tp.generators())
    if (tp.project(t_ps.apply(tp.lift(x))) != tp.scale(Int(n), x)) rep.transfer_is_multiplication = false;

  const AbElement alpha_prev = transfer(a, gamma1, gamma_prev, t1, alpha1, tp);
  const AbElement alpha_last = transfer(a, gamma1, gamma_last, t1, alpha1, ts);
  rep.alpha_trace = {{"alpha_1", t1.invariant_factors(), alpha1},
                     {"alpha_s-1", tp.invariant_factors(), alpha_prev},
                     {"alpha_s", ts.invariant_factors(), alpha_last}};
  rep.transfer_vanished = alpha_last.is_zero();
  rep.trace.push_back("transfer: T_{1,s-1}, T_{s-1,s}, T_{1,s} on (M[S_{FL_s}]_0)_{Tors}; T_{s-1,s} = n on the identified groups");
  if (!rep.transfer_vanished) throw Error(ErrorCode::TransferNonzero, "T_{1,s}(alpha_1) is nonzero");
  if (Int(s - 1) > ex.rho) throw Error(ErrorCode::BoundViolated, "splitting degree exceeds n^rho");
  rep.trace.push_back("splitting degree n^" + std::to_string(s - 1) + " <= n^" + ex.rho.str());
  return rep;
}

}  // namespace tatekit
