#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tatekit/gmodule.hpp"

namespace tatekit {

// A place v of K with a chosen decomposition group Theta_v of a place of F
// above it.
struct PlaceDatum {
  std::string label;
  Subgroup decomposition;
};

struct GlobalData {
  GroupPtr theta;
  GModule module;
  std::vector<PlaceDatum> places;

  void validate() const {
    if (!same_group(module.group(), theta)) throw Error(ErrorCode::SubgroupMismatch, "module is not over theta");
    for (const auto& p : places)
      if (!same_group(p.decomposition.parent(), theta))
        throw Error(ErrorCode::SubgroupMismatch, "decomposition group of " + p.label + " is not a subgroup of theta");
  }

  std::size_t place_index(const std::string& label) const {
    for (std::size_t i = 0; i < places.size(); ++i)
      if (places[i].label == label) return i;
    throw Error(ErrorCode::UnknownPlace, "no place labelled '" + label + "'");
  }
};

// M[S_F] for S_F the disjoint union of the coset spaces Theta / Theta_v, and
// its degree-zero part M[S_F]_0 with basis e_{k,w} - e_{k,w_0} (w != w_0).
struct PlaceModule {
  GModule full;
  GModule zero_part;
  IntMatrix inclusion;  // zero-part coordinates -> full coordinates
  std::vector<std::size_t> point_place;
  std::vector<std::size_t> point_rep;  // g with the point equal to g Theta_v
  std::size_t rank = 0;                // rank of M

  std::size_t points() const { return point_place.size(); }

  // Coordinates of a degree-zero vector of M[S_F] in the zero-part basis.
  IntVector to_zero_coords(std::span<const Int> x) const {
    IntVector out;
    for (std::size_t k = 0; k < rank; ++k) {
      Int total = 0;
      for (std::size_t w = 0; w < points(); ++w) total += x[w * rank + k];
      if (total != 0) throw Error(ErrorCode::NotInSubgroup, "vector does not have degree zero");
    }
    for (std::size_t i = rank; i < x.size(); ++i) out.push_back(x[i]);
    return out;
  }
};

namespace detail {

// Rows of the full coordinates kept by the zero-part chart (drop block w_0).
inline IntMatrix drop_first_block(std::size_t points, std::size_t rank) {
  const std::size_t n = points == 0 ? 0 : (points - 1) * rank;
  IntMatrix d(n, points * rank);
  for (std::size_t i = 0; i < n; ++i) d(i, i + rank) = 1;
  return d;
}

}  // namespace detail

inline PlaceModule build_place_module(const GlobalData& data) {
  data.validate();
  const FiniteGroup& g = *data.theta;
  const std::size_t r = data.module.rank();
  PlaceModule pm;
  pm.rank = r;
  std::vector<std::vector<std::size_t>> coset_index;  // per place: element -> local point index
  std::vector<std::size_t> first;
  for (std::size_t v = 0; v < data.places.size(); ++v) {
    const Subgroup& d = data.places[v].decomposition;
    first.push_back(pm.points());
    std::vector<std::size_t> idx(g.order());
    const auto reps = d.left_transversal();
    for (std::size_t k = 0; k < reps.size(); ++k) {
      for (std::size_t x : d.left_coset(reps[k])) idx[x] = k;
      pm.point_place.push_back(v);
      pm.point_rep.push_back(reps[k]);
    }
    coset_index.push_back(std::move(idx));
  }
  const std::size_t n = pm.points();

  std::vector<IntMatrix> full_action;
  for (std::size_t h = 0; h < g.order(); ++h) {
    IntMatrix a(n * r, n * r);
    const IntMatrix& mh = data.module.action(h);
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t v = pm.point_place[w];
      const std::size_t dest = first[v] + coset_index[v][g.mul(h, pm.point_rep[w])];
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) a(dest * r + i, w * r + j) = mh(i, j);
    }
    full_action.push_back(std::move(a));
  }
  pm.full = GModule(data.theta, n * r, full_action);

  const std::size_t z = n == 0 ? 0 : (n - 1) * r;
  pm.inclusion = IntMatrix(n * r, z);
  for (std::size_t c = 0; c < z; ++c) {
    pm.inclusion(c + r, c) = 1;
    pm.inclusion(c % r, c) = -1;
  }
  const IntMatrix chart = detail::drop_first_block(n, r);
  std::vector<IntMatrix> zero_action;
  for (const auto& a : full_action) {
    IntMatrix b = chart * a * pm.inclusion;
    // The degree-zero sublattice is stable.
    if (pm.inclusion * b != a * pm.inclusion) throw Error(ErrorCode::BadAction, "degree-zero part is not stable");
    zero_action.push_back(std::move(b));
  }
  pm.zero_part = GModule(data.theta, z, std::move(zero_action));
  return pm;
}

// A kernel computed inside `domain`; kernel.lift gives vectors of the
// domain's ambient lattice, so domain.project(kernel.lift(k)) is the inclusion.
struct KernelResult {
  FinAbGroup kernel;
  FinAbGroup domain;
  AbElement include(const AbElement& k) const { return domain.project(kernel.lift(k)); }
};

// ker[(M[S_F]_0)_{Theta,Tors} -> M[S_F]_{Theta,Tors}].
inline KernelResult sha1_S(const GlobalData& data) {
  const PlaceModule pm = build_place_module(data);
  FinAbGroup domain = torsion_subgroup(coinvariants(pm.zero_part)).group;
  if (pm.zero_part.rank() == 0) return {domain, domain};
  FinAbGroup target = torsion_subgroup(coinvariants(pm.full)).group;
  return {kernel_of_induced_map(domain, target, pm.inclusion), domain};
}

// The Shapiro map M[S_F] -> (+)_v M_{Theta_v}: m (g Theta_v) -> [g^-1 m].
inline IntMatrix shapiro_matrix(const GlobalData& data, const PlaceModule& pm) {
  const std::size_t r = pm.rank;
  IntMatrix s(r * data.places.size(), r * pm.points());
  for (std::size_t w = 0; w < pm.points(); ++w) {
    const std::size_t v = pm.point_place[w];
    const IntMatrix& a = data.module.action(data.theta->inverse(pm.point_rep[w]));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) s(v * r + i, w * r + j) = a(i, j);
  }
  return s;
}

// M_{Theta_v, Tors}: the local group at a place.
inline FinAbGroup local_group(const GlobalData& data, std::size_t place) {
  return torsion_subgroup(coinvariants(data.module, data.places.at(place).decomposition)).group;
}

// ker[(M[S_F]_0)_{Theta,Tors} -> (+)_v M_{Theta_v,Tors}].
inline KernelResult sha1_shapiro(const GlobalData& data) {
  const PlaceModule pm = build_place_module(data);
  FinAbGroup domain = torsion_subgroup(coinvariants(pm.zero_part)).group;
  if (pm.zero_part.rank() == 0) return {domain, domain};
  std::vector<FinAbGroup> locals;
  for (std::size_t v = 0; v < data.places.size(); ++v) locals.push_back(local_group(data, v));
  FinAbGroup target = direct_sum(locals);
  return {kernel_of_induced_map(domain, target, shapiro_matrix(data, pm) * pm.inclusion), domain};
}

// Pushforward comparison for a tower E/F/K: G = Gal(E/K), H = Gal(E/F)
// normal in G and acting trivially on M. Places carry decomposition groups
// in G; F-level points are g D_v H.
struct PushforwardResult {
  bool hypothesis_holds = true;
  std::optional<std::size_t> violating_element;  // an h in H fixing no point of S_E
  bool beta_section_identity = false;            // beta o s_! = id on (M[S_F]_0)_G
  bool section_beta_identity = false;            // s_! o beta = id on (M[S_E]_0)_G
  bool section_well_defined = false;             // s_! maps relations to relations
  FinAbGroup source;                             // (M[S_E]_0)_G
  FinAbGroup target;                             // (M[S_F]_0)_G
  IntMatrix beta;                                // zero-part coordinates E -> F
  IntMatrix section;                             // zero-part coordinates F -> E
  FinAbGroup beta_kernel;                        // inside source's ambient
  std::optional<IntVector> kernel_witness;       // a lattice vector with nonzero class killed by beta
  PlaceModule upper;                             // M[S_E]
  PlaceModule lower;                             // M[S_F]

  bool isomorphism() const { return beta_section_identity && section_beta_identity && section_well_defined; }

  // Throws HYPOTHESIS_FAIL naming the element and the kernel witness.
  void require_hypothesis() const {
    if (hypothesis_holds) return;
    std::string msg = "element " + std::to_string(*violating_element) + " fixes no point of S_E";
    if (kernel_witness) {
      msg += "; beta kills the nonzero class of [";
      for (std::size_t i = 0; i < kernel_witness->size(); ++i) msg += (i ? "," : "") + (*kernel_witness)[i].str();
      msg += "]";
    }
    throw Error(ErrorCode::HypothesisFail, msg);
  }
};

inline PushforwardResult lemma53_pushforward(const GModule& module, const Subgroup& inertia_like,
                                             const std::vector<PlaceDatum>& places) {
  const Subgroup& h = inertia_like;
  const GroupPtr& g = module.group();
  if (!same_group(h.parent(), g)) throw Error(ErrorCode::SubgroupMismatch, "Gal(E/F) is not a subgroup of Gal(E/K)");
  if (!h.is_normal()) throw Error(ErrorCode::InvalidArgument, "Gal(E/F) must be normal in Gal(E/K)");
  for (std::size_t x : h.members())
    if (!module.action(x).is_identity()) throw Error(ErrorCode::BadAction, "Gal(E/F) must act trivially on M");

  GlobalData upper{g, module, places};
  GlobalData lower{g, module, {}};
  for (const auto& p : places) lower.places.push_back({p.label, p.decomposition.product(h)});
  const PlaceModule pe = build_place_module(upper);
  const PlaceModule pf = build_place_module(lower);
  const std::size_t r = module.rank();
  const FiniteGroup& grp = *g;

  PushforwardResult out;
  for (std::size_t x : h.members()) {
    bool fixes = false;
    for (std::size_t w = 0; w < pe.points() && !fixes; ++w) {
      const std::size_t rep = pe.point_rep[w];
      fixes = places[pe.point_place[w]].decomposition.contains(grp.mul(grp.inverse(rep), grp.mul(x, rep)));
    }
    if (!fixes) {
      out.hypothesis_holds = false;
      out.violating_element = x;
      break;
    }
  }

  // Point maps: image of each E-point, and the section choosing the E-point
  // with the smallest representative above each F-point.
  std::vector<std::size_t> image(pe.points());
  std::vector<std::optional<std::size_t>> chosen(pf.points());
  for (std::size_t w = 0; w < pe.points(); ++w) {
    const std::size_t v = pe.point_place[w];
    const Subgroup& dh = lower.places[v].decomposition;
    for (std::size_t u = 0; u < pf.points(); ++u) {
      if (pf.point_place[u] != v) continue;
      if (dh.contains(grp.mul(grp.inverse(pf.point_rep[u]), pe.point_rep[w]))) {
        image[w] = u;
        if (!chosen[u] || pe.point_rep[*chosen[u]] > pe.point_rep[w]) chosen[u] = w;
      }
    }
  }
  IntMatrix beta_full(pf.points() * r, pe.points() * r), section_full(pe.points() * r, pf.points() * r);
  for (std::size_t w = 0; w < pe.points(); ++w)
    for (std::size_t k = 0; k < r; ++k) beta_full(image[w] * r + k, w * r + k) = 1;
  for (std::size_t u = 0; u < pf.points(); ++u)
    for (std::size_t k = 0; k < r; ++k) section_full(*chosen[u] * r + k, u * r + k) = 1;
  out.beta = detail::drop_first_block(pf.points(), r) * beta_full * pe.inclusion;
  out.section = detail::drop_first_block(pe.points(), r) * section_full * pf.inclusion;

  out.source = coinvariants(pe.zero_part);
  out.target = coinvariants(pf.zero_part);

  out.beta_section_identity = true;
  for (const auto& x : out.target.generators())
    if (out.target.project(out.beta.apply(out.section.apply(out.target.lift(x)))) != x) out.beta_section_identity = false;
  out.section_beta_identity = true;
  for (const auto& y : out.source.generators())
    if (out.source.project(out.section.apply(out.beta.apply(out.source.lift(y)))) != y) out.section_beta_identity = false;
  out.section_well_defined = true;
  const Presentation& tp = out.target.presentation();
  const IntMatrix rel_f = tp.solver ? tp.basis * tp.relations : tp.relations;
  for (std::size_t c = 0; c < rel_f.cols() && out.section_well_defined; ++c)
    if (!out.source.project(out.section.apply(rel_f.column(c))).is_zero()) out.section_well_defined = false;

  out.beta_kernel = out.source.ambient_rank() == 0 ? out.source
                                                   : kernel_of_induced_map(out.source, out.target, out.beta);
  for (const auto& k : out.beta_kernel.generators()) {
    IntVector v = out.beta_kernel.lift(k);
    if (!out.source.project(v).is_zero()) {
      out.kernel_witness = v;
      break;
    }
  }
  out.upper = pe;
  out.lower = pf;
  return out;
}

// Local classes xi_v in M_{Theta_v,Tors}; the family comes from a global
// class iff sum_v mu_v(xi_v) = 0 in M_{Theta,Tors}, mu_v the projection.
struct GlobalClassResult {
  bool exists = false;
  AbElement obstruction;                           // the sum in M_{Theta,Tors}
  std::map<std::string, AbElement> contributions;  // mu_v(xi_v)
  std::map<std::string, AbElement> local_classes;  // the global class, as its localizations

  const AbElement& localize(const std::string& label) const {
    auto it = local_classes.find(label);
    if (it == local_classes.end()) throw Error(ErrorCode::UnknownPlace, "no place labelled '" + label + "'");
    return it->second;
  }
};

inline GlobalClassResult tate_obstruction(const GlobalData& data, const std::map<std::string, AbElement>& local_classes) {
  data.validate();
  const FinAbGroup global = torsion_subgroup(coinvariants(data.module)).group;
  GlobalClassResult out;
  out.obstruction = global.zero();
  for (const auto& [label, cls] : local_classes) {
    const std::size_t v = data.place_index(label);
    const FinAbGroup local = local_group(data, v);
    if (!local.contains(cls)) throw Error(ErrorCode::InvalidArgument, "local class at " + label + " is not in its group");
    AbElement mu = global.project(local.lift(cls));
    out.contributions[label] = mu;
    out.obstruction = global.add(out.obstruction, mu);
  }
  out.exists = out.obstruction.is_zero();
  if (out.exists) {
    for (std::size_t v = 0; v < data.places.size(); ++v) out.local_classes[data.places[v].label] = local_group(data, v).zero();
    for (const auto& [label, cls] : local_classes) out.local_classes[label] = cls;
  }
  return out;
}

}  // namespace tatekit
