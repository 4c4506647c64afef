#pragma once

#include <random>
#include <string>
#include <vector>

#include "random_modules.hpp"
#include "tatekit/global_sha.hpp"

namespace fixtures {

inline GroupPtr klein() { return make_group(FiniteGroup::klein_four()); }

// The three order-2 subgroups of the Klein four group, as places a, b, c.
inline std::vector<PlaceDatum> klein_cyclic_places(const GroupPtr& g) {
  return {{"a", Subgroup::generated_by(g, {1})},
          {"b", Subgroup::generated_by(g, {2})},
          {"c", Subgroup::generated_by(g, {3})}};
}

// Augmentation kernel of Z[Theta] over the Klein four group with the cyclic places.
inline GlobalData klein_norm_one_torus() {
  GroupPtr g = klein();
  return {g, augmentation_module(Subgroup::trivial(g)), klein_cyclic_places(g)};
}

// Theta = Z/4 acting on Z[i], two places with full decomposition.
inline GlobalData gaussian_two_places() {
  GroupPtr g = z4();
  return {g, gaussian_module(g), {{"v", Subgroup::whole(g)}, {"u", Subgroup::whole(g)}}};
}

inline GlobalData random_global_data(std::mt19937& rng, const GroupPtr& g, std::size_t max_places, std::size_t max_rank) {
  GlobalData d{g, random_module(rng, g, max_rank), {}};
  std::uniform_int_distribution<std::size_t> count(0, max_places);
  const Subgroup whole = Subgroup::whole(g);
  for (std::size_t k = count(rng); k > 0; --k)
    d.places.push_back({"p" + std::to_string(d.places.size()), random_subgroup(rng, whole)});
  return d;
}

// G = Z/a x X with H = Z/a x 1 acting trivially on a module pulled back from X.
struct TowerInstance {
  GModule module;
  Subgroup h;
  std::vector<PlaceDatum> places;
};

inline TowerInstance random_tower(std::mt19937& rng, std::size_t a, const GroupPtr& x, std::size_t max_places) {
  GroupPtr g = make_group(FiniteGroup::direct_product(FiniteGroup::cyclic(a), *x));
  std::vector<std::size_t> phi(g->order());
  for (std::size_t e = 0; e < g->order(); ++e) phi[e] = e % x->order();
  GModule m = random_module(rng, x, 3).pullback(g, phi);
  std::vector<std::size_t> hgen;
  if (a > 1) hgen.push_back(x->order());
  Subgroup h = Subgroup::generated_by(g, hgen);
  std::vector<PlaceDatum> places;
  std::uniform_int_distribution<std::size_t> count(1, max_places);
  const Subgroup whole = Subgroup::whole(g);
  for (std::size_t k = count(rng); k > 0; --k)
    places.push_back({"p" + std::to_string(places.size()), random_subgroup(rng, whole)});
  return {m, h, places};
}

}  // namespace fixtures
