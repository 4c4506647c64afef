#include <gtest/gtest.h>

#include <random>

#include "global_fixtures.hpp"
#include "tatekit/splitting_bound.hpp"

using namespace tatekit;
using namespace fixtures;

namespace {

// Subgroups by testing every subset for closure.
std::size_t brute_force_subgroup_count(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::size_t count = 0;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    if (!(mask >> g.identity() & 1)) continue;
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !(mask >> g.mul(a, b) & 1)) closed = false;
    count += closed;
  }
  return count;
}

TowerConfig klein_tower(bool twisted) {
  TowerConfig cfg{klein_norm_one_torus(), 2, std::nullopt, {}};
  if (twisted) {
    const GroupPtr& g = cfg.data.theta;
    for (std::size_t x = 1; x <= 3; ++x) cfg.tower_places.push_back({Subgroup::trivial(g), x});
  }
  return cfg;
}

}  // namespace

TEST(Subgroups, SmallGoldenCounts) {
  EXPECT_EQ(brute_force_subgroup_count(FiniteGroup::cyclic(4)), 3u);
  EXPECT_EQ(brute_force_subgroup_count(FiniteGroup::klein_four()), 5u);
  EXPECT_EQ(enumerate_subgroups(z4()).size(), 3u);
  EXPECT_EQ(enumerate_subgroups(klein()).size(), 5u);
  EXPECT_EQ(enumerate_subgroups(make_group(FiniteGroup::cyclic(1))).size(), 1u);
}

TEST(Subgroups, MatchBruteForceAndBound) {
  for (const auto& g : small_groups()) {
    if (g->order() > 16) continue;
    SubgroupBound b = subgroup_bound_check(g);
    EXPECT_EQ(b.count, brute_force_subgroup_count(*g));
    EXPECT_TRUE(b.holds);
  }
  SubgroupBound s3 = subgroup_bound_check(make_group(FiniteGroup::symmetric(3)));
  EXPECT_EQ(s3.count, 6u);
  EXPECT_EQ(s3.lambda, 2u);
  EXPECT_EQ(s3.bound, 36);
}

TEST(Subgroups, RefusesLargeGroups) {
  EXPECT_THROW(enumerate_subgroups(make_group(FiniteGroup::cyclic(65))), Error);
}

TEST(Exponents, Values) {
  DegreeExponents four = degree_exponents(4);
  EXPECT_EQ(four.lambda, 2u);
  EXPECT_EQ(four.rho, 49);
  EXPECT_EQ(four.d, 52);
  DegreeExponents one = degree_exponents(1);
  EXPECT_EQ(one.lambda, 0u);
  EXPECT_EQ(one.rho, 1);
  EXPECT_EQ(one.d, 2);
  DegreeExponents two = degree_exponents(2);
  EXPECT_EQ(two.rho, 3);
  EXPECT_EQ(two.d, 5);
  for (std::size_t t = 1; t < 300; ++t) {
    DegreeExponents e = degree_exponents(t);
    EXPECT_EQ(e.d - e.rho, e.lambda + 1);
  }
}

TEST(PlaceSelection, Examples) {
  auto g4 = z4();
  GlobalData full{g4, gaussian_module(g4), {{"a", Subgroup::whole(g4)}, {"b", Subgroup::whole(g4)}}};
  EXPECT_EQ(select_places_property56(full).selected.size(), 1u);
  EXPECT_EQ(select_places_property56(klein_norm_one_torus()).selected.size(), 3u);
  GlobalData mixed{g4, gaussian_module(g4), {{"a", Subgroup::generated_by(g4, {2})}, {"b", Subgroup::whole(g4)}}};
  PlaceSelection sel = select_places_property56(mixed);
  ASSERT_EQ(sel.selected.size(), 1u);
  EXPECT_EQ(sel.selected[0], 1u);
  EXPECT_EQ(sel.certificate.size(), 2u);
}

TEST(PlaceSelection, ConjugateMaximalsCollapse) {
  auto s3 = make_group(FiniteGroup::symmetric(3));
  std::vector<PlaceDatum> places;
  for (const auto& h : enumerate_subgroups(s3))
    if (h.order() == 2) places.push_back({"t" + std::to_string(places.size()), h});
  GlobalData d{s3, GModule::trivial(s3, 1), places};
  EXPECT_EQ(select_places_property56(d).selected.size(), 1u);
}

TEST(Tower, KleinOrderTwoClassSplits) {
  TowerConfig cfg = klein_tower(true);
  KernelResult sha = sha1_S(cfg.data);
  ASSERT_EQ(sha.kernel.invariant_factors(), (IntVector{2}));
  SimulationReport r = simulate_splitting_tower(cfg, sha.kernel.generator(0));
  EXPECT_EQ(r.r, 50u);
  EXPECT_EQ(r.chosen_s, 3u);
  EXPECT_EQ(r.cardinalities[0], 7u);
  EXPECT_EQ(r.cardinalities[1], 13u);
  EXPECT_EQ(r.cardinalities[2], 13u);
  EXPECT_TRUE(r.isomorphism_certified);
  EXPECT_TRUE(r.transitivity_holds);
  EXPECT_TRUE(r.images_coincide);
  EXPECT_TRUE(r.transfer_is_multiplication);
  EXPECT_TRUE(r.transfer_vanished);
  EXPECT_FALSE(r.alpha_trace[0].value.is_zero());
  EXPECT_EQ(r.splitting_degree.exponent, 2);
  EXPECT_EQ(r.bound.exponent, 49);

  // Direct check: sum of the Z/4 translates of alpha_1 lies in I_Theta A.
  const GModule& a = r.level_module;
  const std::size_t m = 4;
  IntMatrix t(a.rank(), a.rank());
  for (std::size_t k = 0; k < m; ++k) t += a.action(k);
  IntMatrix rel(a.rank(), 0);
  for (std::size_t x = 0; x < 4; ++x) rel = hstack(rel, a.action(x * m) - IntMatrix::identity(a.rank()));
  EXPECT_TRUE(cokernel(rel).project(t.apply(r.alpha_1_lift)).is_zero());
  // and alpha_1 itself does not.
  IntMatrix rel1(a.rank(), 0);
  for (std::size_t x = 0; x < a.group()->order(); ++x) rel1 = hstack(rel1, a.action(x) - IntMatrix::identity(a.rank()));
  EXPECT_FALSE(cokernel(rel1).project(r.alpha_1_lift).is_zero());
}

TEST(Tower, UntwistedPlacesStopImmediately) {
  TowerConfig cfg = klein_tower(false);
  KernelResult sha = sha1_S(cfg.data);
  SimulationReport r = simulate_splitting_tower(cfg, sha.kernel.generator(0));
  EXPECT_EQ(r.chosen_s, 2u);
  EXPECT_TRUE(r.transfer_vanished);
}

TEST(Tower, DegenerateN) {
  TowerConfig cfg = klein_tower(true);
  cfg.n = 1;
  SimulationReport r = simulate_splitting_tower(cfg, sha1_S(cfg.data).kernel.zero());
  EXPECT_EQ(r.chosen_s, 2u);
  EXPECT_EQ(r.splitting_degree.exponent, 1);
  EXPECT_TRUE(r.transfer_vanished);
}

TEST(Tower, CyclicWithTrivialSha) {
  TowerConfig cfg{gaussian_two_places(), 2, std::nullopt, {}};
  SimulationReport r = simulate_splitting_tower(cfg, sha1_S(cfg.data).kernel.zero());
  EXPECT_GE(r.chosen_s, 2u);
  EXPECT_TRUE(r.transfer_vanished);
}

TEST(Tower, RejectsBadInput) {
  TowerConfig cfg = klein_tower(true);
  KernelResult sha = sha1_S(cfg.data);
  cfg.n = 3;
  EXPECT_THROW(simulate_splitting_tower(cfg, sha.kernel.generator(0)), Error);
  cfg.n = 2;
  cfg.r = 5;
  EXPECT_THROW(simulate_splitting_tower(cfg, sha.kernel.generator(0)), Error);
  cfg.r.reset();
  cfg.tower_places[0].frobenius = 2;
  EXPECT_THROW(simulate_splitting_tower(cfg, sha.kernel.generator(0)), Error);
}

TEST(Tower, RandomConfigurationsNeverContradict) {
  std::mt19937 rng(17);
  std::vector<GroupPtr> groups = {make_group(FiniteGroup::cyclic(2)), z4(), klein(), make_group(FiniteGroup::cyclic(3))};
  int ran = 0;
  for (int trial = 0; trial < 25; ++trial) {
    GroupPtr g = groups[rng() % groups.size()];
    GlobalData d = random_global_data(rng, g, 3, 3);
    if (d.places.empty()) continue;
    TowerConfig cfg{d, 2 + rng() % 2, std::nullopt, {}};
    const std::size_t needed = (g->order() - 1) * d.places.size() + 2;
    if (degree_exponents(g->order()).rho + 1 < needed) cfg.r = needed;
    for (const auto& p : d.places) {
      const auto& mem = p.decomposition.members();
      std::size_t frob = mem[rng() % mem.size()];
      // a cyclic decomposition group may carry a twisted frobenius
      Subgroup k = Subgroup::generated_by(g, {frob}) == p.decomposition ? Subgroup::trivial(g) : p.decomposition;
      cfg.tower_places.push_back({k, k.order() == 1 ? frob : g->identity()});
    }
    KernelResult sha = sha1_S(d);
    AbElement alpha = sha.kernel.zero();
    for (const auto& gen : sha.kernel.generators()) {
      Int o = *element_order(gen, sha.kernel);
      if (o % cfg.n == 0) alpha = sha.kernel.add(alpha, sha.kernel.scale(o / cfg.n, gen));
    }
    try {
      SimulationReport r = simulate_splitting_tower(cfg, alpha);
      EXPECT_TRUE(r.transfer_vanished);
      EXPECT_TRUE(r.images_coincide);
      EXPECT_TRUE(r.transitivity_holds);
      EXPECT_TRUE(r.transfer_is_multiplication);
      ++ran;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::TooLarge) << e.what();
    }
  }
  EXPECT_GT(ran, 10);
}
