#include <gtest/gtest.h>

#include <random>

#include "random_modules.hpp"

using namespace tatekit;
using namespace fixtures;

namespace {

IntVector ints(std::initializer_list<long long> v) { return IntVector(v.begin(), v.end()); }

Subgroup delta(const GroupPtr& g) { return Subgroup::generated_by(g, {2}); }

}  // namespace

TEST(FiniteGroup, RejectsNonGroupTables) {
  EXPECT_THROW(FiniteGroup({{0, 1}, {0, 1}}), Error);
  EXPECT_THROW(FiniteGroup({{0, 1}, {1, 1}}), Error);
  EXPECT_NO_THROW(FiniteGroup::quaternion());
  EXPECT_EQ(FiniteGroup::symmetric(3).order(), 6u);
  EXPECT_FALSE(FiniteGroup::dihedral(4).is_abelian());
}

TEST(Subgroup, CosetCounts) {
  auto g = make_group(FiniteGroup::symmetric(3));
  Subgroup h = Subgroup::generated_by(g, {g->generators().front()});
  EXPECT_EQ(h.transversal().size() * h.order(), g->order());
  EXPECT_EQ(h.left_transversal().size() * h.order(), g->order());
  EXPECT_THROW(Subgroup::from_members(g, {0, 1, 2, 3}), Error);
}

TEST(GModule, GaussianIntegersCoinvariants) {
  auto g = z4();
  GModule m = gaussian_module(g);
  EXPECT_EQ(coinvariants(m).invariant_factors(), ints({2}));
  EXPECT_EQ(coinvariants(m, delta(g)).invariant_factors(), ints({2, 2}));
  EXPECT_EQ(invariants(m).cols(), 0u);
  EXPECT_TRUE(norm_matrix(m).is_zero());
  EXPECT_TRUE(norm_matrix(m, delta(g)).is_zero());
}

TEST(GModule, DeltaAsItsOwnGroup) {
  auto c2 = make_group(FiniteGroup::cyclic(2));
  GModule m = GModule::from_generators(c2, 2, {{1, IntMatrix{{-1, 0}, {0, -1}}}});
  EXPECT_EQ(coinvariants(m).invariant_factors(), ints({2, 2}));
  EXPECT_EQ(invariants(m).cols(), 0u);
  EXPECT_EQ(tate_h_minus1(m).invariant_factors(), ints({2, 2}));
}

TEST(GModule, TrivialAction) {
  auto g = make_group(FiniteGroup::cyclic(5));
  GModule m = GModule::trivial(g, 3);
  FinAbGroup c = coinvariants(m);
  EXPECT_EQ(c.free_rank(), 3u);
  EXPECT_TRUE(c.invariant_factors().empty());
  EXPECT_EQ(invariants(m), IntMatrix::identity(3));
  GModule z = GModule::trivial(g, 1);
  EXPECT_EQ(norm_matrix(z), (IntMatrix{{5}}));
  EXPECT_TRUE(tate_h_minus1(z).is_trivial());
  EXPECT_EQ(tate_h0(z).invariant_factors(), ints({5}));
}

TEST(GModule, TateMinusOneOfGaussianIntegers) {
  auto g = z4();
  GModule m = gaussian_module(g);
  EXPECT_EQ(tate_h_minus1(m).invariant_factors(), ints({2}));
  EXPECT_EQ(tate_h_minus1(m, delta(g)).invariant_factors(), ints({2, 2}));
}

TEST(GModule, RejectsNonHomomorphisms) {
  auto g = z4();
  EXPECT_THROW(GModule::from_generators(g, 2, {{1, IntMatrix{{1, 1}, {0, 1}}}}), Error);
  EXPECT_THROW(GModule::from_generators(g, 2, {{1, IntMatrix{{0, -1}, {1, -1}}}}), Error);
  EXPECT_THROW(GModule::from_generators(g, 1, {{1, IntMatrix{{2}}}}), Error);
  std::vector<IntMatrix> bad(4, IntMatrix::identity(1));
  bad[1] = IntMatrix{{-1}};
  EXPECT_THROW(GModule(g, 1, bad), Error);
  EXPECT_THROW(GModule::from_generators(g, 1, {{2, IntMatrix{{-1}}}}), Error);
}

TEST(Transfer, IndexTwoGaussian) {
  auto g = z4();
  GModule m = gaussian_module(g);
  Subgroup whole = Subgroup::whole(g), d = delta(g);
  FinAbGroup src = coinvariants(m), tgt = coinvariants(m, d);
  AbElement x = src.generator(0);
  AbElement y = transfer(m, whole, d, src, x, tgt);
  EXPECT_EQ(y, tgt.project(ints({1, 1})));
  EXPECT_FALSE(y.is_zero());
  EXPECT_TRUE(transfer(m, whole, d, src, src.zero(), tgt).is_zero());
}

TEST(Transfer, SameSubgroupIsIdentity) {
  auto g = z4();
  GModule m = gaussian_module(g);
  FinAbGroup c = coinvariants(m);
  AbElement x = c.generator(0);
  EXPECT_EQ(transfer(m, Subgroup::whole(g), x), x);
}

TEST(Transfer, TrivialActionIsMultiplication) {
  auto g = make_group(FiniteGroup::cyclic(6));
  GModule m = GModule::trivial(g, 1);
  Subgroup h = Subgroup::generated_by(g, {3});
  FinAbGroup c = coinvariants(m), ch = coinvariants(m, h);
  AbElement x = c.project(ints({7}));
  EXPECT_EQ(transfer(m, Subgroup::whole(g), h, c, x, ch), ch.project(ints({21})));
}

TEST(Transfer, ForeignSubgroupRejected) {
  auto g = z4();
  auto other = make_group(FiniteGroup::klein_four());
  GModule m = gaussian_module(g);
  EXPECT_THROW(transfer(m, Subgroup::trivial(other), coinvariants(m).generator(0)), Error);
  Subgroup d = delta(g);
  EXPECT_THROW(transfer_matrix(m, d, Subgroup::whole(g)), Error);
}

TEST(Transfer, WellDefinedOnRandomModules) {
  std::mt19937 rng(99);
  auto groups = small_groups();
  std::uniform_int_distribution<int> coord(-3, 3);
  for (int t = 0; t < 60; ++t) {
    const GroupPtr& g = groups[t % groups.size()];
    GModule m = random_module(rng, g, 4);
    Subgroup top = random_subgroup(rng, Subgroup::whole(g));
    Subgroup low = random_subgroup(rng, top);
    FinAbGroup src = coinvariants(m, top), tgt = coinvariants(m, low);
    IntVector v(m.rank());
    for (auto& c : v) c = coord(rng);
    std::uniform_int_distribution<std::size_t> pick(0, top.order() - 1);
    IntVector gv = m.action(top.members()[pick(rng)]).apply(v);
    IntMatrix t1 = transfer_matrix(m, top, low);
    AbElement a = tgt.project(t1.apply(v));
    EXPECT_EQ(a, tgt.project(t1.apply(gv)));
    EXPECT_EQ(a, tgt.project(transfer_with_random_reps(rng, m, top, low).apply(v)));
    EXPECT_EQ(src.project(v), src.project(gv));
  }
}

TEST(Transfer, TransitiveOnRandomChains) {
  std::mt19937 rng(1234);
  auto groups = small_groups();
  for (int t = 0; t < 60; ++t) {
    const GroupPtr& g = groups[(t * 7) % groups.size()];
    GModule m = random_module(rng, g, 4);
    Subgroup a = random_subgroup(rng, Subgroup::whole(g));
    Subgroup b = random_subgroup(rng, a);
    Subgroup c = random_subgroup(rng, b);
    FinAbGroup ma = coinvariants(m, a), mb = coinvariants(m, b), mc = coinvariants(m, c);
    for (const auto& x : ma.generators()) {
      AbElement direct = transfer(m, a, c, ma, x, mc);
      AbElement twostep = transfer(m, b, c, mb, transfer(m, a, b, ma, x, mb), mc);
      EXPECT_EQ(direct, twostep);
    }
  }
}

TEST(Transfer, CoincidingImagesGiveMultiplication) {
  std::mt19937 rng(42);
  auto bases = small_groups();
  for (int t = 0; t < 24; ++t) {
    const GroupPtr& theta = bases[t % bases.size()];
    const std::size_t n = 2 + t % 3;
    auto cn = FiniteGroup::cyclic(n);
    auto prod = make_group(FiniteGroup::direct_product(*theta, cn));
    GModule base = random_module(rng, theta, 3);
    std::vector<std::size_t> proj(prod->order());
    for (std::size_t x = 0; x < prod->order(); ++x) proj[x] = x / n;
    GModule m = base.pullback(prod, proj);
    std::vector<std::size_t> theta_part;
    for (std::size_t a = 0; a < theta->order(); ++a) theta_part.push_back(a * n);
    Subgroup low = Subgroup::from_members(prod, theta_part);
    Subgroup whole = Subgroup::whole(prod);
    FinAbGroup top = coinvariants(m, whole), bottom = coinvariants(m, low);
    // The projection M_low -> M_top is an isomorphism.
    EXPECT_TRUE(bottom.same_structure(top));
    EXPECT_EQ(kernel_of_induced_map(bottom, top, IntMatrix::identity(m.rank())).is_trivial(), true);
    for (const auto& x : top.generators()) {
      AbElement y = transfer(m, whole, low, top, x, bottom);
      EXPECT_EQ(top.project(bottom.lift(y)), top.scale(n, x));
    }
  }
}

TEST(Tate, ZeroNormMeansCoinvariants) {
  std::mt19937 rng(8);
  auto groups = small_groups();
  for (int t = 0; t < 80; ++t) {
    const GroupPtr& g = groups[t % groups.size()];
    GModule m = random_module(rng, g, 4);
    if (!norm_matrix(m).is_zero()) continue;
    EXPECT_TRUE(tate_h_minus1(m).same_structure(coinvariants(m)));
  }
  // The augmentation kernel of Z[G] always has zero norm.
  auto g = make_group(FiniteGroup::klein_four());
  GModule aug = augmentation_module(Subgroup::trivial(g));
  EXPECT_TRUE(norm_matrix(aug).is_zero());
  EXPECT_TRUE(tate_h_minus1(aug).same_structure(coinvariants(aug)));
}

TEST(Tate, RegularModuleIsCohomologicallyTrivial) {
  auto g = make_group(FiniteGroup::dihedral(4));
  GModule reg = permutation_module(Subgroup::trivial(g));
  EXPECT_TRUE(tate_h_minus1(reg).is_trivial());
  EXPECT_TRUE(tate_h0(reg).is_trivial());
}
