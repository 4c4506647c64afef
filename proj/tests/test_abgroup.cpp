#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tatekit/abgroup.hpp"

using namespace tatekit;

namespace {

IntVector ints(std::initializer_list<long long> v) { return IntVector(v.begin(), v.end()); }

void expect_valid_smith(const IntMatrix& a, const SmithForm& f) {
  EXPECT_EQ(f.U * a * f.V, f.S);
  EXPECT_EQ(abs(determinant(f.U)), 1);
  EXPECT_EQ(abs(determinant(f.V)), 1);
  EXPECT_EQ(f.U * f.U_inv, IntMatrix::identity(a.rows()));
  for (std::size_t i = 0; i < f.S.rows(); ++i)
    for (std::size_t j = 0; j < f.S.cols(); ++j)
      if (i != j) {
        EXPECT_EQ(f.S(i, j), 0);
      }
  auto d = f.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i < f.rank) {
      EXPECT_NE(d[i], 0);
    } else {
      EXPECT_EQ(d[i], 0);
    }
    if (i + 1 < f.rank) {
      EXPECT_EQ(d[i + 1] % d[i], 0);
    }
  }
}

}  // namespace

TEST(Smith, RotationMatrixMatchesDeterminantalDivisors) {
  IntMatrix a{{1, 1}, {-1, 1}};
  auto expected = oracle::determinantal_factors(a);
  ASSERT_EQ(expected, ints({1, 2}));
  SmithForm f = smith_normal_form(a);
  EXPECT_EQ(f.S, (IntMatrix{{1, 0}, {0, 2}}));
  expect_valid_smith(a, f);
}

TEST(Smith, IdentityAndZero) {
  auto id = IntMatrix::identity(4);
  EXPECT_EQ(smith_normal_form(id).S, id);
  IntMatrix z(2, 3);
  SmithForm f = smith_normal_form(z);
  EXPECT_EQ(f.S, z);
  EXPECT_EQ(f.rank, 0u);
  expect_valid_smith(z, f);
}

TEST(Smith, EmptyShapes) {
  SmithForm f = smith_normal_form(IntMatrix(0, 3));
  EXPECT_EQ(f.V.rows(), 3u);
  EXPECT_EQ(f.rank, 0u);
  EXPECT_EQ(kernel_basis(IntMatrix(0, 3)), IntMatrix::identity(3));
  FinAbGroup g = cokernel(IntMatrix(2, 0));
  EXPECT_EQ(g.free_rank(), 2u);
}

TEST(Smith, Deterministic) {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    IntMatrix a = oracle::random_matrix(rng, 4, 5, -5, 5);
    SmithForm f1 = smith_normal_form(a), f2 = smith_normal_form(a);
    EXPECT_EQ(f1.U, f2.U);
    EXPECT_EQ(f1.V, f2.V);
  }
}

TEST(Smith, LargeEntriesStayExact) {
  IntMatrix a(2, 2);
  a(0, 0) = parse_int("123456789012345678901234567890");
  a(0, 1) = parse_int("987654321098765432109876543210");
  a(1, 0) = 7;
  a(1, 1) = 3;
  SmithForm f = smith_normal_form(a);
  expect_valid_smith(a, f);
  EXPECT_EQ(f.S(0, 0) * f.S(1, 1), abs(oracle::cofactor_det(a)));
}

TEST(Smith, RandomPropertySweep) {
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(0, 6);
  for (int t = 0; t < 150; ++t) {
    IntMatrix a = oracle::random_matrix(rng, dim(rng), dim(rng), -5, 5);
    SmithForm f = smith_normal_form(a);
    expect_valid_smith(a, f);
    if (a.rows() <= 4 && a.cols() <= 4) {
      auto shape = oracle::cokernel_shape(a);
      FinAbGroup g = cokernel(a);
      EXPECT_EQ(g.invariant_factors(), shape.factors);
      EXPECT_EQ(g.free_rank(), shape.free_rank);
    }
  }
}

TEST(Cokernel, PaperExamples) {
  FinAbGroup g = cokernel(IntMatrix{{1, 1}, {-1, 1}});
  EXPECT_EQ(g.invariant_factors(), ints({2}));
  EXPECT_EQ(g.free_rank(), 0u);
  FinAbGroup h = cokernel(IntMatrix{{2, 0}, {0, 2}});
  EXPECT_EQ(h.invariant_factors(), ints({2, 2}));
  EXPECT_TRUE(cokernel(IntMatrix::identity(3)).is_trivial());
}

TEST(Cokernel, ProjectionRespectsRelations) {
  IntMatrix a{{1, 1}, {-1, 1}};
  FinAbGroup g = cokernel(a);
  EXPECT_TRUE(g.project(ints({1, 1})).is_zero());
  EXPECT_TRUE(g.project(ints({1, -1})).is_zero());
  EXPECT_FALSE(g.project(ints({1, 0})).is_zero());
  EXPECT_EQ(g.project(ints({1, 0})), g.project(ints({0, 1})));
  AbElement x = g.project(ints({1, 0}));
  EXPECT_EQ(g.project(g.lift(x)), x);
}

TEST(Cokernel, InvariantUnderPermutations) {
  std::mt19937 rng(7);
  for (int t = 0; t < 40; ++t) {
    IntMatrix a = oracle::random_matrix(rng, 4, 3, -4, 4);
    FinAbGroup g = cokernel(a);
    IntMatrix p = a;
    p.swap_rows(0, 3);
    p.swap_columns(0, 2);
    p.swap_rows(1, 2);
    FinAbGroup h = cokernel(p);
    EXPECT_TRUE(g.same_structure(h));
  }
}

TEST(ElementOrder, Examples) {
  FinAbGroup z2 = FinAbGroup::from_invariants(ints({2}), 0);
  EXPECT_EQ(*element_order(z2.generator(0), z2), 2);
  EXPECT_EQ(*element_order(z2.zero(), z2), 1);
  FinAbGroup g = FinAbGroup::from_invariants(ints({2, 4}), 0);
  EXPECT_EQ(*element_order(AbElement{ints({1, 0})}, g), 2);
  EXPECT_EQ(*element_order(AbElement{ints({1, 1})}, g), 4);
  EXPECT_EQ(*element_order(AbElement{ints({0, 2})}, g), 2);
  FinAbGroup f = FinAbGroup::from_invariants(ints({3}), 1);
  EXPECT_FALSE(element_order(AbElement{ints({0, 1})}, f).has_value());
}

TEST(ElementOrder, MultiplesDivide) {
  FinAbGroup g = FinAbGroup::from_invariants(ints({2, 6, 12}), 0);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(0, 11), m(-20, 20);
  for (int t = 0; t < 100; ++t) {
    AbElement x = g.reduce(ints({c(rng), c(rng), c(rng)}));
    Int n = m(rng);
    Int big = *element_order(x, g), small = *element_order(g.scale(n, x), g);
    EXPECT_EQ(big % small, 0);
    // Brute force: least k with k x = 0.
    Int k = 1;
    while (!g.scale(k, x).is_zero()) ++k;
    EXPECT_EQ(k, big);
  }
}

TEST(FromInvariants, RejectsBadChains) {
  EXPECT_THROW(FinAbGroup::from_invariants(ints({2, 3}), 0), Error);
  EXPECT_THROW(FinAbGroup::from_invariants(ints({1}), 0), Error);
}

TEST(Torsion, Examples) {
  FinAbGroup z = cokernel(IntMatrix(1, 0));
  EXPECT_TRUE(torsion_subgroup(z).group.is_trivial());
  FinAbGroup z2z = cokernel(IntMatrix{{2}, {0}});
  TorsionPart t = torsion_subgroup(z2z);
  EXPECT_EQ(t.group.invariant_factors(), ints({2}));
  EXPECT_EQ(t.group.free_rank(), 0u);
  AbElement g = t.group.generator(0);
  EXPECT_EQ(t.include(g), z2z.project(t.group.lift(g)));
  FinAbGroup rot = cokernel(IntMatrix{{1, 1}, {-1, 1}});
  EXPECT_TRUE(torsion_subgroup(rot).group.same_structure(rot));
}

TEST(Torsion, Idempotent) {
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    IntMatrix a = oracle::random_matrix(rng, 4, 2, -6, 6);
    FinAbGroup g = cokernel(a);
    TorsionPart t1 = torsion_subgroup(g);
    TorsionPart t2 = torsion_subgroup(t1.group);
    EXPECT_TRUE(t1.group.same_structure(t2.group));
    EXPECT_EQ(t2.inclusion, IntMatrix::identity(t1.group.num_coords()));
    for (const auto& e : t1.group.generators()) {
      EXPECT_EQ(g.project(t1.group.lift(e)), t1.include(e));
      EXPECT_EQ(t1.group.project(t1.group.lift(e)), e);
    }
  }
}

TEST(Subquotient, KernelOfInducedMap) {
  // Z^2/(2Z^2) -> Z/2 via the sum map has kernel of order 2 spanned by (1,1).
  FinAbGroup dom = cokernel(IntMatrix{{2, 0}, {0, 2}});
  FinAbGroup tgt = cokernel(IntMatrix{{2}});
  FinAbGroup k = kernel_of_induced_map(dom, tgt, IntMatrix{{1, 1}});
  EXPECT_EQ(k.invariant_factors(), ints({2}));
  EXPECT_EQ(dom.project(k.lift(k.generator(0))), dom.project(ints({1, 1})));
  EXPECT_EQ(induced_map_matrix(dom, tgt, IntMatrix{{1, 1}}), (IntMatrix{{1, 1}}));
}

TEST(Subquotient, ProperSublattice) {
  // 2Z / 8Z inside Z is Z/4.
  FinAbGroup g = subquotient(IntMatrix{{2}}, IntMatrix{{8}});
  EXPECT_EQ(g.invariant_factors(), ints({4}));
  EXPECT_EQ(*element_order(g.project(ints({2})), g), 4);
  EXPECT_EQ(*element_order(g.project(ints({4})), g), 2);
  EXPECT_THROW(g.project(ints({1})), Error);
}

TEST(Subquotient, DirectSum) {
  FinAbGroup a = cokernel(IntMatrix{{2}});
  FinAbGroup b = cokernel(IntMatrix{{3, 0}, {0, 0}});
  FinAbGroup s = direct_sum({a, b});
  EXPECT_EQ(s.invariant_factors(), ints({6}));
  EXPECT_EQ(s.free_rank(), 1u);
}
