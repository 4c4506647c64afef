#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tatekit/smith.hpp"

namespace tatekit {

// Element of a FinAbGroup: one coordinate per invariant factor (reduced into
// [0, d_i)) followed by the free coordinates.
struct AbElement {
  IntVector coords;

  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }
  friend bool operator==(const AbElement&, const AbElement&) = default;
};

// A finitely generated abelian group realized as a subquotient col(B)/col(R)
// of an ambient lattice Z^a. Coordinates inside col(B) are z with x = B z;
// the relations in those coordinates are C (B C = R), and the group
// coordinates are the rows of U z for the Smith form U C V = S.
struct Presentation {
  IntMatrix basis;      // a x k
  IntMatrix relations;  // k x c
  SmithForm smith;      // of relations
  std::vector<std::size_t> torsion_rows;
  std::vector<std::size_t> free_rows;
  std::optional<LatticeSolver> solver;  // empty when basis is the identity
};

class FinAbGroup {
 public:
  FinAbGroup() = default;

  // Normal form only; no ambient lattice attached.
  static FinAbGroup from_invariants(IntVector factors, std::size_t free_rank) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] < 2) throw Error(ErrorCode::InvalidArgument, "invariant factors must be >= 2");
      if (i > 0 && factors[i] % factors[i - 1] != 0)
        throw Error(ErrorCode::InvalidArgument, "invariant factors must form a divisibility chain");
    }
    FinAbGroup g;
    g.factors_ = std::move(factors);
    g.free_rank_ = free_rank;
    return g;
  }

  static FinAbGroup from_presentation(Presentation p) {
    FinAbGroup g;
    for (std::size_t row : p.torsion_rows) g.factors_.push_back(p.smith.S(row, row));
    g.free_rank_ = p.free_rows.size();
    g.pres_ = std::make_shared<const Presentation>(std::move(p));
    return g;
  }

  const IntVector& invariant_factors() const { return factors_; }
  std::size_t free_rank() const { return free_rank_; }
  std::size_t torsion_count() const { return factors_.size(); }
  std::size_t num_coords() const { return factors_.size() + free_rank_; }
  bool is_trivial() const { return factors_.empty() && free_rank_ == 0; }
  bool is_finite() const { return free_rank_ == 0; }

  // Group order, or nullopt when infinite.
  std::optional<Int> order() const {
    if (free_rank_ != 0) return std::nullopt;
    Int n = 1;
    for (const auto& d : factors_) n *= d;
    return n;
  }

  bool same_structure(const FinAbGroup& o) const { return factors_ == o.factors_ && free_rank_ == o.free_rank_; }

  AbElement zero() const { return AbElement{IntVector(num_coords())}; }
  AbElement generator(std::size_t i) const {
    AbElement e = zero();
    e.coords.at(i) = 1;
    return e;
  }
  std::vector<AbElement> generators() const {
    std::vector<AbElement> g;
    for (std::size_t i = 0; i < num_coords(); ++i) g.push_back(generator(i));
    return g;
  }

  AbElement reduce(IntVector coords) const {
    if (coords.size() != num_coords()) throw Error(ErrorCode::InvalidArgument, "coordinate count does not match the group");
    for (std::size_t i = 0; i < factors_.size(); ++i) coords[i] = floor_mod(coords[i], factors_[i]);
    return AbElement{std::move(coords)};
  }
  bool contains(const AbElement& e) const {
    if (e.coords.size() != num_coords()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (e.coords[i] < 0 || e.coords[i] >= factors_[i]) return false;
    return true;
  }
  AbElement add(const AbElement& a, const AbElement& b) const {
    IntVector c(num_coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords.at(i) + b.coords.at(i);
    return reduce(std::move(c));
  }
  AbElement negate(const AbElement& a) const {
    IntVector c(num_coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.coords.at(i);
    return reduce(std::move(c));
  }
  AbElement scale(const Int& n, const AbElement& a) const {
    IntVector c(num_coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = n * a.coords.at(i);
    return reduce(std::move(c));
  }

  bool has_presentation() const { return static_cast<bool>(pres_); }
  const Presentation& presentation() const {
    if (!pres_) throw Error(ErrorCode::InvalidArgument, "group carries no presentation");
    return *pres_;
  }
  std::size_t ambient_rank() const { return presentation().basis.rows(); }

  // Class of an ambient lattice vector. Throws NOT_IN_SUBGROUP if x is not
  // in the sublattice col(B), or if its class has a component outside this
  // group (torsion subgroups reject vectors with nonzero free part).
  AbElement project(std::span<const Int> x) const {
    const Presentation& p = presentation();
    if (x.size() != p.basis.rows()) throw Error(ErrorCode::InvalidArgument, "ambient dimension mismatch");
    IntVector z;
    if (p.solver) {
      auto solved = p.solver->solve(x);
      if (!solved) throw Error(ErrorCode::NotInSubgroup, "vector is not in the group's lattice");
      z = std::move(*solved);
    } else {
      z.assign(x.begin(), x.end());
    }
    IntVector y = p.smith.U.apply(z);
    IntVector coords;
    coords.reserve(num_coords());
    for (std::size_t row : p.torsion_rows) coords.push_back(floor_mod(y[row], p.smith.S(row, row)));
    for (std::size_t row : p.free_rows) coords.push_back(y[row]);
    // Rows that are neither torsion nor free must vanish modulo their factor.
    for (std::size_t row = 0; row < y.size(); ++row) {
      if (is_coordinate_row(row)) continue;
      const Int d = row < p.smith.rank ? p.smith.S(row, row) : Int(0);
      if (d == 0 ? y[row] != 0 : y[row] % d != 0)
        throw Error(ErrorCode::NotInSubgroup, "class lies outside this subgroup");
    }
    return AbElement{std::move(coords)};
  }

  // A lattice vector representing the class; never canonical.
  IntVector lift(const AbElement& e) const {
    const Presentation& p = presentation();
    if (e.coords.size() != num_coords()) throw Error(ErrorCode::InvalidArgument, "coordinate count does not match the group");
    IntVector y(p.basis.cols());
    std::size_t k = 0;
    for (std::size_t row : p.torsion_rows) y[row] = e.coords[k++];
    for (std::size_t row : p.free_rows) y[row] = e.coords[k++];
    IntVector z = p.smith.U_inv.apply(y);
    return p.solver ? p.basis.apply(z) : z;
  }

 private:
  bool is_coordinate_row(std::size_t row) const {
    const Presentation& p = *pres_;
    for (std::size_t r : p.torsion_rows)
      if (r == row) return true;
    for (std::size_t r : p.free_rows)
      if (r == row) return true;
    return false;
  }

  IntVector factors_;
  std::size_t free_rank_ = 0;
  std::shared_ptr<const Presentation> pres_;
};

namespace detail {

inline Presentation make_presentation(IntMatrix basis, IntMatrix relations, bool identity_basis) {
  Presentation p;
  p.smith = smith_normal_form(relations);
  const std::size_t k = relations.rows();
  for (std::size_t i = 0; i < k; ++i) {
    if (i < p.smith.rank) {
      if (p.smith.S(i, i) != 1) p.torsion_rows.push_back(i);
    } else {
      p.free_rows.push_back(i);
    }
  }
  if (!identity_basis) p.solver.emplace(basis);
  p.basis = std::move(basis);
  p.relations = std::move(relations);
  return p;
}

}  // namespace detail

// Z^r / (column span of A), with projection and lifting.
inline FinAbGroup cokernel(const IntMatrix& a) {
  return FinAbGroup::from_presentation(detail::make_presentation(IntMatrix::identity(a.rows()), a, true));
}

// col(generators) / col(relations) inside Z^a. Every relation column must lie
// in the span of the generators.
inline FinAbGroup subquotient(const IntMatrix& generators, const IntMatrix& relations) {
  if (generators.rows() != relations.rows()) throw Error(ErrorCode::InvalidArgument, "subquotient ambient mismatch");
  const std::size_t a = generators.rows();
  IntMatrix basis(a, 0);
  if (generators.cols() > 0) {
    SmithForm f = smith_normal_form(generators);
    bool whole = f.rank == a;
    for (std::size_t j = 0; j < f.rank && whole; ++j) whole = f.S(j, j) == 1;
    if (whole) return cokernel(relations);
    basis = IntMatrix(a, f.rank);
    for (std::size_t j = 0; j < f.rank; ++j)
      for (std::size_t i = 0; i < a; ++i) basis(i, j) = f.U_inv(i, j) * f.S(j, j);
  } else if (a == 0) {
    return cokernel(relations);
  }
  if (basis.cols() == 0 && !relations.is_zero())
    throw Error(ErrorCode::NotInSubgroup, "relations outside the zero lattice");
  IntMatrix rel = basis.cols() == 0 ? IntMatrix(0, relations.cols()) : solve_columns(basis, relations);
  return FinAbGroup::from_presentation(detail::make_presentation(std::move(basis), std::move(rel), false));
}

// Least n >= 1 with n g = 0, or nullopt (infinite order).
inline std::optional<Int> element_order(const AbElement& g, const FinAbGroup& group) {
  if (!group.contains(g)) throw Error(ErrorCode::InvalidArgument, "element not in group");
  for (std::size_t i = group.torsion_count(); i < g.coords.size(); ++i)
    if (g.coords[i] != 0) return std::nullopt;
  Int n = 1;
  for (std::size_t i = 0; i < group.torsion_count(); ++i) {
    const Int& d = group.invariant_factors()[i];
    n = lcm(n, d / gcd(d, g.coords[i]));
  }
  return n;
}

struct TorsionPart {
  FinAbGroup group;
  IntMatrix inclusion;  // coordinates of the torsion group -> coordinates of G

  AbElement include(const AbElement& t) const { return AbElement{inclusion.apply(t.coords)}; }
};

// The torsion subgroup keeps the parent's torsion coordinates verbatim, so the
// inclusion is a coordinate embedding and the construction is idempotent.
inline TorsionPart torsion_subgroup(const FinAbGroup& g) {
  IntMatrix inc(g.num_coords(), g.torsion_count());
  for (std::size_t i = 0; i < g.torsion_count(); ++i) inc(i, i) = 1;
  if (!g.has_presentation()) return {FinAbGroup::from_invariants(g.invariant_factors(), 0), inc};
  if (g.free_rank() == 0) return {g, inc};

  const Presentation& p = g.presentation();
  const std::size_t rank = p.smith.rank;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rank; ++i) keep.push_back(i);
  IntMatrix local = p.smith.U_inv.select_columns(keep);
  Presentation t;
  t.basis = p.solver ? p.basis * local : local;
  IntVector diag;
  for (std::size_t i = 0; i < rank; ++i) diag.push_back(p.smith.S(i, i));
  t.relations = IntMatrix::diagonal(diag);
  t.smith = SmithForm{IntMatrix::identity(rank), t.relations, IntMatrix::identity(rank), IntMatrix::identity(rank), rank};
  t.torsion_rows = p.torsion_rows;
  t.solver.emplace(t.basis);
  return {FinAbGroup::from_presentation(std::move(t)), inc};
}

// Kernel of the homomorphism domain -> target induced by the ambient map F.
// F must send the domain's lattice into the target's lattice and relations to
// relations. The result is a subquotient of the domain's ambient lattice, so
// domain.project(kernel.lift(k)) gives the inclusion.
inline FinAbGroup kernel_of_induced_map(const FinAbGroup& domain, const FinAbGroup& target, const IntMatrix& f) {
  const Presentation& pd = domain.presentation();
  const Presentation& pt = target.presentation();
  const IntMatrix bd = pd.basis;
  const IntMatrix rt = pt.solver ? pt.basis * pt.relations : pt.relations;
  const IntMatrix fb = f * bd;
  const std::size_t k = bd.cols();
  IntMatrix kern = kernel_basis(hstack(fb, Int(-1) * rt));
  IntMatrix z = kern.row_block(0, k);
  IntMatrix gens = bd * z;
  IntMatrix rel = pd.solver ? pd.basis * pd.relations : pd.relations;
  return subquotient(gens, rel);
}

// Matrix (target coordinates x domain coordinates) of the induced map on the
// canonical generators of the domain.
inline IntMatrix induced_map_matrix(const FinAbGroup& domain, const FinAbGroup& target, const IntMatrix& f) {
  IntMatrix m(target.num_coords(), domain.num_coords());
  for (std::size_t i = 0; i < domain.num_coords(); ++i) {
    AbElement img = target.project(f.apply(domain.lift(domain.generator(i))));
    m.set_column(i, img.coords);
  }
  return m;
}

// External direct sum; the ambient lattice is the concatenation of the
// summands' ambients.
inline FinAbGroup direct_sum(const std::vector<FinAbGroup>& groups) {
  std::vector<IntMatrix> bases, rels;
  for (const auto& g : groups) {
    const Presentation& p = g.presentation();
    bases.push_back(p.basis);
    rels.push_back(p.solver ? p.basis * p.relations : p.relations);
  }
  return subquotient(block_diagonal(bases), block_diagonal(rels));
}

}  // namespace tatekit
