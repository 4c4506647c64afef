#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tatekit/abgroup.hpp"
#include "tatekit/finite_group.hpp"

namespace tatekit {

// A finite group acting on Z^r through integer matrices (column vectors,
// g . m = action(g) m).
class GModule {
 public:
  GModule() = default;

  // Full action table; checked to be a homomorphism into GL_r(Z).
  GModule(GroupPtr group, std::size_t rank, std::vector<IntMatrix> action)
      : group_(std::move(group)), rank_(rank), action_(std::move(action)) {
    if (action_.size() != group_->order()) throw Error(ErrorCode::BadAction, "one action matrix per group element required");
    for (const auto& a : action_)
      if (a.rows() != rank_ || a.cols() != rank_) throw Error(ErrorCode::BadAction, "action matrix has wrong shape");
    check_action_law();
  }

  // Action determined by the images of some elements; completed through the
  // group law and then checked for consistency.
  static GModule from_generators(GroupPtr group, std::size_t rank,
                                 const std::vector<std::pair<std::size_t, IntMatrix>>& gens) {
    const FiniteGroup& g = *group;
    for (const auto& [elem, mat] : gens) {
      if (elem >= g.order()) throw Error(ErrorCode::BadAction, "generator index out of range");
      if (mat.rows() != rank || mat.cols() != rank) throw Error(ErrorCode::BadAction, "generator matrix has wrong shape");
    }
    std::vector<IntMatrix> action(g.order());
    std::vector<bool> known(g.order());
    action[g.identity()] = IntMatrix::identity(rank);
    known[g.identity()] = true;
    std::vector<std::size_t> queue{g.identity()};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::size_t x = queue[i];
      for (const auto& [elem, mat] : gens) {
        const std::size_t y = g.mul(elem, x);
        if (known[y]) continue;
        action[y] = mat * action[x];
        known[y] = true;
        queue.push_back(y);
      }
    }
    for (std::size_t x = 0; x < g.order(); ++x)
      if (!known[x]) throw Error(ErrorCode::BadAction, "given elements do not generate the group");
    return GModule(std::move(group), rank, std::move(action));
  }

  static GModule trivial(GroupPtr group, std::size_t rank) {
    std::vector<IntMatrix> action(group->order(), IntMatrix::identity(rank));
    return GModule(std::move(group), rank, std::move(action));
  }

  // Block-diagonal sum of modules over the same group.
  static GModule direct_sum(const std::vector<GModule>& parts) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "empty direct sum");
    const GroupPtr& group = parts.front().group();
    std::size_t rank = 0;
    for (const auto& p : parts) {
      if (!same_group(p.group(), group)) throw Error(ErrorCode::SubgroupMismatch, "summands over different groups");
      rank += p.rank();
    }
    std::vector<IntMatrix> action;
    for (std::size_t g = 0; g < group->order(); ++g) {
      std::vector<IntMatrix> blocks;
      for (const auto& p : parts) blocks.push_back(p.action(g));
      action.push_back(block_diagonal(blocks));
    }
    return GModule(group, rank, std::move(action));
  }

  // Pull back along a group homomorphism phi: H -> G given elementwise.
  GModule pullback(GroupPtr source, const std::vector<std::size_t>& phi) const {
    if (phi.size() != source->order()) throw Error(ErrorCode::BadAction, "homomorphism table has wrong length");
    std::vector<IntMatrix> action;
    for (std::size_t h = 0; h < source->order(); ++h) action.push_back(action_.at(phi[h]));
    return GModule(std::move(source), rank_, std::move(action));
  }

  const GroupPtr& group() const { return group_; }
  std::size_t rank() const { return rank_; }
  const IntMatrix& action(std::size_t g) const { return action_.at(g); }
  const std::vector<IntMatrix>& actions() const { return action_; }

 private:
  // rho(e) = I and rho(g x) = rho(g) rho(x) for generators g and all x imply
  // the homomorphism law (induction on word length); determinants are then
  // +-1 because every rho(g) has finite order.
  void check_action_law() const {
    const FiniteGroup& g = *group_;
    if (!action_[g.identity()].is_identity()) throw Error(ErrorCode::BadAction, "identity does not act trivially");
    for (std::size_t gen : g.generators())
      for (std::size_t x = 0; x < g.order(); ++x)
        if (action_[g.mul(gen, x)] != action_[gen] * action_[x])
          throw Error(ErrorCode::BadAction, "action is not a group homomorphism");
  }

  GroupPtr group_;
  std::size_t rank_ = 0;
  std::vector<IntMatrix> action_;
};

// Index of the left coset xH for every x.
inline std::vector<std::size_t> left_coset_index(const Subgroup& h) {
  const auto reps = h.left_transversal();
  std::vector<std::size_t> idx(h.parent()->order());
  for (std::size_t k = 0; k < reps.size(); ++k)
    for (std::size_t x : h.left_coset(reps[k])) idx[x] = k;
  return idx;
}

// Z[G/H] with G permuting the left cosets.
inline GModule permutation_module(const Subgroup& h) {
  const GroupPtr& g = h.parent();
  const auto reps = h.left_transversal();
  const auto idx = left_coset_index(h);
  std::vector<IntMatrix> action;
  for (std::size_t x = 0; x < g->order(); ++x) {
    IntMatrix a(reps.size(), reps.size());
    for (std::size_t j = 0; j < reps.size(); ++j) a(idx[g->mul(x, reps[j])], j) = 1;
    action.push_back(a);
  }
  return GModule(g, reps.size(), std::move(action));
}

// Augmentation kernel of Z[G/H] in the basis e_i - e_0.
inline GModule augmentation_module(const Subgroup& h) {
  GModule perm = permutation_module(h);
  const std::size_t k = perm.rank();
  std::vector<IntMatrix> action;
  for (const auto& a : perm.actions()) {
    std::vector<std::size_t> sigma(k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i)
        if (a(i, j) == 1) sigma[j] = i;
    IntMatrix b(k - 1, k - 1);
    for (std::size_t j = 1; j < k; ++j) {
      if (sigma[j] != 0) b(sigma[j] - 1, j - 1) += 1;
      if (sigma[0] != 0) b(sigma[0] - 1, j - 1) -= 1;
    }
    action.push_back(b);
  }
  return GModule(perm.group(), k - 1, std::move(action));
}

namespace detail {

inline void require_subgroup(const GModule& mod, const Subgroup& h) {
  if (!same_group(mod.group(), h.parent())) throw Error(ErrorCode::SubgroupMismatch, "subgroup of a different group");
}

// Columns (action(h) - I) for generators h of H: they span I_H M.
inline IntMatrix augmentation_relations(const GModule& mod, const Subgroup& h) {
  const std::size_t r = mod.rank();
  const auto gens = h.generators();
  IntMatrix rel(r, r * gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const IntMatrix& a = mod.action(gens[k]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) rel(i, k * r + j) = a(i, j) - (i == j ? 1 : 0);
  }
  return rel;
}

}  // namespace detail

// M_H = M / I_H M; lift/project move between lattice vectors and classes.
inline FinAbGroup coinvariants(const GModule& mod, const Subgroup& h) {
  detail::require_subgroup(mod, h);
  return cokernel(detail::augmentation_relations(mod, h));
}
inline FinAbGroup coinvariants(const GModule& mod) { return coinvariants(mod, Subgroup::whole(mod.group())); }

// Basis (columns) of M^H.
inline IntMatrix invariants(const GModule& mod, const Subgroup& h) {
  detail::require_subgroup(mod, h);
  const auto gens = h.generators();
  const std::size_t r = mod.rank();
  IntMatrix stacked(r * gens.size(), r);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const IntMatrix& a = mod.action(gens[k]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) stacked(k * r + i, j) = a(i, j) - (i == j ? 1 : 0);
  }
  return kernel_basis(stacked);
}
inline IntMatrix invariants(const GModule& mod) { return invariants(mod, Subgroup::whole(mod.group())); }

// N_H = sum of action(h) over h in H.
inline IntMatrix norm_matrix(const GModule& mod, const Subgroup& h) {
  detail::require_subgroup(mod, h);
  IntMatrix n(mod.rank(), mod.rank());
  for (std::size_t g : h.members()) n += mod.action(g);
  return n;
}
inline IntMatrix norm_matrix(const GModule& mod) { return norm_matrix(mod, Subgroup::whole(mod.group())); }

// Induced norm M_H -> M^H evaluated on a class (a vector of M lying in M^H).
inline IntVector induced_norm(const GModule& mod, const Subgroup& h, const FinAbGroup& coinv, const AbElement& x) {
  return norm_matrix(mod, h).apply(coinv.lift(x));
}

// H^-1(H, M) = ker(N: M_H -> M^H) = ker(N on M) / I_H M.
inline FinAbGroup tate_h_minus1(const GModule& mod, const Subgroup& h) {
  detail::require_subgroup(mod, h);
  IntMatrix kernel = kernel_basis(norm_matrix(mod, h));
  return subquotient(kernel, detail::augmentation_relations(mod, h));
}
inline FinAbGroup tate_h_minus1(const GModule& mod) { return tate_h_minus1(mod, Subgroup::whole(mod.group())); }

// H^0(H, M) = M^H / N_H M.
inline FinAbGroup tate_h0(const GModule& mod, const Subgroup& h) {
  return subquotient(invariants(mod, h), norm_matrix(mod, h));
}
inline FinAbGroup tate_h0(const GModule& mod) { return tate_h0(mod, Subgroup::whole(mod.group())); }

// sum of action(g_i) over representatives of the cosets to \ from.
inline IntMatrix transfer_matrix(const GModule& mod, const Subgroup& from, const Subgroup& to) {
  detail::require_subgroup(mod, from);
  detail::require_subgroup(mod, to);
  if (!to.is_subgroup_of(from)) throw Error(ErrorCode::SubgroupMismatch, "target subgroup is not contained in the source subgroup");
  IntMatrix t(mod.rank(), mod.rank());
  for (std::size_t g : to.transversal_in(from)) t += mod.action(g);
  return t;
}

// Transfer [m] -> [sum g_i m] from a group built on M_from (coinvariants,
// their torsion, or H^-1) to the matching group built on M_to.
inline AbElement transfer(const GModule& mod, const Subgroup& from, const Subgroup& to, const FinAbGroup& source,
                          const AbElement& x, const FinAbGroup& target) {
  const IntMatrix t = transfer_matrix(mod, from, to);
  return target.project(t.apply(source.lift(x)));
}

// Convenience form on full coinvariants: M_G -> M_to.
inline AbElement transfer(const GModule& mod, const Subgroup& to, const AbElement& x) {
  const Subgroup whole = Subgroup::whole(mod.group());
  return transfer(mod, whole, to, coinvariants(mod, whole), x, coinvariants(mod, to));
}

}  // namespace tatekit
