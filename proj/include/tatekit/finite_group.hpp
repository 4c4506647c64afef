#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <vector>

#include "tatekit/error.hpp"

namespace tatekit {

// A finite group given by its full multiplication table. Element 0 need not
// be the identity; the identity is located at construction.
class FiniteGroup {
 public:
  using Table = std::vector<std::vector<std::size_t>>;

  explicit FiniteGroup(Table table) : table_(std::move(table)) {
    const std::size_t n = table_.size();
    if (n == 0) throw Error(ErrorCode::BadGroup, "empty multiplication table");
    for (const auto& row : table_) {
      if (row.size() != n) throw Error(ErrorCode::BadGroup, "multiplication table is not square");
      for (std::size_t v : row)
        if (v >= n) throw Error(ErrorCode::BadGroup, "table entry out of range");
    }
    identity_ = n;
    for (std::size_t e = 0; e < n && identity_ == n; ++e) {
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
      if (ok) identity_ = e;
    }
    if (identity_ == n) throw Error(ErrorCode::BadGroup, "no identity element");
    inverse_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
    for (std::size_t a = 0; a < n; ++a)
      if (inverse_[a] == n) throw Error(ErrorCode::BadGroup, "element without inverse");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw Error(ErrorCode::BadGroup, "multiplication is not associative");
  }

  // Z/n with element k standing for k * (1 + nZ).
  static FiniteGroup cyclic(std::size_t n) {
    Table t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t));
  }

  // Pairs (a, b) are indexed as a * |B| + b.
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    const std::size_t na = a.order(), nb = b.order();
    Table t(na * nb, std::vector<std::size_t>(na * nb));
    for (std::size_t x = 0; x < na * nb; ++x)
      for (std::size_t y = 0; y < na * nb; ++y)
        t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
    return FiniteGroup(std::move(t));
  }

  static FiniteGroup klein_four() { return direct_product(cyclic(2), cyclic(2)); }

  // Closure of the given permutations (images of 0..degree-1) under composition,
  // (p * q)(i) = p(q(i)). Elements are numbered in discovery order, identity first.
  static FiniteGroup from_permutations(const std::vector<std::vector<std::size_t>>& gens) {
    const std::size_t degree = gens.empty() ? 0 : gens.front().size();
    for (const auto& g : gens) {
      if (g.size() != degree) throw Error(ErrorCode::BadGroup, "permutations of different degrees");
      std::vector<bool> seen(degree);
      for (std::size_t v : g) {
        if (v >= degree || seen[v]) throw Error(ErrorCode::BadGroup, "not a permutation");
        seen[v] = true;
      }
    }
    using Perm = std::vector<std::size_t>;
    auto compose = [&](const Perm& p, const Perm& q) {
      Perm r(degree);
      for (std::size_t i = 0; i < degree; ++i) r[i] = p[q[i]];
      return r;
    };
    Perm id(degree);
    std::iota(id.begin(), id.end(), std::size_t{0});
    std::vector<Perm> elems{id};
    std::map<Perm, std::size_t> index{{id, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& g : gens) {
        Perm p = compose(g, elems[i]);
        if (!index.count(p)) {
          if (elems.size() >= kMaxPermutationGroupOrder)
            throw Error(ErrorCode::TooLarge, "permutation group too large for a multiplication table");
          index.emplace(p, elems.size());
          elems.push_back(std::move(p));
        }
      }
    }
    const std::size_t n = elems.size();
    Table t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    return FiniteGroup(std::move(t));
  }

  // Symmetries of the regular k-gon, order 2k.
  static FiniteGroup dihedral(std::size_t k) {
    std::vector<std::size_t> rot(k), refl(k);
    for (std::size_t i = 0; i < k; ++i) {
      rot[i] = (i + 1) % k;
      refl[i] = (k - i) % k;
    }
    return from_permutations({rot, refl});
  }

  static FiniteGroup symmetric(std::size_t degree) {
    std::vector<std::size_t> swap(degree), cycle(degree);
    std::iota(swap.begin(), swap.end(), std::size_t{0});
    if (degree >= 2) std::swap(swap[0], swap[1]);
    for (std::size_t i = 0; i < degree; ++i) cycle[i] = (i + 1) % degree;
    return from_permutations({swap, cycle});
  }

  // Quaternion group of order 8 via its regular representation.
  static FiniteGroup quaternion() {
    // Elements +-1, +-i, +-j, +-k encoded as 2*unit + sign.
    static constexpr int kUnitTable[4][4][2] = {
        {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
        {{1, 0}, {0, 1}, {3, 0}, {2, 1}},
        {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
        {{3, 0}, {2, 0}, {1, 1}, {0, 1}},
    };
    Table t(8, std::vector<std::size_t>(8));
    for (std::size_t a = 0; a < 8; ++a)
      for (std::size_t b = 0; b < 8; ++b) {
        const auto& e = kUnitTable[a / 2][b / 2];
        std::size_t sign = (a % 2 + b % 2 + static_cast<std::size_t>(e[1])) % 2;
        t[a][b] = static_cast<std::size_t>(e[0]) * 2 + sign;
      }
    return FiniteGroup(std::move(t));
  }

  std::size_t order() const { return table_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  std::size_t conjugate(std::size_t g, std::size_t x) const { return mul(mul(g, x), inverse(g)); }
  const Table& table() const { return table_; }

  std::size_t power(std::size_t a, std::size_t k) const {
    std::size_t r = identity_;
    for (std::size_t i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  std::size_t element_order(std::size_t a) const {
    std::size_t k = 1;
    for (std::size_t x = a; x != identity_; x = mul(x, a)) ++k;
    return k;
  }
  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  // Members of the subgroup generated by gens, sorted.
  std::vector<std::size_t> closure(const std::vector<std::size_t>& gens) const {
    std::vector<bool> in(order());
    std::vector<std::size_t> members{identity_};
    in[identity_] = true;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t g : gens) {
        std::size_t p = mul(members[i], g);
        if (!in[p]) {
          in[p] = true;
          members.push_back(p);
        }
      }
    std::sort(members.begin(), members.end());
    return members;
  }

  // Greedy generating set of the subgroup with the given members: scan in
  // index order, keep an element if it is not yet generated.
  std::vector<std::size_t> generating_set(const std::vector<std::size_t>& members) const {
    std::vector<std::size_t> gens;
    std::vector<std::size_t> span{identity_};
    for (std::size_t x : members) {
      if (std::binary_search(span.begin(), span.end(), x)) continue;
      gens.push_back(x);
      span = closure(gens);
    }
    return gens;
  }
  std::vector<std::size_t> generators() const {
    std::vector<std::size_t> all(order());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return generating_set(all);
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

  static constexpr std::size_t kMaxPermutationGroupOrder = 5040;

 private:
  Table table_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

inline bool same_group(const GroupPtr& a, const GroupPtr& b) { return a == b || (a && b && *a == *b); }

// A subgroup of a finite group, stored by its sorted member list. Coset
// representatives are for the right cosets H g, one per coset, each the
// smallest index in its coset.
class Subgroup {
 public:
  Subgroup() = default;

  static Subgroup from_members(GroupPtr parent, std::vector<std::size_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (std::size_t m : members)
      if (m >= parent->order()) throw Error(ErrorCode::InvalidArgument, "subgroup member out of range");
    if (!std::binary_search(members.begin(), members.end(), parent->identity()))
      throw Error(ErrorCode::InvalidArgument, "subgroup must contain the identity");
    for (std::size_t a : members)
      for (std::size_t b : members)
        if (!std::binary_search(members.begin(), members.end(), parent->mul(a, b)))
          throw Error(ErrorCode::InvalidArgument, "member set is not closed under multiplication");
    return Subgroup(std::move(parent), std::move(members));
  }

  static Subgroup generated_by(GroupPtr parent, const std::vector<std::size_t>& gens) {
    for (std::size_t g : gens)
      if (g >= parent->order()) throw Error(ErrorCode::InvalidArgument, "generator out of range");
    auto members = parent->closure(gens);
    return Subgroup(std::move(parent), std::move(members));
  }

  static Subgroup whole(GroupPtr parent) {
    std::vector<std::size_t> all(parent->order());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return Subgroup(std::move(parent), std::move(all));
  }

  static Subgroup trivial(GroupPtr parent) {
    std::size_t e = parent->identity();
    return Subgroup(std::move(parent), {e});
  }

  const GroupPtr& parent() const { return parent_; }
  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  std::size_t index() const { return parent_->order() / members_.size(); }
  bool contains(std::size_t g) const { return mask_.at(g); }
  bool is_whole() const { return members_.size() == parent_->order(); }

  bool is_subgroup_of(const Subgroup& other) const {
    if (!same_group(parent_, other.parent_)) return false;
    return std::all_of(members_.begin(), members_.end(), [&](std::size_t m) { return other.contains(m); });
  }

  std::vector<std::size_t> generators() const { return parent_->generating_set(members_); }

  // Representatives g_i of the right cosets H g_i partitioning `super`.
  std::vector<std::size_t> transversal_in(const Subgroup& super) const {
    if (!is_subgroup_of(super)) throw Error(ErrorCode::SubgroupMismatch, "not contained in the given subgroup");
    std::vector<bool> covered(parent_->order());
    std::vector<std::size_t> reps;
    for (std::size_t g : super.members()) {
      if (covered[g]) continue;
      reps.push_back(g);
      for (std::size_t h : members_) covered[parent_->mul(h, g)] = true;
    }
    return reps;
  }
  std::vector<std::size_t> transversal() const { return transversal_in(whole(parent_)); }

  // Left coset g H as a sorted member list.
  std::vector<std::size_t> left_coset(std::size_t g) const {
    std::vector<std::size_t> c;
    for (std::size_t h : members_) c.push_back(parent_->mul(g, h));
    std::sort(c.begin(), c.end());
    return c;
  }

  // Representatives of the left cosets g H (smallest index of each).
  std::vector<std::size_t> left_transversal() const {
    std::vector<bool> covered(parent_->order());
    std::vector<std::size_t> reps;
    for (std::size_t g = 0; g < parent_->order(); ++g) {
      if (covered[g]) continue;
      reps.push_back(g);
      for (std::size_t h : members_) covered[parent_->mul(g, h)] = true;
    }
    return reps;
  }

  Subgroup conjugate(std::size_t g) const {
    std::vector<std::size_t> m;
    for (std::size_t x : members_) m.push_back(parent_->conjugate(g, x));
    std::sort(m.begin(), m.end());
    return Subgroup(parent_, std::move(m));
  }

  bool is_normal() const {
    for (std::size_t g = 0; g < parent_->order(); ++g)
      for (std::size_t x : members_)
        if (!contains(parent_->conjugate(g, x))) return false;
    return true;
  }

  // Subgroup generated by both (the product set H K when one is normal).
  Subgroup product(const Subgroup& other) const {
    std::vector<std::size_t> gens = generators();
    for (std::size_t g : other.generators()) gens.push_back(g);
    return generated_by(parent_, gens);
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return same_group(a.parent_, b.parent_) && a.members_ == b.members_;
  }

 private:
  Subgroup(GroupPtr parent, std::vector<std::size_t> members) : parent_(std::move(parent)), members_(std::move(members)) {
    mask_.assign(parent_->order(), false);
    for (std::size_t m : members_) mask_[m] = true;
  }

  GroupPtr parent_;
  std::vector<std::size_t> members_;
  std::vector<bool> mask_;
};

}  // namespace tatekit
