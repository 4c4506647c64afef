#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tatekit/int_matrix.hpp"

namespace tatekit {

// U * A * V == S with U, V unimodular and S diagonal, d_1 | d_2 | ... | d_rank,
// all d_i > 0, followed by zeros. U_inv is carried along so that quotient
// classes can be lifted back to the original lattice.
struct SmithForm {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  IntMatrix U_inv;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector d;
    const std::size_t k = std::min(S.rows(), S.cols());
    d.reserve(k);
    for (std::size_t i = 0; i < k; ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

// Smallest nonzero |entry| in the trailing submatrix starting at (t, t);
// ties go to the lowest row-major index.
inline bool find_pivot(const IntMatrix& s, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j) {
      const Int& v = s(i, j);
      if (v == 0) continue;
      Int a = abs(v);
      if (!found || a < best) {
        found = true;
        best = std::move(a);
        pi = i;
        pj = j;
        if (best == 1) return true;
      }
    }
  return found;
}

}  // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithForm f{IntMatrix::identity(m), a, IntMatrix::identity(n), IntMatrix::identity(m), 0};
  IntMatrix& s = f.S;

  // Row operations are mirrored on U (same op) and U_inv (inverse op applied
  // on the right); column operations on V.
  auto row_add = [&](std::size_t dst, std::size_t src, const Int& c) {
    s.add_row_multiple(dst, src, c);
    f.U.add_row_multiple(dst, src, c);
    f.U_inv.add_column_multiple(src, dst, Int(-c));
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Int& c) {
    s.add_column_multiple(dst, src, c);
    f.V.add_column_multiple(dst, src, c);
  };

  const std::size_t limit = std::min(m, n);
  std::size_t t = 0;
  for (; t < limit; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!detail::find_pivot(s, t, pi, pj)) break;
    while (true) {
      s.swap_rows(t, pi);
      f.U.swap_rows(t, pi);
      f.U_inv.swap_columns(t, pi);
      s.swap_columns(t, pj);
      f.V.swap_columns(t, pj);

      bool clean = true;
      const Int pivot = s(t, t);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s(i, t) == 0) continue;
        Int q = s(i, t) / pivot;
        row_add(i, t, Int(-q));
        if (s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s(t, j) == 0) continue;
        Int q = s(t, j) / pivot;
        col_add(j, t, Int(-q));
        if (s(t, j) != 0) clean = false;
      }
      if (!clean) {
        detail::find_pivot(s, t, pi, pj);
        continue;
      }
      // Row and column t are clear; enforce divisibility of the remainder.
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (s(i, j) % pivot != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      row_add(t, bad_row, Int(1));
      pi = t;
      pj = t;
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      f.U.negate_row(t);
      f.U_inv.negate_column(t);
    }
  }
  f.rank = t;
  return f;
}

// Basis (as columns) of the integer kernel {x : A x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& a) {
  if (a.rows() == 0) return IntMatrix::identity(a.cols());
  SmithForm f = smith_normal_form(a);
  std::vector<std::size_t> cols;
  for (std::size_t j = f.rank; j < a.cols(); ++j) cols.push_back(j);
  return f.V.select_columns(cols);
}

// Basis (as columns) of the lattice spanned by the columns of G.
inline IntMatrix column_span_basis(const IntMatrix& g) {
  if (g.cols() == 0) return IntMatrix(g.rows(), 0);
  SmithForm f = smith_normal_form(g);
  IntMatrix b(g.rows(), f.rank);
  for (std::size_t j = 0; j < f.rank; ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) b(i, j) = f.U_inv(i, j) * f.S(j, j);
  return b;
}

// Solves B z = x exactly for a basis matrix B (full column rank).
class LatticeSolver {
 public:
  LatticeSolver() = default;
  explicit LatticeSolver(const IntMatrix& basis) : smith_(smith_normal_form(basis)), cols_(basis.cols()) {
    if (smith_.rank != cols_) throw Error(ErrorCode::InvalidArgument, "lattice basis is not of full column rank");
  }

  std::optional<IntVector> solve(std::span<const Int> x) const {
    IntVector y = smith_.U.apply(x);
    IntVector w(cols_);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i < cols_) {
        const Int& d = smith_.S(i, i);
        if (y[i] % d != 0) return std::nullopt;
        w[i] = y[i] / d;
      } else if (y[i] != 0) {
        return std::nullopt;
      }
    }
    return smith_.V.apply(w);
  }

 private:
  SmithForm smith_;
  std::size_t cols_ = 0;
};

// Solves B C = R column by column; throws if some column of R leaves col(B).
inline IntMatrix solve_columns(const IntMatrix& basis, const IntMatrix& rhs) {
  LatticeSolver solver(basis);
  IntMatrix c(basis.cols(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    auto z = solver.solve(rhs.column(j));
    if (!z) throw Error(ErrorCode::NotInSubgroup, "vector outside the lattice spanned by the basis");
    c.set_column(j, *z);
  }
  return c;
}

}  // namespace tatekit
