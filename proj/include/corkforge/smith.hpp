#ifndef CORKFORGE_SMITH_HPP
#define CORKFORGE_SMITH_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "corkforge/matrix.hpp"

namespace corkforge {

/// Result of a Smith decomposition: u * input * v == d with u, v unimodular
/// and d diagonal, d(0,0) | d(1,1) | ... , all diagonal entries >= 0.
struct SmithResult {
  Matrix u, d, v;

  std::size_t rank() const {
    std::size_t r = 0;
    const std::size_t n = d.rows() < d.cols() ? d.rows() : d.cols();
    for (std::size_t i = 0; i < n; ++i)
      if (d(i, i) != 0) ++r;
    return r;
  }
};

/// Smith normal form over Z.
///
/// Classic pivot-and-reduce elimination: at each step the nonzero entry of
/// smallest absolute value in the trailing block is moved to the pivot seat
/// (ties broken by lowest row, then lowest column, so the routine is a pure
/// function of its input), the pivot row and column are cleared by Euclidean
/// steps, and the pivot is forced to divide the whole trailing block before
/// moving on.  That last step makes the divisibility chain automatic.
inline SmithResult smith_normal_form(const Matrix& m) {
  SmithResult res{Matrix::identity(m.rows()), m, Matrix::identity(m.cols())};
  Matrix& d = res.d;
  Matrix& u = res.u;
  Matrix& v = res.v;
  const std::size_t limit = d.rows() < d.cols() ? d.rows() : d.cols();

  bool exhausted = false;
  for (std::size_t t = 0; t < limit && !exhausted; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block -> pivot seat (t, t).
      bool found = false;
      std::size_t pi = t, pj = t;
      Int best = 0;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
          if (d(i, j) == 0) continue;
          const Int a = abs_int(d(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) {  // trailing block zero; done
        exhausted = true;
        break;
      }

      d.swap_rows(t, pi);
      u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      v.swap_cols(t, pj);

      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        const Int q = d(i, t) / d(t, t);  // truncated: remainder shrinks
        if (q != 0) {
          d.add_row_multiple(i, t, -q);
          u.add_row_multiple(i, t, -q);
        }
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        const Int q = d(t, j) / d(t, t);
        if (q != 0) {
          d.add_col_multiple(j, t, -q);
          v.add_col_multiple(j, t, -q);
        }
      }

      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows() && clean; ++i)
        if (d(i, t) != 0) clean = false;
      for (std::size_t j = t + 1; j < d.cols() && clean; ++j)
        if (d(t, j) != 0) clean = false;
      if (!clean) continue;  // leftovers are smaller than the old pivot

      // Force the pivot to divide everything that remains.
      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols() && divides; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row_multiple(t, i, 1);
            u.add_row_multiple(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
  }

  for (std::size_t t = 0; t < limit; ++t)
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  return res;
}

/// Invariant factors of coker(m) = Z^rows / im(m): the diagonal entries
/// different from 1 in chain order, followed by one 0 per free rank.
inline IntVec cokernel_invariant_factors(const Matrix& m) {
  const SmithResult s = smith_normal_form(m);
  IntVec factors;
  const std::size_t r = s.rank();
  for (std::size_t i = 0; i < r; ++i)
    if (s.d(i, i) != 1) factors.push_back(s.d(i, i));
  for (std::size_t i = r; i < m.rows(); ++i) factors.push_back(0);
  return factors;
}

/// Row-style Hermite normal form.  Zero rows are dropped; pivots are
/// positive, appear in strictly increasing column order, and every entry
/// above a pivot is reduced into [0, pivot).  The result is the unique
/// canonical basis of the row lattice, so two generating sets of the same
/// lattice produce identical matrices.
inline Matrix hnf_rows(const Matrix& input) {
  Matrix b = input;
  std::size_t row = 0;
  for (std::size_t col = 0; col < b.cols() && row < b.rows(); ++col) {
    // Gather the column below `row` into a single nonzero entry.
    for (;;) {
      bool found = false;
      std::size_t pi = row;
      Int best = 0;
      for (std::size_t i = row; i < b.rows(); ++i) {
        if (b(i, col) == 0) continue;
        const Int a = abs_int(b(i, col));
        if (!found || a < best) {
          found = true;
          best = a;
          pi = i;
        }
      }
      if (!found) break;
      b.swap_rows(row, pi);
      bool done = true;
      for (std::size_t i = row + 1; i < b.rows(); ++i) {
        if (b(i, col) == 0) continue;
        const Int q = b(i, col) / b(row, col);
        b.add_row_multiple(i, row, -q);
        if (b(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (b(row, col) == 0) continue;
    if (b(row, col) < 0) b.negate_row(row);
    for (std::size_t i = 0; i < row; ++i) {
      // floor division so entries above land in [0, pivot)
      Int q = b(i, col) / b(row, col);
      if (b(i, col) % b(row, col) < 0) q -= 1;
      if (q != 0) b.add_row_multiple(i, row, -q);
    }
    ++row;
  }

  Matrix out(row, b.cols());
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = b(i, j);
  return out;
}

/// Canonical integer basis of ker(m) = { x in Z^cols : m x = 0 }, returned
/// as rows in Hermite normal form.  The kernel of an integer matrix is a
/// saturated sublattice, so this basis is canonical: it depends only on the
/// kernel itself, not on the elimination path.
inline Matrix kernel_lattice_basis(const Matrix& m) {
  const SmithResult s = smith_normal_form(m);
  const std::size_t r = s.rank();
  Matrix gens(m.cols() - r, m.cols());
  for (std::size_t idx = r; idx < m.cols(); ++idx)
    for (std::size_t j = 0; j < m.cols(); ++j) gens(idx - r, j) = s.v(j, idx);
  return hnf_rows(gens);
}

/// Solve a x = b over the integers.  Returns std::nullopt when no integer
/// solution exists.  When ker(a) = 0 the solution is unique.
inline std::optional<IntVec> integer_solve(const Matrix& a, const IntVec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("integer_solve shape mismatch");
  const SmithResult s = smith_normal_form(a);
  const IntVec ub = s.u * b;
  const std::size_t r = s.rank();
  IntVec z(a.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < r) {
      if (ub[i] % s.d(i, i) != 0) return std::nullopt;
      z[i] = ub[i] / s.d(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v * z;
}

/// Signature of a symmetric integer matrix, computed exactly over Q by
/// congruence diagonalization.  A zero diagonal block with a nonzero
/// off-diagonal entry is handled by the hyperbolic trick (add row+column j
/// into i, which makes the (i,i) entry 2*m(i,j) != 0).
inline Int signature_of_symmetric(const Matrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("signature of non-symmetric matrix");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rat>> q(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = Rat(m(i, j));

  Int pos = 0, neg = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (q[t][t] == 0) {
      std::size_t pivot = n;
      for (std::size_t i = t + 1; i < n && pivot == n; ++i)
        if (q[i][i] != 0) pivot = i;
      if (pivot != n) {
        std::swap(q[t], q[pivot]);
        for (std::size_t i = 0; i < n; ++i) std::swap(q[i][t], q[i][pivot]);
      } else {
        std::size_t mate = n;
        for (std::size_t j = t + 1; j < n && mate == n; ++j)
          if (q[t][j] != 0) mate = j;
        if (mate == n) continue;  // row is zero from t on: null direction
        for (std::size_t c = 0; c < n; ++c) q[t][c] += q[mate][c];
        for (std::size_t r2 = 0; r2 < n; ++r2) q[r2][t] += q[r2][mate];
      }
    }
    const Rat d = q[t][t];
    if (d > 0)
      ++pos;
    else
      ++neg;
    for (std::size_t i = t + 1; i < n; ++i) {
      if (q[i][t] == 0) continue;
      const Rat f = q[i][t] / d;
      for (std::size_t c = 0; c < n; ++c) q[i][c] -= f * q[t][c];
      for (std::size_t r2 = 0; r2 < n; ++r2) q[r2][i] -= f * q[r2][t];
    }
  }
  return pos - neg;
}

}  // namespace corkforge

#endif  // CORKFORGE_SMITH_HPP
