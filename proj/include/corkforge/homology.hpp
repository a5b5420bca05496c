#ifndef CORKFORGE_HOMOLOGY_HPP
#define CORKFORGE_HOMOLOGY_HPP

#include <cstddef>

#include "corkforge/handlebody.hpp"
#include "corkforge/smith.hpp"

namespace corkforge {

/// Complete algebraic-topology fingerprint of a 2-handlebody.  Two
/// handlebodies related by the moves in this library share this profile
/// exactly, field for field.
struct HomologyProfile {
  IntVec h1_invariant_factors;        ///< H_1(X): factors != 1, then 0s
  std::size_t b2 = 0;                 ///< rank of H_2(X)
  Matrix intersection_matrix;         ///< form on H_2 in the canonical kernel basis
  IntVec boundary_h1_invariant_factors;  ///< H_1 of the boundary 3-manifold
  std::size_t boundary_b1 = 0;        ///< zero factors of the surgery matrix
  Int euler = 1;
  Int signature = 0;

  bool operator==(const HomologyProfile&) const = default;
};

/// Canonical basis of H_2(X) = ker(boundary matrix), rows in Hermite normal
/// form with columns processed in handle order.  Deterministic: identical
/// inputs give identical matrices.
inline Matrix homology_basis(const Handlebody& h) {
  return kernel_lattice_basis(boundary_matrix(h));
}

/// Exact homology computation.  H_1 = coker(boundary) via Smith normal
/// form; H_2 = ker(boundary) with the intersection form restricted to the
/// canonical kernel basis; boundary + run_over data assemble the surgery
/// matrix of the boundary 3-manifold.  Throws on invalid input.
inline HomologyProfile homology(const Handlebody& h) {
  require_valid(h);
  HomologyProfile prof;
  const Matrix d = boundary_matrix(h);
  prof.h1_invariant_factors = cokernel_invariant_factors(d);

  const Matrix basis = kernel_lattice_basis(d);
  prof.b2 = basis.rows();
  prof.intersection_matrix = basis * h.linking * basis.transposed();

  const Matrix surg = surgery_matrix(h);
  prof.boundary_h1_invariant_factors = cokernel_invariant_factors(surg);
  prof.boundary_b1 = 0;
  for (const Int& f : prof.boundary_h1_invariant_factors)
    if (f == 0) ++prof.boundary_b1;

  prof.euler = Int(1) - Int(h.one_handles) + Int(h.handle_count());
  prof.signature = signature_of_symmetric(prof.intersection_matrix);
  return prof;
}

inline bool profiles_equal(const HomologyProfile& a, const HomologyProfile& b) {
  return a == b;
}

}  // namespace corkforge

#endif  // CORKFORGE_HOMOLOGY_HPP
