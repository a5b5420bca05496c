#ifndef CORKFORGE_LEGENDRIAN_HPP
#define CORKFORGE_LEGENDRIAN_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corkforge/homology.hpp"

namespace corkforge {

/// Zig-zag stabilization of a Legendrian representative: t stabilizations,
/// d of them upward.  tb drops by t, rot moves by 2d - t.  t = 0 (with
/// d = 0) is the identity.
inline TwoHandle zigzag(const TwoHandle& k, const Int& t, const Int& d) {
  if (!k.has_legendrian())
    throw std::invalid_argument("zigzag on '" + k.id + "' without Legendrian data");
  if (t < 0 || d < 0 || d > t) throw std::invalid_argument("zigzag requires 0 <= d <= t");
  TwoHandle out = k;
  out.tb = *k.tb - t;
  out.rot = *k.rot + 2 * d - t;
  return out;
}

inline Handlebody zigzag_handle(const Handlebody& h, const std::string& id, const Int& t,
                                const Int& d) {
  const auto idx = h.index_of(id);
  if (!idx) throw std::invalid_argument("zigzag target '" + id + "' not found");
  Handlebody out = h;
  out.handles[*idx] = zigzag(out.handles[*idx], t, d);
  return out;
}

/// Parameters (t, d) of the zig-zag taking (tb, rot) to (tb_to, rot_to).
/// Throws when the target is unreachable (tb_to > tb, parity mismatch, or
/// |rot_to - rot| > tb - tb_to).
inline std::pair<Int, Int> zigzag_to(const Int& tb, const Int& rot, const Int& tb_to,
                                     const Int& rot_to) {
  const Int t = tb - tb_to;
  if (t < 0) throw std::invalid_argument("zig-zags cannot raise tb");
  const Int delta = rot_to - rot + t;
  if (delta % 2 != 0 || delta < 0 || delta > 2 * t)
    throw std::invalid_argument("rotation target unreachable by zig-zags");
  return {t, delta / 2};
}

/// Stein handlebody: every 2-handle carries Legendrian data and is attached
/// with framing tb - 1.
inline bool is_stein_handlebody(const Handlebody& h) {
  for (const TwoHandle& k : h.handles) {
    if (!k.has_legendrian()) return false;
    if (k.framing != *k.tb - 1) return false;
  }
  return true;
}

/// Good Stein handlebody: Stein, and the basis-role handles avoid every
/// 1-handle and span H_2.  Spanning is decided by kernel membership: the
/// basis handles' unit classes generate ker(boundary) exactly when the
/// canonical kernel basis is supported on the basis columns and has full
/// count.
inline bool is_good_stein(const Handlebody& h) {
  if (!is_stein_handlebody(h)) return false;
  if (!validate(h).ok()) return false;
  std::set<std::size_t> basis_cols;
  for (std::size_t i = 0; i < h.handle_count(); ++i)
    if (h.handles[i].role == Role::basis) {
      if (!is_zero_vector(h.handles[i].run_over)) return false;
      basis_cols.insert(i);
    }
  const Matrix basis = homology_basis(h);
  if (basis.rows() != basis_cols.size()) return false;
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.cols(); ++j)
      if (basis(i, j) != 0 && !basis_cols.count(j)) return false;
  return true;
}

/// A choice of Stein structure on a constructed family member: one sign per
/// unfinished auxiliary handle (tb = framing + 2), deciding the direction
/// of its final zig-zag.  The sign is the rotation number the handle ends
/// up with.
struct SteinStructureChoice {
  std::map<std::string, int> delta_signs;

  bool operator==(const SteinStructureChoice&) const = default;
};

/// Auxiliary handles still awaiting their finishing zig-zag.
inline std::vector<std::string> pending_finishing_ids(const Handlebody& h) {
  std::vector<std::string> out;
  for (const TwoHandle& k : h.handles)
    if (k.role == Role::auxiliary_plus && k.has_legendrian() && *k.tb == k.framing + 2)
      out.push_back(k.id);
  return out;
}

/// Apply the finishing zig-zags of a choice.  The keys must be exactly the
/// pending auxiliary handles; each gets one stabilization, landing on
/// rot = sign.
inline Handlebody apply_choice(const Handlebody& h, const SteinStructureChoice& choice) {
  const std::vector<std::string> pending = pending_finishing_ids(h);
  std::set<std::string> pending_set(pending.begin(), pending.end());
  for (const auto& [id, sign] : choice.delta_signs) {
    if (sign != 1 && sign != -1)
      throw std::invalid_argument("delta sign for '" + id + "' must be +1 or -1");
    if (!pending_set.erase(id))
      throw std::invalid_argument("choice names '" + id + "', which is not awaiting finishing");
  }
  if (!pending_set.empty())
    throw std::invalid_argument("choice is incomplete: '" + *pending_set.begin() +
                                "' still awaits its finishing zig-zag");
  Handlebody out = h;
  for (const auto& [id, sign] : choice.delta_signs)
    out = zigzag_handle(out, id, 1, sign > 0 ? 1 : 0);
  return out;
}

/// Evaluation of c_1 of the chosen Stein structure against a class given in
/// handle coordinates: sum of coefficient * rot over the 2-handles.
inline Int c1_pairing(const Handlebody& h, const SteinStructureChoice& choice, const IntVec& a) {
  if (a.size() != h.handle_count())
    throw std::invalid_argument("class vector length does not match handle count");
  const Handlebody finished = apply_choice(h, choice);
  if (!is_stein_handlebody(finished))
    throw std::invalid_argument("c1 pairing requires a Stein handlebody after finishing");
  Int acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * *finished.handles[i].rot;
  return acc;
}

/// Construction data a family member carries so that Stein structures can
/// be chosen against target classes.  Index 0 is the distinguished handle;
/// delta_ids[j] is empty when q_j = 0 (no auxiliary handle exists).
struct FamilyMemberContext {
  Int p_i = 0;
  Int t0 = 0, m0 = 0, r0 = 0;
  std::size_t k = 0;
  IntVec q;                                ///< q_0..q_l
  std::vector<std::string> basis_ids;      ///< ids of K_0..K_k
  std::vector<std::string> delta_ids;      ///< size k+1, [0] unused
  std::vector<IntVec> basis_classes;       ///< v_j in handle coordinates

  /// Closed form of |<c_1, v_0>|: 2 p_i + (t_0 - 1) - m_0 + |r_0|.
  Int pairing_magnitude() const { return 2 * p_i + (t0 - 1) - m0 + abs_int(r0); }
};

struct MaxPairingResult {
  Int bound = 0;
  SteinStructureChoice choice;
};

/// Largest guaranteed |<c_1, a>| over the member's Stein structures, for a
/// given in the member's distinguished basis.  Returns the lower bound
/// |a_0| (2p_i + (t_0-1) - m_0 + |r_0|) + sum_j |a_j qhat_j| together with
/// a choice of finishing signs realizing it (qhat_j = q_j - 1 when
/// q_j != 0, else 0).  Exact for k = 0.
inline MaxPairingResult max_pairing(const Handlebody& h, const FamilyMemberContext& ctx,
                                    const IntVec& a) {
  if (a.size() != ctx.k + 1)
    throw std::invalid_argument("coefficient vector must have one entry per basis class");
  MaxPairingResult res;
  res.bound = abs_int(a[0]) * ctx.pairing_magnitude();
  for (std::size_t j = 1; j <= ctx.k; ++j) {
    const Int qhat = ctx.q[j] != 0 ? Int(ctx.q[j] - 1) : Int(0);
    res.bound += abs_int(a[j] * qhat);
  }

  // The v_0 term is fixed by construction; align every free delta sign with
  // it so the terms add constructively.
  Int t0_term = 0;
  const IntVec& v0 = ctx.basis_classes.at(0);
  for (std::size_t c = 0; c < v0.size(); ++c) {
    if (v0[c] == 0) continue;
    const TwoHandle& hd = h.handles.at(c);
    if (!hd.rot) throw std::invalid_argument("distinguished class touches a handle without rot");
    t0_term += a[0] * v0[c] * *hd.rot;
  }
  const int s = t0_term >= 0 ? 1 : -1;

  for (std::size_t j = 1; j <= ctx.k; ++j) {
    if (ctx.delta_ids[j].empty()) continue;  // q_j = 0: nothing pending
    const TwoHandle& kj = h.handle(ctx.basis_ids[j]);
    if (!kj.rot) throw std::invalid_argument("basis handle without rot");
    // term(sigma) = a_j (rot(K_j) - q_j sigma); pick sigma aligning with s
    const Int plus = a[j] * (*kj.rot - ctx.q[j]);
    const Int minus = a[j] * (*kj.rot + ctx.q[j]);
    res.choice.delta_signs[ctx.delta_ids[j]] = s * plus > s * minus ? 1 : -1;
  }
  return res;
}

/// Adjunction inequality check for a class of the given square, pairing
/// magnitude and genus: square + |pairing| <= 2 genus - 2.
inline bool adjunction_check(const Int& square, const Int& pairing_abs, const Int& genus) {
  return square + pairing_abs <= 2 * genus - 2;
}

/// Evidence that a handlebody admits no Stein structure: a nonzero second
/// homology class carried by a smoothly embedded sphere of square >= -1
/// violates the adjunction inequality for every c_1.  When the negated
/// square is also >= -1 (i.e. |square| <= 1) the obstruction applies to
/// both orientations.
struct SteinObstruction {
  GenusWitness witness;
  Int square = 0;
  bool any_orientation = false;
};

inline std::optional<SteinObstruction> stein_obstruction(
    const Handlebody& h, const std::vector<GenusWitness>& witnesses) {
  const Matrix d = boundary_matrix(h);
  for (const GenusWitness& w : witnesses) {
    if (w.genus != 0) continue;
    if (w.cls.size() != h.handle_count()) continue;
    if (is_zero_vector(w.cls)) continue;
    if (!is_zero_vector(d * w.cls)) continue;
    const Int square = bilinear(w.cls, h.linking, w.cls);
    if (square >= -1) {
      SteinObstruction obs;
      obs.witness = w;
      obs.square = square;
      obs.any_orientation = square <= 1;
      return obs;
    }
  }
  return std::nullopt;
}

/// c_1 squared for a b_2 = 1 manifold: pairing^2 / square.
inline Rat c1_squared_b2one(const Int& pairing, const Int& square) {
  if (square == 0)
    throw std::invalid_argument("c_1 squared is undefined for a zero intersection form");
  return Rat(pairing * pairing) / Rat(square);
}

/// Invariants of the induced contact structure on the boundary.
struct ContactInvariant {
  Rat d3;
  Rat c1_squared;
  Int euler = 0;
  Int signature = 0;

  bool operator==(const ContactInvariant&) const = default;
};

/// d_3 invariant of the contact boundary of a Stein handlebody with
/// b_2 = 1 and nonzero intersection form:
///   d_3 = (c_1^2 - 2 euler - 3 signature) / 4,  c_1^2 = pairing^2 / square.
inline ContactInvariant d3(const Handlebody& h, const Int& pairing) {
  if (!is_stein_handlebody(h))
    throw std::invalid_argument("d_3 requires a Stein handlebody");
  const HomologyProfile prof = homology(h);
  if (prof.b2 != 1) throw std::invalid_argument("d_3 computation requires b_2 = 1");
  const Int square = prof.intersection_matrix(0, 0);
  ContactInvariant ci;
  ci.c1_squared = c1_squared_b2one(pairing, square);
  ci.euler = prof.euler;
  ci.signature = prof.signature;
  ci.d3 = (ci.c1_squared - 2 * Rat(prof.euler) - 3 * Rat(prof.signature)) / 4;
  return ci;
}

}  // namespace corkforge

#endif  // CORKFORGE_LEGENDRIAN_HPP
