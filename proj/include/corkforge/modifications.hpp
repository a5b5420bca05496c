#ifndef CORKFORGE_MODIFICATIONS_HPP
#define CORKFORGE_MODIFICATIONS_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corkforge/legendrian.hpp"

namespace corkforge {

enum class ModKind { w_plus, w_minus, zigzag, boundary_sum, swap_sign };

inline std::string mod_kind_name(ModKind k) {
  switch (k) {
    case ModKind::w_plus: return "w_plus";
    case ModKind::w_minus: return "w_minus";
    case ModKind::zigzag: return "zigzag";
    case ModKind::boundary_sum: return "boundary_sum";
    case ModKind::swap_sign: return "swap_sign";
  }
  throw std::logic_error("unreachable modification kind");
}

inline ModKind mod_kind_from_name(const std::string& s) {
  if (s == "w_plus") return ModKind::w_plus;
  if (s == "w_minus") return ModKind::w_minus;
  if (s == "zigzag") return ModKind::zigzag;
  if (s == "boundary_sum") return ModKind::boundary_sum;
  if (s == "swap_sign") return ModKind::swap_sign;
  throw std::invalid_argument("unknown modification kind '" + s + "'");
}

/// One replayable step.  W-moves use p; zig-zags use (t, d).  The created_*
/// fields are provenance bookkeeping filled during application; they are
/// derived data and do not take part in equality or serialization.
struct ModificationRecord {
  ModKind kind = ModKind::w_minus;
  std::string target;
  Int p = 0;
  Int t = 0, d = 0;
  std::optional<std::size_t> created_one_handle;
  std::optional<std::string> created_aux_id;

  bool operator==(const ModificationRecord& o) const {
    return kind == o.kind && target == o.target && p == o.p && t == o.t && d == o.d;
  }
};

/// Replayable history: applying the records to the base reproduces the
/// current handlebody bit-exactly.
struct ModificationLog {
  Handlebody base;
  std::vector<ModificationRecord> records;

  bool operator==(const ModificationLog&) const = default;
};

/// Next free auxiliary-handle id for the target: "{target}#aux{n}" with n
/// the number of existing handles already using the prefix.
inline std::string aux_id_for(const Handlebody& h, const std::string& target) {
  const std::string prefix = target + "#aux";
  std::size_t n = 0;
  for (const TwoHandle& k : h.handles)
    if (k.id.rfind(prefix, 0) == 0) ++n;
  return prefix + std::to_string(n);
}

namespace detail {

/// Shared layout work of both W-moves: append a 1-handle and the auxiliary
/// 2-handle gamma (zero linking row, running once over the new 1-handle),
/// zero-extend every other run_over vector and every witness class.
/// Returns the index of the new 2-handle.
inline std::size_t append_aux(Handlebody& h, const std::string& aux_id, Role role, const Int& tb,
                              const Int& rot) {
  const std::size_t s = h.one_handles;
  const std::size_t c = h.handle_count();
  h.one_handles = s + 1;
  for (TwoHandle& k : h.handles) k.run_over.push_back(0);

  TwoHandle gamma;
  gamma.id = aux_id;
  gamma.role = role;
  gamma.framing = 0;
  gamma.tb = tb;
  gamma.rot = rot;
  gamma.run_over.assign(s + 1, 0);
  gamma.run_over[s] = 1;
  h.handles.push_back(gamma);

  Matrix linking(c + 1, c + 1);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) linking(i, j) = h.linking(i, j);
  h.linking = linking;

  for (GenusWitness& w : h.witnesses) w.cls.push_back(0);
  return c;
}

inline std::size_t require_w_target(const Handlebody& h, const std::string& target, const Int& p) {
  if (p < 1) throw std::invalid_argument("W-modification requires p >= 1");
  const auto idx = h.index_of(target);
  if (!idx) throw std::invalid_argument("W-modification target '" + target + "' not found");
  if (!h.handles[*idx].has_legendrian())
    throw std::invalid_argument("W-modification target '" + target + "' lacks Legendrian data");
  return *idx;
}

}  // namespace detail

/// W+(p)-modification: the target knot gains p passes over a new 1-handle,
/// raising tb by p while rot and framing stay put; the auxiliary handle
/// gamma (framing 0, tb 2, rot 0) runs over the new 1-handle once.  The old
/// target core equals target - p*gamma in the new handle basis, so every
/// stored witness class gains a gamma-coordinate -p * (its target
/// coefficient) at unchanged genus, and a genus-g field on the target turns
/// into an explicit witness (target - p*gamma, g + p).
inline std::pair<Handlebody, ModificationRecord> w_plus(const Handlebody& h,
                                                        const std::string& target, const Int& p) {
  const std::size_t ti = detail::require_w_target(h, target, p);
  Handlebody out = h;
  const std::size_t new_one = out.one_handles;
  const std::optional<Int> old_genus = out.handles[ti].genus;

  TwoHandle& k = out.handles[ti];
  k.tb = *k.tb + p;
  k.genus.reset();

  const std::string aux = aux_id_for(out, target);
  const std::size_t gi = detail::append_aux(out, aux, Role::auxiliary_plus, 2, 0);
  out.handles[ti].run_over[new_one] += p;

  for (GenusWitness& w : out.witnesses) w.cls[gi] = -p * w.cls[ti];
  if (old_genus) {
    GenusWitness w;
    w.cls.assign(out.handle_count(), 0);
    w.cls[ti] = 1;
    w.cls[gi] = -p;
    w.genus = *old_genus + p;
    w.provenance = Provenance::prop_genus_shift;
    out.witnesses.push_back(w);
  }

  ModificationRecord rec;
  rec.kind = ModKind::w_plus;
  rec.target = target;
  rec.p = p;
  rec.created_one_handle = new_one;
  rec.created_aux_id = aux;
  return {out, rec};
}

/// W-(p)-modification: the target's data (tb, rot, framing, run_over,
/// genus) is untouched; only the new 1-handle and the auxiliary handle
/// gamma (framing 0, tb 1, rot 1) are added, so gamma is attached with its
/// Stein framing.  Witness classes are zero-extended.
inline std::pair<Handlebody, ModificationRecord> w_minus(const Handlebody& h,
                                                         const std::string& target, const Int& p) {
  detail::require_w_target(h, target, p);
  Handlebody out = h;
  const std::size_t new_one = out.one_handles;
  const std::string aux = aux_id_for(out, target);
  detail::append_aux(out, aux, Role::auxiliary_minus, 1, 1);

  ModificationRecord rec;
  rec.kind = ModKind::w_minus;
  rec.target = target;
  rec.p = p;
  rec.created_one_handle = new_one;
  rec.created_aux_id = aux;
  return {out, rec};
}

inline ModificationRecord make_zigzag_record(const std::string& target, const Int& t,
                                             const Int& d) {
  ModificationRecord rec;
  rec.kind = ModKind::zigzag;
  rec.target = target;
  rec.t = t;
  rec.d = d;
  return rec;
}

/// Apply one record (the three replayable kinds), returning the new
/// handlebody and the record with provenance bookkeeping filled in.
inline std::pair<Handlebody, ModificationRecord> apply_record(const Handlebody& h,
                                                              const ModificationRecord& rec) {
  switch (rec.kind) {
    case ModKind::w_plus: return w_plus(h, rec.target, rec.p);
    case ModKind::w_minus: return w_minus(h, rec.target, rec.p);
    case ModKind::zigzag: {
      ModificationRecord out = rec;
      return {zigzag_handle(h, rec.target, rec.t, rec.d), out};
    }
    default:
      throw std::invalid_argument("record kind '" + mod_kind_name(rec.kind) +
                                  "' is not replayable");
  }
}

inline Handlebody replay(const ModificationLog& log) {
  Handlebody h = log.base;
  for (const ModificationRecord& rec : log.records) h = apply_record(h, rec).first;
  return h;
}

/// Toggle the W-move at the given record index (the cork twist) and replay.
inline std::pair<Handlebody, ModificationLog> swap_sign(const ModificationLog& log,
                                                        std::size_t index) {
  if (index >= log.records.size())
    throw std::invalid_argument("swap_sign record index out of range");
  ModificationLog out = log;
  ModificationRecord& rec = out.records[index];
  if (rec.kind == ModKind::w_plus)
    rec.kind = ModKind::w_minus;
  else if (rec.kind == ModKind::w_minus)
    rec.kind = ModKind::w_plus;
  else
    throw std::invalid_argument("swap_sign target record is not a W-modification");
  return {replay(out), out};
}

/// Boundary-connected sum: disjoint handle data over a shared 0-handle.
/// Right-hand ids are prefixed with "r." (repeatedly if needed) when they
/// collide with left-hand ids.  Witnesses carry over with re-indexed class
/// vectors.
inline Handlebody boundary_sum(const Handlebody& a, const Handlebody& b) {
  require_valid(a);
  require_valid(b);

  std::set<std::string> left_ids;
  for (const TwoHandle& k : a.handles) left_ids.insert(k.id);
  std::string prefix;
  for (bool collision = true; collision;) {
    collision = false;
    for (const TwoHandle& k : b.handles)
      if (left_ids.count(prefix + k.id)) {
        prefix = "r." + prefix;
        collision = true;
        break;
      }
  }

  Handlebody out;
  out.one_handles = a.one_handles + b.one_handles;
  const std::size_t ca = a.handle_count(), cb = b.handle_count();

  for (const TwoHandle& k : a.handles) {
    TwoHandle nk = k;
    nk.run_over.resize(a.one_handles + b.one_handles, 0);
    out.handles.push_back(nk);
  }
  for (const TwoHandle& k : b.handles) {
    TwoHandle nk = k;
    nk.id = prefix + k.id;
    nk.run_over.assign(a.one_handles + b.one_handles, 0);
    for (std::size_t i = 0; i < b.one_handles; ++i) nk.run_over[a.one_handles + i] = k.run_over[i];
    out.handles.push_back(nk);
  }

  out.linking = Matrix(ca + cb, ca + cb);
  for (std::size_t i = 0; i < ca; ++i)
    for (std::size_t j = 0; j < ca; ++j) out.linking(i, j) = a.linking(i, j);
  for (std::size_t i = 0; i < cb; ++i)
    for (std::size_t j = 0; j < cb; ++j) out.linking(ca + i, ca + j) = b.linking(i, j);

  for (const GenusWitness& w : a.witnesses) {
    GenusWitness nw = w;
    nw.cls.resize(ca + cb, 0);
    nw.provenance = Provenance::boundary_sum;
    out.witnesses.push_back(nw);
  }
  for (const GenusWitness& w : b.witnesses) {
    GenusWitness nw = w;
    nw.cls.assign(ca + cb, 0);
    for (std::size_t j = 0; j < cb; ++j) nw.cls[ca + j] = w.cls[j];
    nw.provenance = Provenance::boundary_sum;
    out.witnesses.push_back(nw);
  }
  return out;
}

enum class TietzeStep { add_cancelling_pair, remove_cancelling_pair };

inline std::string tietze_step_name(TietzeStep s) {
  return s == TietzeStep::add_cancelling_pair ? "add_cancelling_pair" : "remove_cancelling_pair";
}

/// Fundamental-group bookkeeping for a log: every W-move adds one generator
/// (the new 1-handle) together with one relator that kills it, because the
/// auxiliary handle runs over the new 1-handle exactly once.  The
/// certificate verifies that count on the replayed states.
struct TietzeCertificate {
  std::vector<TietzeStep> steps;
  std::string statement = "pi_1 preserved";
};

inline TietzeCertificate tietze_certificate(const ModificationLog& log) {
  TietzeCertificate cert;
  Handlebody h = log.base;
  for (const ModificationRecord& rec : log.records) {
    auto [next, applied] = apply_record(h, rec);
    if (rec.kind == ModKind::w_plus || rec.kind == ModKind::w_minus) {
      const TwoHandle& aux = next.handle(*applied.created_aux_id);
      const Int count = aux.run_over.at(*applied.created_one_handle);
      if (count != 1 && count != -1)
        throw std::logic_error("auxiliary handle does not cancel its 1-handle");
      cert.steps.push_back(TietzeStep::add_cancelling_pair);
    }
    h = next;
  }
  return cert;
}

}  // namespace corkforge

#endif  // CORKFORGE_MODIFICATIONS_HPP
