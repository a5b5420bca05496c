#ifndef CORKFORGE_HANDLEBODY_HPP
#define CORKFORGE_HANDLEBODY_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corkforge/matrix.hpp"

namespace corkforge {

enum class Role { basis, extra, auxiliary_plus, auxiliary_minus };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::basis: return "basis";
    case Role::extra: return "extra";
    case Role::auxiliary_plus: return "auxiliary_plus";
    case Role::auxiliary_minus: return "auxiliary_minus";
  }
  return "extra";
}

inline std::optional<Role> role_from_name(const std::string& s) {
  if (s == "basis") return Role::basis;
  if (s == "extra") return Role::extra;
  if (s == "auxiliary_plus") return Role::auxiliary_plus;
  if (s == "auxiliary_minus") return Role::auxiliary_minus;
  return std::nullopt;
}

/// A 2-handle record.  framing is the surgery coefficient; tb/rot are the
/// Thurston-Bennequin and rotation numbers of a Legendrian representative
/// (present together or not at all); run_over counts algebraic passes over
/// each 1-handle; genus, when present, certifies a smoothly embedded surface
/// for the handle's own class and therefore requires zero run_over.
struct TwoHandle {
  std::string id;
  Role role = Role::extra;
  Int framing = 0;
  std::optional<Int> tb;
  std::optional<Int> rot;
  IntVec run_over;
  std::optional<Int> genus;

  bool operator==(const TwoHandle&) const = default;

  bool has_legendrian() const { return tb.has_value() && rot.has_value(); }
};

enum class Provenance { input, prop_genus_shift, boundary_sum, stabilization };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::input: return "input";
    case Provenance::prop_genus_shift: return "prop_genus_shift";
    case Provenance::boundary_sum: return "boundary_sum";
    case Provenance::stabilization: return "stabilization";
  }
  return "input";
}

inline std::optional<Provenance> provenance_from_name(const std::string& s) {
  if (s == "input") return Provenance::input;
  if (s == "prop_genus_shift") return Provenance::prop_genus_shift;
  if (s == "boundary_sum") return Provenance::boundary_sum;
  if (s == "stabilization") return Provenance::stabilization;
  return std::nullopt;
}

/// (class, genus) pair: cls is an integer vector indexed by the 2-handles,
/// required to lie in ker(boundary) so that it names an H_2 class; genus
/// certifies a smoothly embedded representative of that class.
struct GenusWitness {
  IntVec cls;
  Int genus = 0;
  Provenance provenance = Provenance::input;

  bool operator==(const GenusWitness&) const = default;
};

/// Abstract 2-handlebody: one 0-handle, `one_handles` 1-handles, and the
/// listed 2-handles.  linking is the symmetric linking matrix of the
/// attaching link with framings on the diagonal.  `witnesses` holds genus
/// witnesses produced during construction (fresh inputs carry genus data on
/// the handles themselves); it is bookkeeping, not part of the JSON schema,
/// and is regenerated exactly by log replay.
struct Handlebody {
  std::size_t one_handles = 0;
  std::vector<TwoHandle> handles;
  Matrix linking;
  std::vector<GenusWitness> witnesses;

  bool operator==(const Handlebody&) const = default;

  std::size_t handle_count() const { return handles.size(); }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < handles.size(); ++i)
      if (handles[i].id == id) return i;
    return std::nullopt;
  }

  const TwoHandle& handle(const std::string& id) const {
    const auto idx = index_of(id);
    if (!idx) throw std::invalid_argument("no 2-handle with id '" + id + "'");
    return handles[*idx];
  }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Boundary map C_2 -> C_1 of the handle chain complex: one row per
/// 1-handle, one column per 2-handle, entries the algebraic run_over counts.
inline Matrix boundary_matrix(const Handlebody& h) {
  Matrix d(h.one_handles, h.handle_count());
  for (std::size_t j = 0; j < h.handle_count(); ++j)
    for (std::size_t i = 0; i < h.one_handles && i < h.handles[j].run_over.size(); ++i)
      d(i, j) = h.handles[j].run_over[i];
  return d;
}

/// Linking matrix of the boundary surgery diagram: dotted circles traded
/// for 0-framed unknots.  Block form [[0, R], [R^T, Q]] where R is the
/// run_over block and Q the 2-handle linking matrix.
inline Matrix surgery_matrix(const Handlebody& h) {
  const std::size_t s = h.one_handles;
  const std::size_t c = h.handle_count();
  const Matrix r = boundary_matrix(h);
  Matrix L(s + c, s + c);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      L(i, s + j) = r(i, j);
      L(s + j, i) = r(i, j);
    }
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) L(s + i, s + j) = h.linking(i, j);
  return L;
}

/// Structural and Legendrian sanity of a handlebody record.  Collects every
/// violation instead of stopping at the first, so reports are actionable.
inline ValidationReport validate(const Handlebody& h) {
  ValidationReport rep;
  const std::size_t c = h.handle_count();

  if (h.linking.rows() != c || h.linking.cols() != c)
    rep.violations.push_back("linking matrix must be " + std::to_string(c) + "x" +
                             std::to_string(c));
  else {
    if (!h.linking.is_symmetric()) rep.violations.push_back("linking matrix is not symmetric");
    for (std::size_t i = 0; i < c; ++i)
      if (h.linking(i, i) != h.handles[i].framing)
        rep.violations.push_back("linking diagonal of '" + h.handles[i].id +
                                 "' differs from its framing");
  }

  std::set<std::string> seen;
  for (const TwoHandle& k : h.handles) {
    if (k.id.empty()) rep.violations.push_back("2-handle with empty id");
    if (!seen.insert(k.id).second)
      rep.violations.push_back("duplicate 2-handle id '" + k.id + "'");
    if (k.run_over.size() != h.one_handles)
      rep.violations.push_back("run_over of '" + k.id + "' has wrong length");
    if (k.tb.has_value() != k.rot.has_value())
      rep.violations.push_back("'" + k.id + "' must carry tb and rot together");
    if (k.genus) {
      if (*k.genus < 0) rep.violations.push_back("negative genus on '" + k.id + "'");
      if (!is_zero_vector(k.run_over))
        rep.violations.push_back("genus witness on '" + k.id +
                                 "' requires zero run_over");
      // slice-Bennequin admissibility: tb + |rot| <= 2g - 1
      if (k.has_legendrian() && *k.tb + abs_int(*k.rot) > 2 * *k.genus - 1)
        rep.violations.push_back("'" + k.id + "' violates tb + |rot| <= 2*genus - 1");
    }
  }

  for (const GenusWitness& w : h.witnesses) {
    if (w.cls.size() != c) {
      rep.violations.push_back("witness class vector has wrong length");
      continue;
    }
    if (w.genus < 0) rep.violations.push_back("negative witness genus");
    if (!is_zero_vector(boundary_matrix(h) * w.cls))
      rep.violations.push_back("witness class does not lie in ker(boundary)");
  }

  return rep;
}

inline void require_valid(const Handlebody& h) {
  const ValidationReport rep = validate(h);
  if (!rep.ok()) throw std::invalid_argument("invalid handlebody: " + rep.violations.front());
}

/// All genus witnesses of h: the explicit list plus one witness per handle
/// that carries its own genus field (class = that handle's unit vector).
inline std::vector<GenusWitness> all_witnesses(const Handlebody& h) {
  std::vector<GenusWitness> out;
  for (std::size_t i = 0; i < h.handle_count(); ++i) {
    if (!h.handles[i].genus) continue;
    GenusWitness w;
    w.cls.assign(h.handle_count(), 0);
    w.cls[i] = 1;
    w.genus = *h.handles[i].genus;
    w.provenance = Provenance::input;
    out.push_back(w);
  }
  out.insert(out.end(), h.witnesses.begin(), h.witnesses.end());
  return out;
}

}  // namespace corkforge

#endif  // CORKFORGE_HANDLEBODY_HPP
