#ifndef CORKFORGE_PIPELINE_HPP
#define CORKFORGE_PIPELINE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corkforge/modifications.hpp"

namespace corkforge {

/// The numeric input of the construction, read off a handlebody with a
/// designated spanning basis: K_0..K_k are the designated handles (zero
/// run_over, genus g_j recorded), K_{k+1}..K_l the remaining 2-handles;
/// m_j = framing, t_j = tb, r_j = rot.
struct BasisData {
  std::size_t k = 0, l = 0;
  std::vector<std::string> ids;  ///< K_0..K_l
  IntVec m, t, r;                ///< indices 0..l
  IntVec g;                      ///< indices 0..k
  std::string k0;

  bool operator==(const BasisData&) const = default;
};

/// Read construction data off a valid handlebody.  The designated handles
/// must be exactly the basis-role handles, carry genus data, avoid all
/// 1-handles, and span the second homology; every 2-handle needs Legendrian
/// data.  Stein framings are not required here (non-Stein inputs are legal;
/// only the members built later are claimed Stein).
inline BasisData extract_data(const Handlebody& h, const std::vector<std::string>& basis_ids,
                              const std::string& k0) {
  require_valid(h);
  if (basis_ids.empty()) throw std::invalid_argument("no handles designated as basis");

  std::vector<std::string> ordered;
  ordered.push_back(k0);
  bool saw_k0 = false;
  std::set<std::string> seen;
  for (const std::string& id : basis_ids) {
    if (!seen.insert(id).second)
      throw std::invalid_argument("duplicate designated handle '" + id + "'");
    if (id == k0) {
      saw_k0 = true;
      continue;
    }
    ordered.push_back(id);
  }
  if (!saw_k0)
    throw std::invalid_argument("distinguished handle '" + k0 + "' is not among the basis ids");

  std::set<std::size_t> basis_cols;
  for (const std::string& id : ordered) {
    const auto idx = h.index_of(id);
    if (!idx) throw std::invalid_argument("designated handle '" + id + "' not found");
    const TwoHandle& kh = h.handles[*idx];
    if (kh.role != Role::basis)
      throw std::invalid_argument("designated handle '" + id + "' does not have the basis role");
    if (!is_zero_vector(kh.run_over))
      throw std::invalid_argument("designated handle '" + id + "' runs over a 1-handle");
    if (!kh.genus)
      throw std::invalid_argument("designated handle '" + id + "' carries no genus data");
    basis_cols.insert(*idx);
  }
  for (const TwoHandle& kh : h.handles) {
    if (kh.role == Role::basis && !basis_cols.count(*h.index_of(kh.id)))
      throw std::invalid_argument("basis-role handle '" + kh.id + "' is not designated");
    if (!kh.has_legendrian())
      throw std::invalid_argument("handle '" + kh.id + "' lacks Legendrian data");
  }

  const Matrix kernel = homology_basis(h);
  if (kernel.rows() != ordered.size())
    throw std::invalid_argument("designated handles do not span the second homology");
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (std::size_t j = 0; j < kernel.cols(); ++j)
      if (kernel(i, j) != 0 && !basis_cols.count(j))
        throw std::invalid_argument("designated handles do not span the second homology");

  BasisData data;
  data.k = ordered.size() - 1;
  data.l = h.handle_count() - 1;
  data.k0 = k0;
  data.ids = ordered;
  for (const TwoHandle& kh : h.handles)
    if (!basis_cols.count(*h.index_of(kh.id))) data.ids.push_back(kh.id);
  for (const std::string& id : data.ids) {
    const TwoHandle& kh = h.handle(id);
    data.m.push_back(kh.framing);
    data.t.push_back(*kh.tb);
    data.r.push_back(*kh.rot);
  }
  for (std::size_t j = 0; j <= data.k; ++j) data.g.push_back(*h.handle(data.ids[j]).genus);
  return data;
}

enum class Variant { standard, strengthened, nonstein };

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::standard: return "standard";
    case Variant::strengthened: return "strengthened";
    case Variant::nonstein: return "nonstein";
  }
  throw std::logic_error("unreachable variant");
}

inline Variant variant_from_name(const std::string& s) {
  if (s == "standard") return Variant::standard;
  if (s == "strengthened") return Variant::strengthened;
  if (s == "nonstein") return Variant::nonstein;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

/// One evaluated inequality: `name` is the generic formula, (i, j) pin the
/// instance, and lhs/rhs/op/ok record the numeric evaluation.
struct PlanCheck {
  std::string name;
  std::optional<long> i, j;
  Int lhs = 0, rhs = 0;
  std::string op;
  bool ok = false;
};

inline PlanCheck make_check(std::string name, std::optional<long> i, std::optional<long> j,
                            Int lhs, std::string op, Int rhs) {
  PlanCheck c;
  c.name = std::move(name);
  c.i = i;
  c.j = j;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  if (op == ">")
    c.ok = c.lhs > c.rhs;
  else if (op == ">=")
    c.ok = c.lhs >= c.rhs;
  else if (op == "==")
    c.ok = c.lhs == c.rhs;
  else if (op == "<")
    c.ok = c.lhs < c.rhs;
  else
    throw std::logic_error("unknown comparison operator '" + op + "'");
  c.op = std::move(op);
  return c;
}

/// The auxiliary-twist counts q_0..q_l and the modification sizes p_1..p_n,
/// with the full evaluated inequality evidence for the chosen variant.
struct SequencePlan {
  Variant variant = Variant::standard;
  IntVec q;  ///< q_0..q_l
  IntVec p;  ///< p_1..p_n
  std::vector<PlanCheck> evidence;

  std::size_t n() const { return p.size(); }

  /// p_i with the conventions p_{-1} = p_0 = 0.
  Int p_at(long i) const {
    if (i <= 0) return 0;
    return p.at(static_cast<std::size_t>(i) - 1);
  }

  /// M_i = 2 p_i + (t_0 - 1) - m_0 + |r_0|.
  Int pairing_magnitude(const BasisData& data, long i) const {
    return 2 * p_at(i) + (data.t[0] - 1) - data.m[0] + abs_int(data.r[0]);
  }
};

/// Minimal q: q_0 = 0 and q_j = max(0, m_j - t_j + 1, and for j <= k also
/// |r_j| + m_j - t_j + 1).
inline IntVec solve_q(const BasisData& data) {
  IntVec q(data.l + 1, 0);
  for (std::size_t j = 1; j <= data.l; ++j) {
    Int v = data.m[j] - data.t[j] + 1;
    if (j <= data.k) v = std::max(v, abs_int(data.r[j]) + data.m[j] - data.t[j] + 1);
    q[j] = std::max(Int(0), v);
  }
  return q;
}

/// Every inequality the chosen variant imposes on (q, p), each evaluated.
inline std::vector<PlanCheck> validate_plan(const BasisData& data, const SequencePlan& plan) {
  if (plan.q.size() != data.l + 1)
    throw std::invalid_argument("q vector length does not match the handle count");
  if (plan.p.empty()) throw std::invalid_argument("p vector is empty");
  const bool strong = plan.variant != Variant::standard;
  const long n = static_cast<long>(plan.n());
  const Int t0 = data.t[0], m0 = data.m[0], r0a = abs_int(data.r[0]), g0 = data.g[0];

  std::vector<PlanCheck> out;
  out.push_back(make_check("q_0 == 0", std::nullopt, 0, plan.q[0], "==", 0));
  for (std::size_t j = 1; j <= data.l; ++j) {
    out.push_back(make_check("q_j >= 0", std::nullopt, static_cast<long>(j), plan.q[j], ">=", 0));
    out.push_back(make_check("q_j + (t_j - 1) - m_j >= 0", std::nullopt, static_cast<long>(j),
                             plan.q[j] + data.t[j] - 1 - data.m[j], ">=", 0));
    if (j <= data.k)
      out.push_back(make_check("q_j + (t_j - 1) - m_j >= |r_j|", std::nullopt,
                               static_cast<long>(j), plan.q[j] + data.t[j] - 1 - data.m[j], ">=",
                               abs_int(data.r[j])));
  }

  for (long i = 1; i <= n; ++i)
    out.push_back(make_check("p_i > p_{i-1}", i, std::nullopt, plan.p_at(i), ">", plan.p_at(i - 1)));
  out.push_back(
      make_check("p_1 + (t_0 - 1) - m_0 >= 0", 1, std::nullopt, plan.p_at(1) + t0 - 1 - m0, ">=", 0));
  const Int m1 = plan.pairing_magnitude(data, 1);
  for (std::size_t j = 0; j <= data.k; ++j)
    out.push_back(make_check("2 p_1 + (t_0 - 1) - m_0 + |r_0| + m_j > 2 (g_j + q_j) - 2", 1,
                             static_cast<long>(j), m1 + data.m[j], ">",
                             2 * (data.g[j] + plan.q[j]) - 2));
  for (long i = 1; i <= n; ++i)
    out.push_back(make_check("2 p_i + (t_0 - 1) + |r_0| > 2 (g_0 + p_{i-1}) - 2", i, std::nullopt,
                             2 * plan.p_at(i) + t0 - 1 + r0a, ">", 2 * (g0 + plan.p_at(i - 1)) - 2));
  if (strong) {
    for (std::size_t j = 0; j <= data.k; ++j)
      out.push_back(make_check("2 p_1 + (t_0 - 1) - m_0 + |r_0| - m_j > 2 (g_j + q_j) - 2", 1,
                               static_cast<long>(j), m1 - data.m[j], ">",
                               2 * (data.g[j] + plan.q[j]) - 2));
    for (long i = 1; i <= n; ++i)
      out.push_back(make_check("2 p_i + (t_0 - 1) - 2 m_0 + |r_0| > 2 (g_0 + p_{i-1}) - 2", i,
                               std::nullopt, 2 * plan.p_at(i) + t0 - 1 - 2 * m0 + r0a, ">",
                               2 * (g0 + plan.p_at(i - 1)) - 2));
  }
  if (plan.variant == Variant::nonstein)
    out.push_back(
        make_check("2 p_1 + (t_0 - 1) - m_0 + |r_0| > 2", 1, std::nullopt, m1, ">", 2));
  return out;
}

inline const PlanCheck* first_failed(const std::vector<PlanCheck>& checks) {
  for (const PlanCheck& c : checks)
    if (!c.ok) return &c;
  return nullptr;
}

/// Minimal increasing p_1..p_n for the chosen variant.
inline IntVec solve_p(const BasisData& data, const IntVec& q, std::size_t n, Variant variant) {
  if (n == 0) throw std::invalid_argument("family size n must be at least 1");
  if (q.size() != data.l + 1)
    throw std::invalid_argument("q vector length does not match the handle count");
  const bool strong = variant != Variant::standard;
  const Int t0 = data.t[0], m0 = data.m[0], r0a = abs_int(data.r[0]), g0 = data.g[0];

  IntVec p;
  Int p1 = std::max(Int(1), m0 - (t0 - 1));
  for (std::size_t j = 0; j <= data.k; ++j) {
    const Int base = 2 * (data.g[j] + q[j]) - 2 - (t0 - 1) + m0 - r0a;
    p1 = std::max(p1, min_strict(base - data.m[j], 2));
    if (strong) p1 = std::max(p1, min_strict(base + data.m[j], 2));
  }
  p1 = std::max(p1, min_strict(2 * g0 - 2 - (t0 - 1) - r0a, 2));
  if (strong) p1 = std::max(p1, min_strict(2 * g0 - 2 - (t0 - 1) + 2 * m0 - r0a, 2));
  if (variant == Variant::nonstein) p1 = std::max(p1, min_strict(2 - (t0 - 1) + m0 - r0a, 2));
  p.push_back(p1);

  for (std::size_t i = 2; i <= n; ++i) {
    const Int prev = p.back();
    Int pi = std::max(prev + 1, min_strict(2 * (g0 + prev) - 2 - (t0 - 1) - r0a, 2));
    if (strong) pi = std::max(pi, min_strict(2 * (g0 + prev) - 2 - (t0 - 1) + 2 * m0 - r0a, 2));
    p.push_back(pi);
  }
  return p;
}

/// Solve q and p together and attach the evaluated evidence.
inline SequencePlan solve_plan(const BasisData& data, std::size_t n, Variant variant) {
  SequencePlan plan;
  plan.variant = variant;
  plan.q = solve_q(data);
  plan.p = solve_p(data, plan.q, n, variant);
  plan.evidence = validate_plan(data, plan);
  if (const PlanCheck* bad = first_failed(plan.evidence))
    throw std::logic_error("minimal plan violates its own condition: " + bad->name);
  return plan;
}

/// One member of the constructed family.
struct FamilyMember {
  long index = 0;  ///< -1..n
  Handlebody space;
  ModificationLog log;
  std::vector<IntVec> classes;  ///< v_0..v_k in handle coordinates
  FamilyMemberContext ctx;
  bool stein_after_finishing = false;
};

struct Family {
  Handlebody base;
  BasisData data;
  SequencePlan plan;
  bool input_good_stein = false;
  std::vector<FamilyMember> members;  ///< indices -1, 0, 1..n in order
  HomologyProfile profile;            ///< shared by every member

  const FamilyMember& member(long i) const {
    for (const FamilyMember& m : members)
      if (m.index == i) return m;
    throw std::invalid_argument("no family member with index " + std::to_string(i));
  }
};

/// The finishing choice that stabilizes every pending auxiliary handle
/// downward (rot -1).
inline SteinStructureChoice all_minus_choice(const Handlebody& h) {
  SteinStructureChoice choice;
  for (const std::string& id : pending_finishing_ids(h)) choice.delta_signs[id] = -1;
  return choice;
}

namespace detail {

/// Canonical zig-zag rotation target: the reachable value closest to zero,
/// ties broken toward the sign of the original rotation (non-negative wins
/// at zero).
inline Int canonical_rot_target(const Int& rot, const Int& t, const Int& original_rot) {
  const Int lo = rot - t, hi = rot + t;
  for (Int v = 0;; ++v) {
    const Int first = original_rot >= 0 ? v : Int(-v);
    const Int second = original_rot >= 0 ? Int(-v) : v;
    for (const Int& cand : {first, second}) {
      if (cand < lo || cand > hi) continue;
      if ((cand - rot - t) % 2 != 0) continue;
      return cand;
    }
    if (v > abs_int(lo) && v > abs_int(hi)) throw std::logic_error("no reachable rotation target");
  }
}

}  // namespace detail

/// Execute the construction: stabilize the non-distinguished handles
/// (adding q_j auxiliary twists where needed), apply the p_1..p_n
/// modifications to the distinguished handle, and produce the members
/// X_{-1}, X_0, X_1..X_n with their classes, witnesses and replayable logs.
inline Family build_family(const Handlebody& h, const BasisData& data, const SequencePlan& plan) {
  {
    const std::vector<PlanCheck> checks = validate_plan(data, plan);
    if (const PlanCheck* bad = first_failed(checks))
      throw std::invalid_argument(bad->name + " violated");
  }
  const std::size_t k = data.k, l = data.l, n = plan.n();
  const std::string& k0 = data.ids[0];

  // Shared preparation pass: realize q_j twists and canonical zig-zags on
  // K_1..K_l, finishing the non-basis auxiliary handles immediately.
  std::vector<ModificationRecord> step2;
  std::vector<std::string> delta_ids(l + 1);
  Handlebody work = h;
  for (std::size_t j = 1; j <= l; ++j) {
    const std::string& kj = data.ids[j];
    if (plan.q[j] > 0) {
      auto [next, rec] = w_plus(work, kj, plan.q[j]);
      work = next;
      delta_ids[j] = *rec.created_aux_id;
      step2.push_back(rec);
    }
    const Int cur_tb = data.t[j] + plan.q[j];
    const Int t = cur_tb - (data.m[j] + 1);
    if (t < 0) throw std::logic_error("zig-zag target unreachable on '" + kj + "'");
    if (t > 0) {
      const Int rho = detail::canonical_rot_target(data.r[j], t, data.r[j]);
      if (j <= k && abs_int(rho) > 1)
        throw std::logic_error("zig-zag target unreachable on '" + kj + "'");
      const auto [zt, zd] = zigzag_to(cur_tb, data.r[j], data.m[j] + 1, rho);
      const ModificationRecord rec = make_zigzag_record(kj, zt, zd);
      work = apply_record(work, rec).first;
      step2.push_back(rec);
    }
    if (j > k && plan.q[j] > 0) {
      const ModificationRecord rec = make_zigzag_record(delta_ids[j], 1, 0);
      work = apply_record(work, rec).first;
      step2.push_back(rec);
    }
  }

  // Modification pass on the distinguished handle.
  std::vector<ModificationRecord> step3;
  std::vector<std::string> gamma_ids(n + 1);
  {
    Handlebody w3 = work;
    for (std::size_t i = 1; i <= n; ++i) {
      auto [next, rec] = w_minus(w3, k0, plan.p[i - 1]);
      w3 = next;
      gamma_ids[i] = *rec.created_aux_id;
      step3.push_back(rec);
    }
  }

  Family fam;
  fam.base = h;
  fam.data = data;
  fam.plan = plan;
  fam.input_good_stein = is_good_stein(h);

  const auto finish_member = [&](long index, std::vector<ModificationRecord> records) {
    FamilyMember mem;
    mem.index = index;
    mem.log.base = h;
    mem.log.records = std::move(records);
    mem.space = replay(mem.log);
    require_valid(mem.space);

    mem.ctx.p_i = plan.p_at(index);
    mem.ctx.t0 = data.t[0];
    mem.ctx.m0 = data.m[0];
    mem.ctx.r0 = data.r[0];
    mem.ctx.k = k;
    mem.ctx.q = plan.q;
    for (std::size_t j = 0; j <= k; ++j) mem.ctx.basis_ids.push_back(data.ids[j]);
    mem.ctx.delta_ids.assign(k + 1, "");
    if (index >= 0)
      for (std::size_t j = 1; j <= k; ++j) mem.ctx.delta_ids[j] = delta_ids[j];

    const std::size_t c = mem.space.handle_count();
    for (std::size_t j = 0; j <= k; ++j) {
      IntVec v(c, 0);
      v[*mem.space.index_of(data.ids[j])] = 1;
      if (j == 0 && index >= 1) v[*mem.space.index_of(gamma_ids[index])] -= plan.p_at(index);
      if (j >= 1 && index >= 0 && plan.q[j] > 0)
        v[*mem.space.index_of(delta_ids[j])] -= plan.q[j];
      mem.classes.push_back(v);
      mem.ctx.basis_classes.push_back(v);
    }

    const Matrix d = boundary_matrix(mem.space);
    for (const IntVec& v : mem.classes)
      if (!is_zero_vector(d * v)) throw std::logic_error("constructed class leaves the kernel");

    mem.stein_after_finishing =
        is_stein_handlebody(apply_choice(mem.space, all_minus_choice(mem.space)));
    return mem;
  };

  // X_0: the preparation pass followed by all downward modifications.
  {
    std::vector<ModificationRecord> records = step2;
    records.insert(records.end(), step3.begin(), step3.end());
    fam.members.push_back(finish_member(0, std::move(records)));
  }
  // X_{-1}: every preparation twist applied downward instead, zig-zags
  // dropped (coincides with X_0 when the preparation pass is empty).
  {
    std::vector<ModificationRecord> records;
    for (std::size_t j = 1; j <= l; ++j)
      if (plan.q[j] > 0) {
        ModificationRecord rec;
        rec.kind = ModKind::w_minus;
        rec.target = data.ids[j];
        rec.p = plan.q[j];
        records.push_back(rec);
      }
    records.insert(records.end(), step3.begin(), step3.end());
    fam.members.insert(fam.members.begin(), finish_member(-1, std::move(records)));
  }
  // X_i: toggle the i-th downward modification upward and restore the
  // distinguished handle's tb, forcing the rotation outward.
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<ModificationRecord> records = step2;
    records.insert(records.end(), step3.begin(), step3.end());
    ModificationRecord& toggled = records[step2.size() + i - 1];
    toggled.kind = ModKind::w_plus;

    const Int pi = plan.p[i - 1];
    const Int tk = pi + (data.t[0] - 1) - data.m[0];
    if (tk < 0) throw std::logic_error("zig-zag target unreachable on '" + k0 + "'");
    Int rot_k0 = data.r[0];
    if (tk > 0) {
      const Int d = data.r[0] >= 0 ? tk : Int(0);
      records.push_back(make_zigzag_record(k0, tk, d));
      rot_k0 = data.r[0] + 2 * d - tk;
    }
    records.push_back(make_zigzag_record(gamma_ids[i], 1, rot_k0 < 0 ? Int(1) : Int(0)));

    FamilyMember mem = finish_member(static_cast<long>(i), std::move(records));

    // The core identity: the chosen structure pairs with v_0 to +-M_i.
    const Int mi = plan.pairing_magnitude(data, static_cast<long>(i));
    const Int pairing =
        c1_pairing(mem.space, all_minus_choice(mem.space), mem.classes[0]);
    if (abs_int(pairing) != mi)
      throw std::logic_error("pairing identity violated during construction");
    bool witnessed = false;
    for (const GenusWitness& w : mem.space.witnesses)
      if (w.cls == mem.classes[0] && w.genus == data.g[0] + pi) witnessed = true;
    if (!witnessed) throw std::logic_error("distinguished witness missing after construction");

    fam.members.push_back(std::move(mem));
  }

  fam.profile = homology(fam.members.front().space);
  for (const FamilyMember& mem : fam.members)
    if (!profiles_equal(homology(mem.space), fam.profile))
      throw std::logic_error("family members disagree on homology profile");
  return fam;
}

/// The one-handle-free model example: a single basis handle of framing m
/// with its canonical Legendrian data and genus 0.
inline Handlebody example_u(const Int& m) {
  Handlebody h;
  h.one_handles = 0;
  TwoHandle kk;
  kk.id = "K0";
  kk.role = Role::basis;
  kk.framing = m;
  if (m <= -2) {
    kk.tb = m + 1;
    kk.rot = -m - 2;
  } else {
    kk.tb = -1;
    kk.rot = 0;
  }
  kk.genus = 0;
  h.handles.push_back(kk);
  h.linking = Matrix(1, 1, {m});
  return h;
}

/// Default designation: the basis-role handles in listing order, the first
/// one distinguished.
inline std::vector<std::string> default_basis_ids(const Handlebody& h) {
  std::vector<std::string> out;
  for (const TwoHandle& kh : h.handles)
    if (kh.role == Role::basis) out.push_back(kh.id);
  return out;
}

/// The Stein/non-Stein paired construction: boundary sums of the
/// strengthened members of h (variant with the extra positivity condition)
/// with the two characteristic blocks built from the framing-0 model
/// example — its Stein member X^S-side and its sphere-carrying member
/// X^N-side.
struct SteinNonsteinFamily {
  Family main;   ///< variant nonstein, size n
  Family block;  ///< framing-0 model example, size 1
  std::vector<Handlebody> xs;  ///< X^S_1..X^S_n
  std::vector<Handlebody> xn;  ///< X^N_1..X^N_n
};

inline SteinNonsteinFamily stein_nonstein_family(const Handlebody& h, std::size_t n) {
  if (!is_good_stein(h))
    throw std::invalid_argument("the paired construction requires a good Stein handlebody");
  const std::vector<std::string> basis = default_basis_ids(h);
  if (basis.empty()) throw std::invalid_argument("no handles designated as basis");

  SteinNonsteinFamily out;
  {
    const BasisData data = extract_data(h, basis, basis[0]);
    out.main = build_family(h, data, solve_plan(data, n, Variant::nonstein));
  }
  {
    const Handlebody u0 = example_u(0);
    const BasisData data = extract_data(u0, {"K0"}, "K0");
    out.block = build_family(u0, data, solve_plan(data, 1, Variant::standard));
  }
  const Handlebody& stein_block = out.block.member(1).space;
  const Handlebody& sphere_block = out.block.member(0).space;
  for (std::size_t i = 1; i <= n; ++i) {
    out.xs.push_back(boundary_sum(out.main.member(static_cast<long>(i)).space, stein_block));
    out.xn.push_back(boundary_sum(out.main.member(static_cast<long>(i)).space, sphere_block));
  }
  return out;
}

}  // namespace corkforge

#endif  // CORKFORGE_PIPELINE_HPP
