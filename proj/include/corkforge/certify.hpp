#ifndef CORKFORGE_CERTIFY_HPP
#define CORKFORGE_CERTIFY_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corkforge/pipeline.hpp"
#include "corkforge/smith.hpp"

namespace corkforge {

/// Thrown whenever a certificate cannot be issued: some inequality failed,
/// or the family data is inconsistent with its own construction.  The
/// message names the violated condition.
class CertificateRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdChecks {
  long i = 0;
  std::vector<PlanCheck> checks;
};

/// Machine-checkable exoticity evidence: the pairing magnitudes M_i, every
/// evaluated threshold inequality, the realized witness genus per member,
/// and the pairwise distinctness matrix with reasons.  Matrix rows/columns
/// are ordered X_{-1}, X_0, X_1, ..., X_n.
struct ExoticityCertificate {
  Variant variant = Variant::standard;
  IntVec M;  ///< M_1..M_n
  std::vector<ThresholdChecks> thresholds;
  std::map<long, Int> realized_genus;
  std::vector<std::vector<bool>> distinct;
  std::vector<std::vector<std::string>> reasons;
};

/// Re-derive and re-check everything an auditor needs, then issue the
/// certificate.  Refuses (with the violated condition named) when any plan
/// inequality, threshold inequality, or witness/class consistency check
/// fails — certification never trusts the family's own claims.
inline ExoticityCertificate certify_family(const Family& f) {
  // The basis data must match what the base handlebody actually says.
  try {
    std::vector<std::string> basis(f.data.ids.begin(), f.data.ids.begin() + f.data.k + 1);
    if (extract_data(f.base, basis, f.data.k0) != f.data)
      throw CertificateRefused("basis data inconsistent with base handlebody");
  } catch (const std::invalid_argument& e) {
    throw CertificateRefused(e.what());
  }

  // Every plan inequality, re-evaluated from scratch.
  std::vector<PlanCheck> plan_checks;
  try {
    plan_checks = validate_plan(f.data, f.plan);
  } catch (const std::invalid_argument& e) {
    throw CertificateRefused(e.what());
  }
  if (const PlanCheck* bad = first_failed(plan_checks))
    throw CertificateRefused(bad->name + " violated");

  const bool strong = f.plan.variant != Variant::standard;
  const long n = static_cast<long>(f.plan.n());
  const Int g0 = f.data.g[0], m0 = f.data.m[0];

  ExoticityCertificate cert;
  cert.variant = f.plan.variant;

  for (long i = 1; i <= n; ++i) {
    const Int mi = f.plan.pairing_magnitude(f.data, i);
    cert.M.push_back(mi);
    ThresholdChecks tc;
    tc.i = i;
    tc.checks.push_back(make_check("0 < M_i", i, std::nullopt, 0, "<", mi));
    if (strong)
      tc.checks.push_back(make_check("2 (g_0 + p_{i-1}) - 2 + |m_0| < M_i", i, 0,
                                     2 * (g0 + f.plan.p_at(i - 1)) - 2 + abs_int(m0), "<", mi));
    else
      tc.checks.push_back(make_check("2 (g_0 + p_{i-1}) - 2 - m_0 < M_i", i, 0,
                                     2 * (g0 + f.plan.p_at(i - 1)) - 2 - m0, "<", mi));
    for (std::size_t j = 1; j <= f.data.k; ++j) {
      const Int body = 2 * (f.data.g[j] + f.plan.q[j]) - 2;
      if (strong)
        tc.checks.push_back(make_check("2 (g_j + q_j) - 2 + |m_j| < M_i", i,
                                       static_cast<long>(j), body + abs_int(f.data.m[j]), "<", mi));
      else
        tc.checks.push_back(make_check("2 (g_j + q_j) - 2 - m_j < M_i", i, static_cast<long>(j),
                                       body - f.data.m[j], "<", mi));
    }
    for (const PlanCheck& c : tc.checks)
      if (!c.ok) throw CertificateRefused(c.name + " violated");
    cert.thresholds.push_back(std::move(tc));
  }

  // Realized genus of the distinguished class, read off the stored
  // witnesses, must equal g_0 + p_i (g_0 for the untwisted members).
  for (const FamilyMember& mem : f.members) {
    const Int expected = g0 + f.plan.p_at(mem.index);
    std::optional<Int> found;
    if (mem.index >= 1) {
      for (const GenusWitness& w : mem.space.witnesses)
        if (w.cls == mem.classes[0]) found = w.genus;
    } else {
      const TwoHandle& kh = mem.space.handle(f.data.k0);
      if (kh.genus) found = *kh.genus;
    }
    if (!found || *found != expected) throw CertificateRefused("realized genus mismatch");
    cert.realized_genus[mem.index] = expected;

    // The distinguished class must still have square m_0 (and the other
    // basis classes square m_j).
    for (std::size_t j = 0; j < mem.classes.size(); ++j)
      if (bilinear(mem.classes[j], mem.space.linking, mem.classes[j]) != f.data.m[j])
        throw CertificateRefused("basis class square mismatch");
  }

  // Pairwise distinctness: a member whose class is realized by genus G is
  // distinguished from any member whose no-basis threshold is >= G.
  const std::size_t count = f.members.size();
  cert.distinct.assign(count, std::vector<bool>(count, false));
  cert.reasons.assign(count, std::vector<std::string>(count, ""));
  const auto idx_of = [&](std::size_t row) { return f.members[row].index; };
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a + 1; b < count; ++b) {
      const long ia = idx_of(a), ib = idx_of(b);
      std::string reason;
      bool ok = false;
      if (ia == -1 && ib == 0) {
        reason = "not distinguished by this method";
      } else {
        const Int realized = cert.realized_genus.at(ia);
        const Int threshold = g0 + f.plan.p_at(ib - 1);
        ok = realized <= threshold;
        reason = ok ? "realized genus " + realized.str() + " within no-basis threshold " +
                          threshold.str()
                    : "realized genus " + realized.str() + " exceeds no-basis threshold " +
                          threshold.str();
      }
      cert.distinct[a][b] = cert.distinct[b][a] = ok;
      cert.reasons[a][b] = cert.reasons[b][a] = reason;
    }
  return cert;
}

/// One adjunction check: the witness's square plus the guaranteed pairing
/// bound of its class must stay within 2 genus - 2.
struct AdjunctionEntry {
  long member = 0;
  std::size_t witness = 0;  ///< index into all_witnesses(member.space)
  Int square = 0, bound = 0, genus = 0;
  bool ok = false;
};

/// Sweep every stored witness of every member.  Members carrying a Stein
/// structure get the guaranteed pairing bound of their construction
/// context; the fully untwisted member pairs each class against the
/// original rotation numbers.  The untwisted members are only swept when
/// the input was good Stein (otherwise they carry no Stein structure and
/// no adjunction claim).
inline std::vector<AdjunctionEntry> adjunction_sweep(const Family& f) {
  std::vector<AdjunctionEntry> out;
  for (const FamilyMember& mem : f.members) {
    if (mem.index <= 0 && !f.input_good_stein) continue;
    const std::size_t c = mem.space.handle_count();
    Matrix basis(c, mem.classes.size());
    for (std::size_t col = 0; col < mem.classes.size(); ++col)
      for (std::size_t row = 0; row < c; ++row) basis(row, col) = mem.classes[col][row];

    const std::vector<GenusWitness> witnesses = all_witnesses(mem.space);
    for (std::size_t wi = 0; wi < witnesses.size(); ++wi) {
      const GenusWitness& w = witnesses[wi];
      AdjunctionEntry entry;
      entry.member = mem.index;
      entry.witness = wi;
      entry.genus = w.genus;
      entry.square = bilinear(w.cls, mem.space.linking, w.cls);

      const std::optional<IntVec> a = integer_solve(basis, w.cls);
      if (!a) {
        entry.ok = false;  // class outside the spanned basis: flag it
        out.push_back(entry);
        continue;
      }
      if (mem.index >= 0) {
        entry.bound = max_pairing(mem.space, mem.ctx, *a).bound;
      } else {
        Int acc = 0;
        for (std::size_t j = 0; j < a->size(); ++j) acc += (*a)[j] * f.data.r[j];
        entry.bound = abs_int(acc);
      }
      entry.ok = entry.square + entry.bound <= 2 * entry.genus - 2;
      out.push_back(entry);
    }
  }
  return out;
}

/// Exact d_3 values of the members' boundary contact structures.
struct D3Report {
  std::map<long, ContactInvariant> values;
  bool all_distinct = false;
};

inline D3Report d3_family(const Family& f) {
  if (f.data.k != 0)
    throw std::invalid_argument("d_3 family computation requires second homology rank 1");
  if (f.data.m[0] == 0)
    throw std::invalid_argument("d_3 family computation requires a nonzero intersection form");
  D3Report report;
  std::vector<Rat> seen;
  bool distinct = true;
  for (const FamilyMember& mem : f.members) {
    if (mem.index < 1) continue;
    const Handlebody finished = apply_choice(mem.space, all_minus_choice(mem.space));
    const ContactInvariant ci = d3(finished, f.plan.pairing_magnitude(f.data, mem.index));
    for (const Rat& v : seen)
      if (v == ci.d3) distinct = false;
    seen.push_back(ci.d3);
    report.values[mem.index] = ci;
  }
  report.all_distinct = distinct;
  return report;
}

/// Per-member outcome of the Stein / non-Stein verification.
struct NonsteinEntry {
  std::string label;
  bool stein = false;
  std::optional<SteinObstruction> obstruction;
};

struct NonsteinReport {
  std::vector<NonsteinEntry> entries;
  bool all_s_stein = false;
  bool all_n_obstructed = false;
  bool profiles_all_equal = false;
  HomologyProfile profile;
};

/// Check each X^S member for Stein validity (after canonical finishing) and
/// each X^N member for a sphere-class obstruction.  Absence of a stored
/// witness yields "no obstruction found", never a Stein claim.
inline NonsteinReport verify_nonstein(const std::vector<Handlebody>& xs,
                                      const std::vector<Handlebody>& xn) {
  NonsteinReport report;
  report.all_s_stein = true;
  report.all_n_obstructed = true;
  report.profiles_all_equal = true;
  bool have_profile = false;

  const auto note_profile = [&](const Handlebody& h) {
    const HomologyProfile p = homology(h);
    if (!have_profile) {
      report.profile = p;
      have_profile = true;
    } else if (!profiles_equal(p, report.profile)) {
      report.profiles_all_equal = false;
    }
  };

  for (std::size_t i = 0; i < xs.size(); ++i) {
    NonsteinEntry e;
    e.label = "XS_" + std::to_string(i + 1);
    e.stein = is_stein_handlebody(apply_choice(xs[i], all_minus_choice(xs[i])));
    report.all_s_stein = report.all_s_stein && e.stein;
    note_profile(xs[i]);
    report.entries.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < xn.size(); ++i) {
    NonsteinEntry e;
    e.label = "XN_" + std::to_string(i + 1);
    e.stein = false;
    e.obstruction = stein_obstruction(xn[i], all_witnesses(xn[i]));
    report.all_n_obstructed = report.all_n_obstructed && e.obstruction.has_value();
    note_profile(xn[i]);
    report.entries.push_back(std::move(e));
  }
  return report;
}

inline NonsteinReport verify_nonstein(const SteinNonsteinFamily& snf) {
  return verify_nonstein(snf.xs, snf.xn);
}

/// Pairwise homeomorphism bookkeeping.  The claim itself is metadata
/// justified by the members' shared modification skeleton (they differ only
/// by sign toggles of W-moves, i.e. cork twists); the machine-verified part
/// is the profile agreement and the skeleton comparison.
struct HomeoPair {
  long a = 0, b = 0;
  std::vector<std::size_t> toggled;  ///< positions in the W-move skeleton
};

struct HomeoReport {
  bool profiles_all_equal = false;
  std::vector<HomeoPair> pairs;
  std::string note =
      "pairwise homeomorphism asserted from the shared cork-twist skeleton; not machine-verified";
};

inline HomeoReport homeo_report(const Family& f) {
  HomeoReport report;
  const HomologyProfile ref = homology(f.members.front().space);
  for (const FamilyMember& mem : f.members)
    if (!profiles_equal(homology(mem.space), ref))
      throw std::logic_error("family members disagree on homology profile");
  report.profiles_all_equal = true;

  struct Skeleton {
    std::vector<ModificationRecord> w;
  };
  const auto skeleton = [](const FamilyMember& mem) {
    std::vector<ModificationRecord> w;
    for (const ModificationRecord& rec : mem.log.records)
      if (rec.kind == ModKind::w_plus || rec.kind == ModKind::w_minus) w.push_back(rec);
    return w;
  };

  for (std::size_t a = 0; a < f.members.size(); ++a)
    for (std::size_t b = a + 1; b < f.members.size(); ++b) {
      const std::vector<ModificationRecord> wa = skeleton(f.members[a]);
      const std::vector<ModificationRecord> wb = skeleton(f.members[b]);
      if (wa.size() != wb.size())
        throw std::logic_error("family members disagree on modification skeleton");
      HomeoPair pair;
      pair.a = f.members[a].index;
      pair.b = f.members[b].index;
      for (std::size_t r = 0; r < wa.size(); ++r) {
        if (wa[r].target != wb[r].target || wa[r].p != wb[r].p)
          throw std::logic_error("family members disagree on modification skeleton");
        if (wa[r].kind != wb[r].kind) pair.toggled.push_back(r);
      }
      report.pairs.push_back(std::move(pair));
    }
  return report;
}

}  // namespace corkforge

#endif  // CORKFORGE_CERTIFY_HPP
