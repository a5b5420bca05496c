#ifndef CORKFORGE_JSON_IO_HPP
#define CORKFORGE_JSON_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "corkforge/certify.hpp"

namespace corkforge {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

inline json int_to_json(const Int& v) { return to_int64(v); }

inline Int int_from_json(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) {
    const std::uint64_t u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw std::invalid_argument(what + ": integer out of range");
    return Int(static_cast<std::int64_t>(u));
  }
  if (!j.is_number_integer()) throw std::invalid_argument(what + ": expected an integer");
  return Int(j.get<std::int64_t>());
}

inline json intvec_to_json(const IntVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(int_to_json(x));
  return out;
}

inline IntVec intvec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of integers");
  IntVec out;
  for (const json& x : j) out.push_back(int_from_json(x, what));
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix square_matrix_from_json(const json& j, std::size_t size, const std::string& what) {
  if (!j.is_array() || j.size() != size)
    throw std::invalid_argument(what + ": expected a " + std::to_string(size) + "-row matrix");
  Matrix m(size, size);
  for (std::size_t r = 0; r < size; ++r) {
    if (!j[r].is_array() || j[r].size() != size)
      throw std::invalid_argument(what + ": row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < size; ++c) m(r, c) = int_from_json(j[r][c], what);
  }
  return m;
}

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& keys,
                         const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected an object");
  for (const std::string& key : keys)
    if (!j.contains(key)) throw std::invalid_argument(what + ": missing key '" + key + "'");
  for (const auto& item : j.items())
    if (!keys.count(item.key()))
      throw std::invalid_argument(what + ": unknown key '" + item.key() + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Handlebody
// ---------------------------------------------------------------------------

inline json handlebody_to_json(const Handlebody& h) {
  json out;
  out["one_handles"] = h.one_handles;
  json handles = json::array();
  for (const TwoHandle& k : h.handles) {
    json hk;
    hk["id"] = k.id;
    hk["role"] = role_name(k.role);
    hk["framing"] = int_to_json(k.framing);
    hk["tb"] = k.tb ? json(int_to_json(*k.tb)) : json(nullptr);
    hk["rot"] = k.rot ? json(int_to_json(*k.rot)) : json(nullptr);
    hk["run_over"] = intvec_to_json(k.run_over);
    hk["genus"] = k.genus ? json(int_to_json(*k.genus)) : json(nullptr);
    handles.push_back(std::move(hk));
  }
  out["handles"] = std::move(handles);
  out["linking"] = matrix_to_json(h.linking);
  return out;
}

inline Handlebody handlebody_from_json(const json& j) {
  detail::require_keys(j, {"one_handles", "handles", "linking"}, "handlebody");
  Handlebody h;
  const Int s = int_from_json(j["one_handles"], "one_handles");
  if (s < 0) throw std::invalid_argument("one_handles: must be non-negative");
  h.one_handles = static_cast<std::size_t>(to_int64(s));
  if (!j["handles"].is_array()) throw std::invalid_argument("handles: expected an array");
  for (const json& hk : j["handles"]) {
    detail::require_keys(hk, {"id", "role", "framing", "tb", "rot", "run_over", "genus"},
                         "handle");
    TwoHandle k;
    if (!hk["id"].is_string()) throw std::invalid_argument("handle id: expected a string");
    k.id = hk["id"].get<std::string>();
    if (!hk["role"].is_string()) throw std::invalid_argument("handle role: expected a string");
    const std::optional<Role> role = role_from_name(hk["role"].get<std::string>());
    if (!role)
      throw std::invalid_argument("handle role: unknown role '" +
                                  hk["role"].get<std::string>() + "'");
    k.role = *role;
    k.framing = int_from_json(hk["framing"], "framing");
    if (!hk["tb"].is_null()) k.tb = int_from_json(hk["tb"], "tb");
    if (!hk["rot"].is_null()) k.rot = int_from_json(hk["rot"], "rot");
    k.run_over = intvec_from_json(hk["run_over"], "run_over");
    if (!hk["genus"].is_null()) k.genus = int_from_json(hk["genus"], "genus");
    h.handles.push_back(std::move(k));
  }
  h.linking = square_matrix_from_json(j["linking"], h.handles.size(), "linking");
  return h;
}

// ---------------------------------------------------------------------------
// Modification logs
// ---------------------------------------------------------------------------

inline json record_to_json(const ModificationRecord& rec) {
  json out;
  out["kind"] = mod_kind_name(rec.kind);
  out["target"] = rec.target;
  out["p"] = int_to_json(rec.p);
  out["t"] = int_to_json(rec.t);
  out["d"] = int_to_json(rec.d);
  return out;
}

inline ModificationRecord record_from_json(const json& j) {
  detail::require_keys(j, {"kind", "target", "p", "t", "d"}, "modification record");
  ModificationRecord rec;
  if (!j["kind"].is_string()) throw std::invalid_argument("record kind: expected a string");
  rec.kind = mod_kind_from_name(j["kind"].get<std::string>());
  if (!j["target"].is_string()) throw std::invalid_argument("record target: expected a string");
  rec.target = j["target"].get<std::string>();
  rec.p = int_from_json(j["p"], "record p");
  rec.t = int_from_json(j["t"], "record t");
  rec.d = int_from_json(j["d"], "record d");
  return rec;
}

inline json log_to_json(const ModificationLog& log) {
  json out;
  out["base"] = handlebody_to_json(log.base);
  json records = json::array();
  for (const ModificationRecord& rec : log.records) records.push_back(record_to_json(rec));
  out["records"] = std::move(records);
  return out;
}

inline ModificationLog log_from_json(const json& j) {
  detail::require_keys(j, {"base", "records"}, "modification log");
  ModificationLog log;
  log.base = handlebody_from_json(j["base"]);
  if (!j["records"].is_array()) throw std::invalid_argument("records: expected an array");
  for (const json& rec : j["records"]) log.records.push_back(record_from_json(rec));
  return log;
}

// ---------------------------------------------------------------------------
// Witnesses, profiles, contact invariants
// ---------------------------------------------------------------------------

inline json witness_to_json(const GenusWitness& w) {
  json out;
  out["cls"] = intvec_to_json(w.cls);
  out["genus"] = int_to_json(w.genus);
  out["provenance"] = provenance_name(w.provenance);
  return out;
}

inline GenusWitness witness_from_json(const json& j) {
  detail::require_keys(j, {"cls", "genus", "provenance"}, "genus witness");
  GenusWitness w;
  w.cls = intvec_from_json(j["cls"], "witness cls");
  w.genus = int_from_json(j["genus"], "witness genus");
  if (!j["provenance"].is_string())
    throw std::invalid_argument("witness provenance: expected a string");
  const std::optional<Provenance> p = provenance_from_name(j["provenance"].get<std::string>());
  if (!p)
    throw std::invalid_argument("witness provenance: unknown value '" +
                                j["provenance"].get<std::string>() + "'");
  w.provenance = *p;
  return w;
}

inline json profile_to_json(const HomologyProfile& p) {
  json out;
  out["h1_invariant_factors"] = intvec_to_json(p.h1_invariant_factors);
  out["b2"] = p.b2;
  out["intersection_matrix"] = matrix_to_json(p.intersection_matrix);
  out["boundary_h1_invariant_factors"] = intvec_to_json(p.boundary_h1_invariant_factors);
  out["boundary_b1"] = p.boundary_b1;
  out["euler"] = int_to_json(p.euler);
  out["signature"] = int_to_json(p.signature);
  return out;
}

inline json contact_to_json(const ContactInvariant& ci) {
  json out;
  out["d3"] = rational_to_string(ci.d3);
  out["c1_squared"] = rational_to_string(ci.c1_squared);
  out["euler"] = int_to_json(ci.euler);
  out["signature"] = int_to_json(ci.signature);
  return out;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

inline json check_to_json(const PlanCheck& c) {
  json out;
  out["name"] = c.name;
  out["i"] = c.i ? json(*c.i) : json(nullptr);
  out["j"] = c.j ? json(*c.j) : json(nullptr);
  out["lhs"] = int_to_json(c.lhs);
  out["rhs"] = int_to_json(c.rhs);
  out["op"] = c.op;
  out["ok"] = c.ok;
  return out;
}

/// plan.json payload: the solved/validated plan plus the designation needed
/// to reconstruct the family from the base handlebody alone.
struct PlanFile {
  SequencePlan plan;
  std::vector<std::string> basis_ids;
  std::string k0;
  std::size_t n = 0;
};

inline json plan_file_to_json(const PlanFile& pf) {
  json out;
  out["variant"] = variant_name(pf.plan.variant);
  out["q"] = intvec_to_json(pf.plan.q);
  out["p"] = intvec_to_json(pf.plan.p);
  json evidence = json::array();
  for (const PlanCheck& c : pf.plan.evidence) evidence.push_back(check_to_json(c));
  out["evidence"] = std::move(evidence);
  out["basis_ids"] = pf.basis_ids;
  out["k0"] = pf.k0;
  out["n"] = pf.n;
  return out;
}

/// Read a plan file.  Only variant/q/p are required, so externally written
/// plans can be fed to the validity checker; the designation keys and n
/// default from context.  Stored evidence is never trusted (it is re-derived
/// and compared by the caller).
inline PlanFile plan_file_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("plan: expected an object");
  const std::set<std::string> allowed = {"variant", "q", "p", "evidence", "basis_ids", "k0", "n"};
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw std::invalid_argument("plan: unknown key '" + item.key() + "'");
  for (const char* key : {"variant", "q", "p"})
    if (!j.contains(key)) throw std::invalid_argument("plan: missing key '" + std::string(key) + "'");

  PlanFile pf;
  if (!j["variant"].is_string()) throw std::invalid_argument("plan variant: expected a string");
  pf.plan.variant = variant_from_name(j["variant"].get<std::string>());
  pf.plan.q = intvec_from_json(j["q"], "plan q");
  pf.plan.p = intvec_from_json(j["p"], "plan p");
  if (j.contains("basis_ids")) {
    if (!j["basis_ids"].is_array())
      throw std::invalid_argument("plan basis_ids: expected an array of strings");
    for (const json& id : j["basis_ids"]) {
      if (!id.is_string()) throw std::invalid_argument("plan basis_ids: expected strings");
      pf.basis_ids.push_back(id.get<std::string>());
    }
  }
  if (j.contains("k0")) {
    if (!j["k0"].is_string()) throw std::invalid_argument("plan k0: expected a string");
    pf.k0 = j["k0"].get<std::string>();
  }
  if (j.contains("n")) {
    const Int n = int_from_json(j["n"], "plan n");
    if (n < 1) throw std::invalid_argument("plan n: must be at least 1");
    pf.n = static_cast<std::size_t>(to_int64(n));
  } else {
    pf.n = pf.plan.p.size();
  }
  return pf;
}

// ---------------------------------------------------------------------------
// Certificates and reports
// ---------------------------------------------------------------------------

inline json certificate_to_json(const ExoticityCertificate& cert) {
  json out;
  out["M"] = intvec_to_json(cert.M);
  json thresholds = json::array();
  for (const ThresholdChecks& tc : cert.thresholds) {
    json entry;
    entry["i"] = tc.i;
    json checks = json::array();
    for (const PlanCheck& c : tc.checks) {
      json ck;
      ck["lhs"] = int_to_json(c.lhs);
      ck["rhs"] = int_to_json(c.rhs);
      ck["op"] = c.op;
      ck["ok"] = c.ok;
      checks.push_back(std::move(ck));
    }
    entry["checks"] = std::move(checks);
    thresholds.push_back(std::move(entry));
  }
  out["thresholds"] = std::move(thresholds);
  out["distinct"] = cert.distinct;
  out["reasons"] = cert.reasons;
  return out;
}

inline json d3_report_to_json(const D3Report& report) {
  json values;
  for (const auto& [i, ci] : report.values) values[std::to_string(i)] = contact_to_json(ci);
  json out;
  out["values"] = std::move(values);
  out["all_distinct"] = report.all_distinct;
  return out;
}

inline json nonstein_report_to_json(const NonsteinReport& report) {
  json entries = json::array();
  for (const NonsteinEntry& e : report.entries) {
    json entry;
    entry["label"] = e.label;
    entry["stein"] = e.stein;
    if (e.obstruction) {
      json obs;
      obs["witness"] = witness_to_json(e.obstruction->witness);
      obs["square"] = int_to_json(e.obstruction->square);
      obs["any_orientation"] = e.obstruction->any_orientation;
      entry["obstruction"] = std::move(obs);
    } else {
      entry["obstruction"] = nullptr;
    }
    entries.push_back(std::move(entry));
  }
  json out;
  out["entries"] = std::move(entries);
  out["all_s_stein"] = report.all_s_stein;
  out["all_n_obstructed"] = report.all_n_obstructed;
  out["profiles_all_equal"] = report.profiles_all_equal;
  out["profile"] = profile_to_json(report.profile);
  return out;
}

inline json adjunction_to_json(const std::vector<AdjunctionEntry>& entries) {
  json out = json::array();
  for (const AdjunctionEntry& e : entries) {
    json entry;
    entry["member"] = e.member;
    entry["witness"] = e.witness;
    entry["square"] = int_to_json(e.square);
    entry["bound"] = int_to_json(e.bound);
    entry["genus"] = int_to_json(e.genus);
    entry["ok"] = e.ok;
    out.push_back(std::move(entry));
  }
  return out;
}

inline json homeo_report_to_json(const HomeoReport& report) {
  json pairs = json::array();
  for (const HomeoPair& p : report.pairs) {
    json pair;
    pair["a"] = p.a;
    pair["b"] = p.b;
    pair["toggled"] = p.toggled;
    pairs.push_back(std::move(pair));
  }
  json out;
  out["profiles_all_equal"] = report.profiles_all_equal;
  out["pairs"] = std::move(pairs);
  out["note"] = report.note;
  return out;
}

// ---------------------------------------------------------------------------
// Family directories
// ---------------------------------------------------------------------------

inline json classes_to_json(const Family& f) {
  json members;
  for (const FamilyMember& mem : f.members) {
    json classes = json::array();
    for (const IntVec& v : mem.classes) classes.push_back(intvec_to_json(v));
    members[std::to_string(mem.index)] = std::move(classes);
  }
  json out;
  out["members"] = std::move(members);
  return out;
}

inline json witnesses_to_json(const Family& f) {
  json members;
  for (const FamilyMember& mem : f.members) {
    json list = json::array();
    for (const GenusWitness& w : all_witnesses(mem.space)) list.push_back(witness_to_json(w));
    members[std::to_string(mem.index)] = std::move(list);
  }
  json out;
  out["members"] = std::move(members);
  return out;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline json read_json_stream(std::istream& in) {
  return json::parse(in);  // throws json::parse_error on malformed content
}

/// Write the full family directory: one handlebody and one log per member,
/// plus the plan (with designation), classes and witnesses.
inline void write_family(const std::filesystem::path& dir, const Family& f) {
  std::filesystem::create_directories(dir);
  PlanFile pf{f.plan, std::vector<std::string>(f.data.ids.begin(), f.data.ids.begin() + f.data.k + 1),
              f.data.k0, f.plan.n()};
  write_json_file(dir / "plan.json", plan_file_to_json(pf));
  write_json_file(dir / "classes.json", classes_to_json(f));
  write_json_file(dir / "witnesses.json", witnesses_to_json(f));
  for (const FamilyMember& mem : f.members) {
    const std::string suffix = std::to_string(mem.index) + ".json";
    write_json_file(dir / ("X_" + suffix), handlebody_to_json(mem.space));
    write_json_file(dir / ("log_" + suffix), log_to_json(mem.log));
  }
}

inline json read_json_file_for_audit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CertificateRefused("missing family file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CertificateRefused("unreadable family file '" + path.string() + "': " + e.what());
  }
}

/// Reconstruct a family from its directory and verify that every stored
/// file matches the reconstruction bit for bit.  Nothing stored is trusted:
/// the plan is re-validated, the members are rebuilt from the base
/// handlebody, and any divergence refuses.
inline Family read_family_for_audit(const std::filesystem::path& dir) {
  const json plan_json = read_json_file_for_audit(dir / "plan.json");
  PlanFile pf;
  try {
    pf = plan_file_from_json(plan_json);
  } catch (const std::invalid_argument& e) {
    throw CertificateRefused(e.what());
  }

  const json log0_json = read_json_file_for_audit(dir / "log_0.json");
  Family fam;
  try {
    const ModificationLog log0 = log_from_json(log0_json);
    const BasisData data = extract_data(log0.base, pf.basis_ids, pf.k0);
    pf.plan.evidence = validate_plan(data, pf.plan);
    fam = build_family(log0.base, data, pf.plan);
  } catch (const std::invalid_argument& e) {
    throw CertificateRefused(e.what());
  }
  if (pf.n != fam.plan.n())
    throw CertificateRefused("plan n does not match the stored modification count");

  const auto check = [&](const std::filesystem::path& path, const json& expected) {
    if (read_json_file_for_audit(path) != expected)
      throw CertificateRefused("stored family file '" + path.string() +
                               "' does not match its reconstruction");
  };
  check(dir / "plan.json", plan_file_to_json(pf));
  check(dir / "classes.json", classes_to_json(fam));
  check(dir / "witnesses.json", witnesses_to_json(fam));
  for (const FamilyMember& mem : fam.members) {
    const std::string suffix = std::to_string(mem.index) + ".json";
    check(dir / ("X_" + suffix), handlebody_to_json(mem.space));
    check(dir / ("log_" + suffix), log_to_json(mem.log));
  }
  return fam;
}

}  // namespace corkforge

#endif  // CORKFORGE_JSON_IO_HPP
