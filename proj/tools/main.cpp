#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "corkforge/json_io.hpp"

namespace {

using namespace corkforge;

/// Bad paths and unusable argument combinations: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_input(const std::string& path) {
  if (path == "-") return read_json_stream(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_json_stream(in);
}

Handlebody read_handlebody(const std::string& path) {
  return handlebody_from_json(read_json_input(path));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

struct Args {
  std::string file = "-";
  bool json_out = false;
  std::size_t n = 1;
  std::string variant = "standard";
  std::string out_dir;
  std::string plan_file;
  std::string dir;
  std::string sum_a, sum_b;
  std::string example_kind;
  long long example_m = 0;
};

/// Resolve the plan for a handlebody: an external plan file when given
/// (defaulting its designation from the basis-role handles), the minimal
/// solved plan otherwise.  Returns the data alongside.
std::pair<BasisData, SequencePlan> resolve_plan(const Handlebody& h, const Args& a) {
  if (!a.plan_file.empty()) {
    PlanFile pf = plan_file_from_json(read_json_input(a.plan_file));
    if (pf.basis_ids.empty()) pf.basis_ids = default_basis_ids(h);
    if (pf.k0.empty()) {
      if (pf.basis_ids.empty()) throw std::invalid_argument("no handles designated as basis");
      pf.k0 = pf.basis_ids.front();
    }
    BasisData data = extract_data(h, pf.basis_ids, pf.k0);
    pf.plan.evidence = validate_plan(data, pf.plan);
    return {std::move(data), std::move(pf.plan)};
  }
  const std::vector<std::string> basis = default_basis_ids(h);
  if (basis.empty()) throw std::invalid_argument("no handles designated as basis");
  BasisData data = extract_data(h, basis, basis.front());
  SequencePlan plan = solve_plan(data, a.n, variant_from_name(a.variant));
  return {std::move(data), std::move(plan)};
}

PlanFile plan_file_of(const BasisData& data, const SequencePlan& plan) {
  PlanFile pf;
  pf.plan = plan;
  pf.basis_ids.assign(data.ids.begin(), data.ids.begin() + data.k + 1);
  pf.k0 = data.k0;
  pf.n = plan.n();
  return pf;
}

int cmd_validate(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  const ValidationReport report = validate(h);
  if (a.json_out) {
    json out;
    out["ok"] = report.ok();
    out["violations"] = report.violations;
    emit(out);
  } else if (report.ok()) {
    std::cout << "valid\n";
  } else {
    std::cout << "invalid:\n";
    for (const std::string& v : report.violations) std::cout << "  - " << v << "\n";
  }
  return report.ok() ? 0 : 1;
}

int cmd_invariants(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  require_valid(h);
  const HomologyProfile p = homology(h);
  if (a.json_out) {
    emit(profile_to_json(p));
    return 0;
  }
  std::cout << "h1 invariant factors:          " << intvec_to_json(p.h1_invariant_factors).dump()
            << "\n";
  std::cout << "b2:                            " << p.b2 << "\n";
  std::cout << "intersection matrix:           " << matrix_to_json(p.intersection_matrix).dump()
            << "\n";
  std::cout << "signature:                     " << p.signature << "\n";
  std::cout << "euler characteristic:          " << p.euler << "\n";
  std::cout << "boundary h1 invariant factors: "
            << intvec_to_json(p.boundary_h1_invariant_factors).dump() << "\n";
  std::cout << "boundary b1:                   " << p.boundary_b1 << "\n";
  return 0;
}

void print_plan_human(const SequencePlan& plan) {
  std::cout << "variant: " << variant_name(plan.variant) << "\n";
  std::cout << "q: " << intvec_to_json(plan.q).dump() << "\n";
  std::cout << "p: " << intvec_to_json(plan.p).dump() << "\n";
  std::size_t ok = 0;
  for (const PlanCheck& c : plan.evidence)
    if (c.ok) ++ok;
  std::cout << "checks: " << ok << "/" << plan.evidence.size() << " ok\n";
  for (const PlanCheck& c : plan.evidence) {
    if (c.ok) continue;
    std::cout << "FAILED " << c.name;
    if (c.i) std::cout << " [i=" << *c.i << "]";
    if (c.j) std::cout << " [j=" << *c.j << "]";
    std::cout << ": " << c.lhs << " " << c.op << " " << c.rhs << " is false\n";
  }
}

int cmd_sequences(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  const auto [data, plan] = resolve_plan(h, a);
  if (a.json_out)
    emit(plan_file_to_json(plan_file_of(data, plan)));
  else
    print_plan_human(plan);
  return first_failed(plan.evidence) ? 1 : 0;
}

int cmd_construct(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  const auto [data, plan] = resolve_plan(h, a);
  const Family fam = build_family(h, data, plan);
  try {
    write_family(a.out_dir, fam);
  } catch (const std::filesystem::filesystem_error& e) {
    throw UsageError(e.what());
  } catch (const CertificateRefused&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  std::vector<long> indices;
  for (const FamilyMember& mem : fam.members) indices.push_back(mem.index);
  if (a.json_out) {
    json out;
    out["out"] = a.out_dir;
    out["members"] = indices;
    out["variant"] = variant_name(fam.plan.variant);
    out["q"] = intvec_to_json(fam.plan.q);
    out["p"] = intvec_to_json(fam.plan.p);
    emit(out);
  } else {
    std::cout << "wrote " << indices.size() << " members (indices " << indices.front() << ".."
              << indices.back() << ") to " << a.out_dir << "\n";
  }
  return 0;
}

int cmd_certify(const Args& a) {
  const Family fam = read_family_for_audit(a.dir);
  const ExoticityCertificate cert = certify_family(fam);
  if (a.json_out) {
    emit(certificate_to_json(cert));
    return 0;
  }
  std::cout << "certificate accepted (variant " << variant_name(cert.variant) << ")\n";
  std::cout << "M: " << intvec_to_json(cert.M).dump() << "\n";
  std::size_t yes = 0, pairs = 0;
  for (std::size_t i = 0; i < cert.distinct.size(); ++i)
    for (std::size_t j = i + 1; j < cert.distinct.size(); ++j) {
      ++pairs;
      if (cert.distinct[i][j]) ++yes;
    }
  std::cout << "distinct pairs: " << yes << " of " << pairs << "\n";
  for (std::size_t i = 0; i < cert.distinct.size(); ++i)
    for (std::size_t j = i + 1; j < cert.distinct.size(); ++j)
      if (!cert.distinct[i][j])
        // rows are aligned with member indices -1..n
        std::cout << "pair X_" << static_cast<long>(i) - 1 << ",X_" << static_cast<long>(j) - 1
                  << ": " << cert.reasons[i][j] << "\n";
  return 0;
}

int cmd_d3(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  const auto [data, plan] = resolve_plan(h, a);
  const Family fam = build_family(h, data, plan);
  const D3Report report = d3_family(fam);
  if (a.json_out) {
    emit(d3_report_to_json(report));
    return 0;
  }
  for (const auto& [i, ci] : report.values)
    std::cout << "X_" << i << ": d3 = " << rational_to_string(ci.d3)
              << ", c1^2 = " << rational_to_string(ci.c1_squared) << ", euler = " << ci.euler
              << ", signature = " << ci.signature << "\n";
  std::cout << "all distinct: " << (report.all_distinct ? "yes" : "no") << "\n";
  return 0;
}

int cmd_nonstein(const Args& a) {
  const Handlebody h = read_handlebody(a.file);
  const SteinNonsteinFamily snf = stein_nonstein_family(h, a.n);
  const NonsteinReport report = verify_nonstein(snf);
  if (a.json_out) {
    emit(nonstein_report_to_json(report));
    return 0;
  }
  for (const NonsteinEntry& e : report.entries) {
    std::cout << e.label << ": ";
    if (e.stein)
      std::cout << "Stein\n";
    else if (e.obstruction)
      std::cout << "obstructed (witness square " << e.obstruction->square
                << (e.obstruction->any_orientation ? ", any orientation" : "") << ")\n";
    else
      std::cout << "no obstruction found\n";
  }
  std::cout << "profiles all equal: " << (report.profiles_all_equal ? "yes" : "no") << "\n";
  return 0;
}

int cmd_sum(const Args& a) {
  if (a.sum_a == "-" && a.sum_b == "-")
    throw UsageError("at most one of the two inputs may be standard input");
  const Handlebody left = read_handlebody(a.sum_a);
  const Handlebody right = read_handlebody(a.sum_b);
  emit(handlebody_to_json(boundary_sum(left, right)));
  return 0;
}

int cmd_example(const Args& a) {
  if (a.example_kind != "u")
    throw UsageError("unknown example '" + a.example_kind + "' (available: u)");
  emit(handlebody_to_json(example_u(Int(a.example_m))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cork-forge: exact handle calculus for 2-handlebodies"};
  app.require_subcommand(1);
  Args args;

  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("file", args.file, "input handlebody JSON file, or - for standard input");
  };
  const auto add_json = [&](CLI::App* cmd) {
    cmd->add_flag("--json", args.json_out, "emit a JSON report");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "check a handlebody description");
  add_input(c_validate);
  add_json(c_validate);

  CLI::App* c_invariants =
      app.add_subcommand("invariants", "homology, intersection form and boundary invariants");
  add_input(c_invariants);
  add_json(c_invariants);

  CLI::App* c_sequences =
      app.add_subcommand("sequences", "solve or check the modification plan (q, p, evidence)");
  add_input(c_sequences);
  add_json(c_sequences);
  c_sequences->add_option("--n", args.n, "family size")->check(CLI::PositiveNumber);
  c_sequences->add_option("--variant", args.variant, "plan variant")
      ->check(CLI::IsMember({"standard", "strengthened", "nonstein"}));
  c_sequences->add_option("--plan", args.plan_file, "check this plan file instead of solving");

  CLI::App* c_construct =
      app.add_subcommand("construct", "build the family X_-1..X_n and write it to a directory");
  add_input(c_construct);
  add_json(c_construct);
  c_construct->add_option("--n", args.n, "family size")->check(CLI::PositiveNumber);
  c_construct->add_option("--variant", args.variant, "plan variant")
      ->check(CLI::IsMember({"standard", "strengthened", "nonstein"}));
  c_construct->add_option("--plan", args.plan_file, "build from this plan file instead of solving");
  c_construct->add_option("--out", args.out_dir, "output directory")->required();

  CLI::App* c_certify =
      app.add_subcommand("certify", "audit a family directory and emit the exoticity certificate");
  c_certify->add_option("dir", args.dir, "family directory written by construct")->required();
  add_json(c_certify);

  CLI::App* c_d3 = app.add_subcommand("d3", "boundary contact invariants of the family members");
  add_input(c_d3);
  add_json(c_d3);
  c_d3->add_option("--n", args.n, "family size")->check(CLI::PositiveNumber);
  c_d3->add_option("--variant", args.variant, "plan variant")
      ->check(CLI::IsMember({"standard", "strengthened", "nonstein"}));
  c_d3->add_option("--plan", args.plan_file, "build from this plan file instead of solving");

  CLI::App* c_nonstein = app.add_subcommand(
      "nonstein", "paired Stein/non-Stein boundary sums sharing one homology profile");
  add_input(c_nonstein);
  add_json(c_nonstein);
  c_nonstein->add_option("--n", args.n, "family size")->check(CLI::PositiveNumber);

  CLI::App* c_sum = app.add_subcommand("sum", "boundary connected sum of two handlebodies");
  c_sum->add_option("a", args.sum_a, "left handlebody JSON file, or - for standard input")
      ->required();
  c_sum->add_option("b", args.sum_b, "right handlebody JSON file, or - for standard input")
      ->required();
  add_json(c_sum);

  CLI::App* c_example = app.add_subcommand("example", "emit a model handlebody");
  c_example->add_option("kind", args.example_kind, "example kind (u)")->required();
  c_example->add_option("-m", args.example_m, "framing of the model example")->required();
  add_json(c_example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_validate)) return cmd_validate(args);
    if (app.got_subcommand(c_invariants)) return cmd_invariants(args);
    if (app.got_subcommand(c_sequences)) return cmd_sequences(args);
    if (app.got_subcommand(c_construct)) return cmd_construct(args);
    if (app.got_subcommand(c_certify)) return cmd_certify(args);
    if (app.got_subcommand(c_d3)) return cmd_d3(args);
    if (app.got_subcommand(c_nonstein)) return cmd_nonstein(args);
    if (app.got_subcommand(c_sum)) return cmd_sum(args);
    if (app.got_subcommand(c_example)) return cmd_example(args);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificateRefused& e) {
    std::cerr << "certificate refused: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
