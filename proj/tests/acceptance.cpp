// Acceptance gate: one pass/fail line per shipped guarantee, nonzero exit on
// any failure.  Run via ctest or directly from the build tree.

#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "corkforge/certify.hpp"
#include "corkforge/json_io.hpp"
#include "support.hpp"

using namespace corkforge;
using corkforge::testing::all_choices;
using corkforge::testing::build;
using corkforge::testing::mixed_fixture;
using corkforge::testing::random_good_stein_b2_one;
using corkforge::testing::random_handlebody;
using corkforge::testing::random_w_moves;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

template <typename F>
void criterion(int number, const std::string& desc, F body) {
  try {
    body();
    std::cout << "PASS criterion " << number << ": " << desc << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "FAIL criterion " << number << ": " << desc << " (" << e.what() << ")\n";
  }
}

void expect_refused(Family f, const std::function<void(Family&)>& mutate, const std::string& tag) {
  mutate(f);
  try {
    certify_family(f);
  } catch (const CertificateRefused&) {
    return;
  }
  throw std::runtime_error("mutation not refused: " + tag);
}

}  // namespace

int main() {
  criterion(1, "minimal modification sequences on the model examples", [] {
    for (int m = -6; m <= 4; ++m) {
      const Handlebody h = example_u(m);
      const BasisData data = extract_data(h, {"K0"}, "K0");
      const SequencePlan plan = solve_plan(data, 5, Variant::standard);
      expect(first_failed(plan.evidence) == nullptr, "minimal plan carries a failed condition");
      const Int first = std::max(Int(1), Int(m + 2));
      for (std::size_t i = 0; i < 5; ++i) {
        std::ostringstream os;
        os << "framing " << m << ": p_" << (i + 1) << " = " << plan.p[i] << ", expected "
           << (first + Int(i));
        expect(plan.p[i] == first + Int(i), os.str());
      }
    }
  });

  criterion(2, "d3 invariants separate the rank-one family boundaries", [] {
    const D3Report r = d3_family(build(example_u(-3), 3));
    const std::map<long, Rat> want = {{1, Rat(-1)}, {2, Rat(-7, 3)}, {3, Rat(-13, 3)}};
    expect(r.values.size() == want.size(), "wrong number of d3 values");
    for (const auto& [i, v] : want) {
      expect(r.values.count(i) == 1, "missing member " + std::to_string(i));
      expect(r.values.at(i).d3 == v,
             "member " + std::to_string(i) + ": d3 = " + rational_to_string(r.values.at(i).d3) +
                 ", expected " + rational_to_string(v));
    }
    expect(r.all_distinct, "d3 values are not pairwise distinct");
  });

  criterion(3, "modifications preserve the homology profile", [] {
    std::mt19937 rng(86000);
    for (int trial = 0; trial < 200; ++trial) {
      const Handlebody before = random_handlebody(rng);
      const Handlebody after = random_w_moves(before, rng, 5);
      expect(profiles_equal(homology(before), homology(after)),
             "profile changed on trial " + std::to_string(trial));
    }
  });

  criterion(4, "zig-zag bookkeeping table", [] {
    TwoHandle k;
    k.id = "K";
    k.framing = -7;
    const Int starts[][2] = {{0, 0}, {-1, 0}, {-3, 2}, {4, -4}, {2, 1}};
    for (const auto& s : starts)
      for (Int t = 0; t <= 10; ++t)
        for (Int d = 0; d <= t; ++d) {
          k.tb = s[0];
          k.rot = s[1];
          const TwoHandle z = zigzag(k, t, d);
          expect(*z.tb == s[0] - t && *z.rot == s[1] + 2 * d - t && z.framing == k.framing,
                 "zig-zag table mismatch");
          for (Int t2 = 0; t2 + t <= 10; ++t2)
            for (Int d2 = 0; d2 <= t2; ++d2)
              expect(zigzag(z, t2, d2) == zigzag(k, t + t2, d + d2),
                     "zig-zag composition mismatch");
        }
  });

  criterion(5, "members admit Stein structures under every finishing choice", [] {
    for (const Int m : {Int(-3), Int(0)}) {
      const Family f = build(example_u(m), 4);
      for (const FamilyMember& mem : f.members) {
        if (mem.index < 1) continue;
        expect(mem.stein_after_finishing, "member not Stein after finishing");
        for (const SteinStructureChoice& choice : all_choices(mem.space))
          expect(is_stein_handlebody(apply_choice(mem.space, choice)),
                 "a finishing choice fails to be Stein");
      }
    }
    const Family f = build(example_u(-3), 2);
    expect(f.member(0).stein_after_finishing, "untwisted member of a Stein input not Stein");
    expect(f.member(-1).stein_after_finishing, "fully downward member of a Stein input not Stein");
  });

  criterion(6, "certificates accepted for honest families, refused for tampered ones", [] {
    const Family u0 = build(example_u(0), 4);
    const ExoticityCertificate c0 = certify_family(u0);
    expect(c0.M == IntVec({2, 4, 6, 8}), "wrong pairing magnitudes for the framing-0 family");
    std::size_t distinguished = 0;
    for (std::size_t a = 0; a < c0.distinct.size(); ++a)
      for (std::size_t b = a + 1; b < c0.distinct.size(); ++b)
        if (c0.distinct[a][b]) ++distinguished;
    expect(distinguished == 14, "expected all pairs but the untwisted two to be distinguished");
    expect(c0.reasons[0][1] == "not distinguished by this method",
           "missing caveat on the untwisted pair");

    const ExoticityCertificate c3 = certify_family(build(example_u(-3), 2));
    expect(c3.M == IntVec({3, 5}), "wrong pairing magnitudes for the framing -3 family");

    const Family u0s = build(example_u(0), 2);
    const Family u3 = build(example_u(-3), 2);
    const Family xb = build(mixed_fixture(), 2);

    {
      Family f = u0s;
      f.plan.p = IntVec({2, 2});
      try {
        certify_family(f);
        throw std::runtime_error("non-increasing p accepted");
      } catch (const CertificateRefused& e) {
        expect(std::string(e.what()) == "p_i > p_{i-1} violated",
               std::string("unexpected refusal message: ") + e.what());
      }
    }

    int tag = 0;
    const auto kill = [&](const Family& base, const std::function<void(Family&)>& mutate) {
      expect_refused(base, mutate, std::to_string(++tag));
    };
    kill(u0s, [](Family& f) { f.plan.p[0] = 0; });
    kill(u0s, [](Family& f) { f.plan.p[0] = 1; });
    kill(u0s, [](Family& f) { f.plan.q[0] = 1; });
    kill(u0s, [](Family& f) { f.plan.variant = Variant::nonstein; });
    kill(u0s, [](Family& f) { f.data.m[0] = 1; });
    kill(u0s, [](Family& f) { f.base.handles[0].framing = -1; });
    kill(u0s, [](Family& f) { f.plan.p[1] = 50; });
    kill(u0s, [](Family& f) { f.members[3].space.witnesses[0].genus += 1; });
    kill(u0s, [](Family& f) { f.members[2].space.witnesses.clear(); });
    kill(u0s, [](Family& f) { f.members[1].space.handles[0].genus = 1; });
    kill(u0s, [](Family& f) { f.members[0].space.handles[0].genus.reset(); });
    kill(u3, [](Family& f) { f.plan.p = IntVec({1, 1}); });
    kill(u3, [](Family& f) { f.data.g[0] = 1; });
    kill(u3, [](Family& f) { f.data.r[0] = 0; });
    kill(u3, [](Family& f) { f.base.handles[0].rot = 0; });
    kill(u3, [](Family& f) { f.members[2].classes[0][1] = 0; });
    kill(u3, [](Family& f) {
      for (IntVec& cls : f.members[2].classes) cls[0] *= 2;
      f.members[2].space.witnesses.clear();
    });
    kill(u3, [](Family& f) { f.members[2].space.witnesses[0].genus = 0; });
    kill(xb, [](Family& f) { f.plan.q[1] = 0; });
    kill(xb, [](Family& f) { f.plan.q[2] = 1; });
    kill(xb, [](Family& f) { f.data.m[1] = 5; });
    kill(xb, [](Family& f) { f.data.ids[1] = "E2"; });
    expect(tag >= 20, "kill list shrank below twenty mutations");
  });

  criterion(7, "chosen Stein structures realize the guaranteed pairing", [] {
    for (int m = -5; m <= 3; ++m) {
      const Family f = build(example_u(m), 3);
      for (long i = 1; i <= 3; ++i) {
        const FamilyMember& mem = f.member(i);
        const Int pairing = c1_pairing(mem.space, all_minus_choice(mem.space), mem.classes[0]);
        expect(abs_int(pairing) == f.plan.pairing_magnitude(f.data, i),
               "pairing mismatch at framing " + std::to_string(m));
      }
    }
    std::mt19937 rng(700700);
    for (int trial = 0; trial < 50; ++trial) {
      const Family f = build(random_good_stein_b2_one(rng), 3);
      for (long i = 1; i <= 3; ++i) {
        const FamilyMember& mem = f.member(i);
        const Int pairing = c1_pairing(mem.space, all_minus_choice(mem.space), mem.classes[0]);
        expect(abs_int(pairing) == f.plan.pairing_magnitude(f.data, i),
               "pairing mismatch on fuzzed input " + std::to_string(trial));
      }
    }
  });

  criterion(8, "paired Stein and non-Stein families share one homology profile", [] {
    const SteinNonsteinFamily snf = stein_nonstein_family(example_u(-3), 2);
    const NonsteinReport r = verify_nonstein(snf);
    expect(r.entries.size() == 4, "expected two members on each side");
    expect(r.all_s_stein, "a Stein-side member failed the Stein check");
    expect(r.all_n_obstructed, "a non-Stein-side member carries no obstruction");
    expect(r.profiles_all_equal, "members disagree on the homology profile");
    expect(profiles_equal(r.profile, homology(boundary_sum(example_u(-3), example_u(0)))),
           "profile differs from the plain boundary sum");
    expect(r.profile.intersection_matrix == Matrix(2, 2, {-3, 0, 0, 0}),
           "unexpected intersection form");
    expect(r.profile.euler == 3, "unexpected Euler characteristic");
  });

  criterion(9, "adjunction sweep clears every stored witness and flags corrupted ones", [] {
    std::mt19937 rng(901901);
    std::vector<Family> families = {build(example_u(0), 4), build(example_u(-3), 3),
                                    build(mixed_fixture(), 2)};
    for (int trial = 0; trial < 10; ++trial)
      families.push_back(build(random_good_stein_b2_one(rng), 2));
    for (const Family& f : families) {
      const std::vector<AdjunctionEntry> entries = adjunction_sweep(f);
      expect(!entries.empty(), "sweep produced no entries");
      for (const AdjunctionEntry& e : entries)
        expect(e.ok, "witness fails its adjunction bound in member " + std::to_string(e.member));
    }
    Family bad = build(example_u(-3), 2);
    bad.members[2].space.witnesses[0].genus = 0;
    bool flagged = false;
    for (const AdjunctionEntry& e : adjunction_sweep(bad))
      if (!e.ok) flagged = true;
    expect(flagged, "corrupted witness not flagged");
  });

  if (failures != 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
