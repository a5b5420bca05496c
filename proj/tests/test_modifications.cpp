#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corkforge/modifications.hpp"
#include "corkforge/pipeline.hpp"
#include "support.hpp"

using namespace corkforge;
using corkforge::testing::mixed_fixture;
using corkforge::testing::random_handlebody;
using corkforge::testing::random_w_moves;

TEST_CASE("upward W-modification bookkeeping") {
  Handlebody h = mixed_fixture();
  GenusWitness seed;
  seed.cls = {0, 2, 0};
  seed.genus = 5;
  h.witnesses.push_back(seed);

  const auto [out, rec] = w_plus(h, "K1", 2);
  REQUIRE(validate(out).ok());
  REQUIRE(out.one_handles == 2);
  REQUIRE(out.handle_count() == 4);

  const TwoHandle& k1 = out.handle("K1");
  REQUIRE(*k1.tb == 1);               // tb raised by p
  REQUIRE(*k1.rot == 0);              // rot untouched
  REQUIRE(k1.framing == 0);           // framing untouched
  REQUIRE(!k1.genus.has_value());     // genus moves to an explicit witness
  REQUIRE(k1.run_over == IntVec({0, 2}));

  const TwoHandle& gamma = out.handle("K1#aux0");
  REQUIRE(gamma.role == Role::auxiliary_plus);
  REQUIRE(gamma.framing == 0);
  REQUIRE(*gamma.tb == 2);
  REQUIRE(*gamma.rot == 0);
  REQUIRE(gamma.run_over == IntVec({0, 1}));
  for (std::size_t i = 0; i < out.handle_count(); ++i) {
    REQUIRE(out.linking(3, i) == 0);
    REQUIRE(out.linking(i, 3) == 0);
  }

  // The seeded witness is re-expressed in the new basis at the same genus;
  // the handle's own genus field becomes the shifted explicit witness.
  REQUIRE(out.witnesses.size() == 2);
  REQUIRE(out.witnesses[0].cls == IntVec({0, 2, 0, -4}));
  REQUIRE(out.witnesses[0].genus == 5);
  REQUIRE(out.witnesses[1].cls == IntVec({0, 1, 0, -2}));
  REQUIRE(out.witnesses[1].genus == 3);
  REQUIRE(out.witnesses[1].provenance == Provenance::prop_genus_shift);

  // Squares survive the re-expression: the auxiliary row is zero.
  REQUIRE(bilinear(out.witnesses[1].cls, out.linking, out.witnesses[1].cls) == 0);

  // K0 keeps its own genus field.
  REQUIRE(out.handle("K0").genus == Int(0));

  REQUIRE(rec.kind == ModKind::w_plus);
  REQUIRE(rec.target == "K1");
  REQUIRE(rec.p == 2);
  REQUIRE(*rec.created_one_handle == 1);
  REQUIRE(*rec.created_aux_id == "K1#aux0");
}

TEST_CASE("downward W-modification leaves the target alone") {
  const Handlebody h = mixed_fixture();
  const auto [out, rec] = w_minus(h, "K1", 2);
  REQUIRE(validate(out).ok());
  REQUIRE(out.one_handles == 2);

  REQUIRE(out.handle("K1").tb == h.handle("K1").tb);
  REQUIRE(out.handle("K1").rot == h.handle("K1").rot);
  REQUIRE(out.handle("K1").framing == h.handle("K1").framing);
  REQUIRE(out.handle("K1").genus == Int(1));  // kept
  REQUIRE(out.handle("K1").run_over == IntVec({0, 0}));

  const TwoHandle& gamma = out.handle("K1#aux0");
  REQUIRE(gamma.role == Role::auxiliary_minus);
  REQUIRE(gamma.framing == 0);
  REQUIRE(*gamma.tb == 1);
  REQUIRE(*gamma.rot == 1);
  REQUIRE(gamma.framing == *gamma.tb - 1);  // attached Stein-framed
  REQUIRE(gamma.run_over == IntVec({0, 1}));
  REQUIRE(*rec.created_aux_id == "K1#aux0");
}

TEST_CASE("auxiliary ids count per target") {
  Handlebody h = mixed_fixture();
  h = w_plus(h, "K0", 1).first;
  h = w_minus(h, "K0", 3).first;
  h = w_plus(h, "K1", 1).first;
  REQUIRE(h.index_of("K0#aux0").has_value());
  REQUIRE(h.index_of("K0#aux1").has_value());
  REQUIRE(h.index_of("K1#aux0").has_value());
}

TEST_CASE("W-modifications reject bad arguments") {
  const Handlebody h = mixed_fixture();
  REQUIRE_THROWS_AS(w_plus(h, "K1", 0), std::invalid_argument);
  REQUIRE_THROWS_AS(w_minus(h, "K1", -1), std::invalid_argument);
  REQUIRE_THROWS_AS(w_plus(h, "nope", 1), std::invalid_argument);
  Handlebody bare = h;
  bare.handles[0].tb.reset();
  bare.handles[0].rot.reset();
  REQUIRE_THROWS_AS(w_plus(bare, "K0", 1), std::invalid_argument);
}

TEST_CASE("W-modifications preserve the homology profile") {
  std::mt19937 rng(190401);
  for (int trial = 0; trial < 60; ++trial) {
    const Handlebody before = random_handlebody(rng);
    const Handlebody after = random_w_moves(before, rng, 5);
    REQUIRE(profiles_equal(homology(before), homology(after)));
  }
}

TEST_CASE("replay reproduces the handlebody bit-exactly") {
  ModificationLog log;
  log.base = mixed_fixture();
  Handlebody h = log.base;
  for (const auto& step : {std::pair<std::string, Int>{"K0", 1}, {"K1", 2}}) {
    auto [next, rec] = w_plus(h, step.first, step.second);
    h = next;
    log.records.push_back(rec);
  }
  {
    auto [next, rec] = apply_record(h, make_zigzag_record("E2", 2, 1));
    h = next;
    log.records.push_back(rec);
  }
  REQUIRE(replay(log) == h);
  REQUIRE(replay(log) == replay(log));
}

TEST_CASE("sign swap is an involution and matches the direct move") {
  ModificationLog log;
  log.base = mixed_fixture();
  log.records.push_back(w_plus(log.base, "K1", 2).second);

  const auto [swapped, swapped_log] = swap_sign(log, 0);
  REQUIRE(swapped == w_minus(log.base, "K1", 2).first);
  REQUIRE(swapped_log.records[0].kind == ModKind::w_minus);

  const auto [back, back_log] = swap_sign(swapped_log, 0);
  REQUIRE(back == replay(log));
  REQUIRE(back_log.records[0] == log.records[0]);

  REQUIRE_THROWS_AS(swap_sign(log, 5), std::invalid_argument);
  ModificationLog zz;
  zz.base = mixed_fixture();
  zz.records.push_back(make_zigzag_record("E2", 1, 0));
  REQUIRE_THROWS_AS(swap_sign(zz, 0), std::invalid_argument);
}

TEST_CASE("boundary connected sum") {
  const Handlebody a = example_u(-3);
  const Handlebody b = example_u(0);
  const Handlebody sum = boundary_sum(a, b);
  REQUIRE(validate(sum).ok());
  REQUIRE(sum.handle_count() == 2);
  REQUIRE(sum.handles[0].id == "K0");
  REQUIRE(sum.handles[1].id == "r.K0");

  const HomologyProfile p = homology(sum);
  REQUIRE(p.b2 == 2);
  REQUIRE(p.intersection_matrix == Matrix(2, 2, {-3, 0, 0, 0}));
  REQUIRE(p.euler == 3);
  REQUIRE(p.signature == -1);
  REQUIRE(p.h1_invariant_factors == IntVec{});
  REQUIRE(p.boundary_h1_invariant_factors == IntVec({3, 0}));
  REQUIRE(p.boundary_b1 == 1);

  // Repeated prefixing on a second collision.
  const Handlebody twice = boundary_sum(sum, a);
  REQUIRE(twice.handles[2].id == "r.r.K0");

  // Run-over blocks stack disjointly.
  const Handlebody m2 = boundary_sum(mixed_fixture(), mixed_fixture());
  REQUIRE(m2.one_handles == 2);
  REQUIRE(m2.handle("E2").run_over == IntVec({1, 0}));
  REQUIRE(m2.handle("r.E2").run_over == IntVec({0, 1}));

  // Witness classes re-index into the right block.
  Handlebody aw = a;
  aw.witnesses.push_back(GenusWitness{{1}, 0, Provenance::input});
  Handlebody bw = b;
  bw.witnesses.push_back(GenusWitness{{1}, 0, Provenance::input});
  const Handlebody sw = boundary_sum(aw, bw);
  REQUIRE(sw.witnesses.size() == 2);
  REQUIRE(sw.witnesses[0].cls == IntVec({1, 0}));
  REQUIRE(sw.witnesses[1].cls == IntVec({0, 1}));
  REQUIRE(sw.witnesses[0].provenance == Provenance::boundary_sum);
  REQUIRE(sw.witnesses[1].provenance == Provenance::boundary_sum);
}

TEST_CASE("boundary sum profiles add blockwise") {
  std::mt19937 rng(321321);
  for (int trial = 0; trial < 20; ++trial) {
    const Handlebody a = random_handlebody(rng);
    const Handlebody b = random_handlebody(rng);
    const HomologyProfile pa = homology(a), pb = homology(b), ps = homology(boundary_sum(a, b));
    REQUIRE(ps.b2 == pa.b2 + pb.b2);
    REQUIRE(ps.euler == pa.euler + pb.euler - 1);
    REQUIRE(ps.signature == pa.signature + pb.signature);
  }
}

TEST_CASE("fundamental group certificate counts cancelling pairs") {
  ModificationLog log;
  log.base = mixed_fixture();
  Handlebody h = log.base;
  for (int i = 0; i < 3; ++i) {
    auto [next, rec] = i % 2 == 0 ? w_plus(h, "K0", i + 1) : w_minus(h, "K0", i + 1);
    h = next;
    log.records.push_back(rec);
  }
  log.records.push_back(make_zigzag_record("E2", 1, 0));

  const TietzeCertificate cert = tietze_certificate(log);
  REQUIRE(cert.steps.size() == 3);
  for (const TietzeStep s : cert.steps) REQUIRE(s == TietzeStep::add_cancelling_pair);
  REQUIRE(cert.statement == "pi_1 preserved");
  REQUIRE(tietze_step_name(TietzeStep::add_cancelling_pair) == "add_cancelling_pair");
}
