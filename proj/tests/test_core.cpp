#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corkforge/homology.hpp"
#include "support.hpp"

using namespace corkforge;
using corkforge::testing::mixed_fixture;
using corkforge::testing::random_handlebody;

namespace {

Handlebody unknot(const Int& framing) {
  Handlebody h;
  h.one_handles = 0;
  TwoHandle k;
  k.id = "K0";
  k.role = Role::extra;
  k.framing = framing;
  h.handles.push_back(k);
  h.linking = Matrix(1, 1, {framing});
  return h;
}

}  // namespace

TEST_CASE("validation accepts the fixtures") {
  REQUIRE(validate(mixed_fixture()).ok());
  REQUIRE(validate(unknot(-3)).ok());
  REQUIRE(validate(Handlebody{}).ok());
}

TEST_CASE("validation catches each structural violation") {
  {
    Handlebody h = unknot(2);
    h.linking(0, 0) = 5;  // diagonal != framing
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.linking(0, 1) = 7;  // asymmetric
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.handles[1].id = "K0";  // duplicate id
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.handles[0].run_over = {0, 0};  // wrong length
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.handles[0].rot.reset();  // tb without rot
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.handles[0].genus = -1;
    REQUIRE(!validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    h.handles[2].genus = 5;  // genus over a handle with nonzero run_over
    REQUIRE(!validate(h).ok());
  }
  {
    // tb + |rot| <= 2g - 1 boundary: tb 0, rot 0, g 0 gives 0 <= -1, invalid.
    Handlebody h = unknot(0);
    h.handles[0].tb = 0;
    h.handles[0].rot = 0;
    h.handles[0].genus = 0;
    REQUIRE(!validate(h).ok());
    h.handles[0].tb = -1;  // -1 <= -1, valid again
    REQUIRE(validate(h).ok());
  }
  {
    Handlebody h = mixed_fixture();
    GenusWitness w;
    w.cls = {0, 0, 1};  // E2 runs over the 1-handle: not in ker(boundary)
    w.genus = 2;
    h.witnesses.push_back(w);
    REQUIRE(!validate(h).ok());
    h.witnesses[0].cls = {1, 0, 0};
    REQUIRE(validate(h).ok());
  }
}

TEST_CASE("homology of the framed unknot") {
  const HomologyProfile p = homology(unknot(-3));
  REQUIRE(p.h1_invariant_factors == IntVec{});
  REQUIRE(p.b2 == 1);
  REQUIRE(p.intersection_matrix == Matrix(1, 1, {-3}));
  REQUIRE(p.signature == -1);
  REQUIRE(p.euler == 2);
  REQUIRE(p.boundary_h1_invariant_factors == IntVec{3});
  REQUIRE(p.boundary_b1 == 0);
}

TEST_CASE("homology of the zero-framed unknot") {
  const HomologyProfile p = homology(unknot(0));
  REQUIRE(p.b2 == 1);
  REQUIRE(p.intersection_matrix == Matrix(1, 1, {0}));
  REQUIRE(p.signature == 0);
  REQUIRE(p.boundary_h1_invariant_factors == IntVec{0});
  REQUIRE(p.boundary_b1 == 1);
}

TEST_CASE("homology of the mixed fixture") {
  const HomologyProfile p = homology(mixed_fixture());
  REQUIRE(p.h1_invariant_factors == IntVec{});
  REQUIRE(p.b2 == 2);
  REQUIRE(p.intersection_matrix == Matrix(2, 2, {-3, 1, 1, 0}));
  REQUIRE(p.signature == 0);
  REQUIRE(p.euler == 3);
  REQUIRE(p.boundary_h1_invariant_factors == IntVec{});
  REQUIRE(p.boundary_b1 == 0);
}

TEST_CASE("a 1-handle with no 2-handle over it contributes free H_1") {
  Handlebody h;
  h.one_handles = 2;
  TwoHandle k;
  k.id = "A";
  k.framing = 1;
  k.run_over = {2, 0};
  h.handles.push_back(k);
  h.linking = Matrix(1, 1, {1});
  const HomologyProfile p = homology(h);
  REQUIRE(p.h1_invariant_factors == IntVec({2, 0}));
  REQUIRE(p.b2 == 0);
  REQUIRE(p.euler == 0);
}

TEST_CASE("boundary homology matches the linking matrix when there are no 1-handles") {
  std::mt19937 rng(7081);
  for (int trial = 0; trial < 50; ++trial) {
    Handlebody h = random_handlebody(rng);
    if (h.one_handles != 0) continue;
    const HomologyProfile p = homology(h);
    REQUIRE(p.boundary_h1_invariant_factors == cokernel_invariant_factors(h.linking));
  }
}

TEST_CASE("homology computation is deterministic") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 25; ++trial) {
    const Handlebody h = random_handlebody(rng);
    const HomologyProfile a = homology(h);
    const HomologyProfile b = homology(h);
    REQUIRE(profiles_equal(a, b));
    REQUIRE(homology_basis(h) == homology_basis(h));
  }
}

TEST_CASE("all_witnesses merges handle genus fields and the explicit list") {
  Handlebody h = mixed_fixture();
  GenusWitness w;
  w.cls = {1, -2, 0};
  w.genus = 4;
  w.provenance = Provenance::prop_genus_shift;
  h.witnesses.push_back(w);

  const std::vector<GenusWitness> all = all_witnesses(h);
  REQUIRE(all.size() == 3);  // K0 and K1 carry genus fields, plus the explicit one
  REQUIRE(all[0].cls == IntVec({1, 0, 0}));
  REQUIRE(all[0].genus == 0);
  REQUIRE(all[1].cls == IntVec({0, 1, 0}));
  REQUIRE(all[1].genus == 1);
  REQUIRE(all[2] == w);
}
