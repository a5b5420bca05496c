#ifndef CORKFORGE_TESTS_SUPPORT_HPP
#define CORKFORGE_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "corkforge/pipeline.hpp"

namespace corkforge::testing {

/// A small valid handlebody with one 1-handle, two basis handles with genus
/// data, and one extra handle running over the 1-handle.  Deliberately not
/// Stein-framed on the extra handle, so the plan needs real auxiliary
/// twists (q = (0, 2, 2)).
inline Handlebody mixed_fixture() {
  Handlebody h;
  h.one_handles = 1;

  TwoHandle k0;
  k0.id = "K0";
  k0.role = Role::basis;
  k0.framing = -3;
  k0.tb = -2;
  k0.rot = 1;
  k0.run_over = {0};
  k0.genus = 0;

  TwoHandle k1;
  k1.id = "K1";
  k1.role = Role::basis;
  k1.framing = 0;
  k1.tb = -1;
  k1.rot = 0;
  k1.run_over = {0};
  k1.genus = 1;

  TwoHandle e2;
  e2.id = "E2";
  e2.role = Role::extra;
  e2.framing = 2;
  e2.tb = 1;
  e2.rot = 2;
  e2.run_over = {1};

  h.handles = {k0, k1, e2};
  h.linking = Matrix(3, 3, {-3, 1, 0, 1, 0, -2, 0, -2, 2});
  return h;
}

/// Random valid handlebody: up to 4 one-handles, up to 6 two-handles,
/// entries bounded by 5, full Legendrian data, genus only where it is
/// admissible (zero run_over and slice-Bennequin satisfied).
inline Handlebody random_handlebody(std::mt19937& rng) {
  std::uniform_int_distribution<int> s_dist(0, 4), c_dist(1, 6), entry(-5, 5), coin(0, 1),
      genus_dist(0, 5);
  Handlebody h;
  h.one_handles = static_cast<std::size_t>(s_dist(rng));
  const std::size_t c = static_cast<std::size_t>(c_dist(rng));

  h.linking = Matrix(c, c);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i; j < c; ++j) {
      const Int v = entry(rng);
      h.linking(i, j) = v;
      h.linking(j, i) = v;
    }

  for (std::size_t i = 0; i < c; ++i) {
    TwoHandle k;
    k.id = "H" + std::to_string(i);
    k.role = Role::extra;
    k.framing = h.linking(i, i);
    k.tb = Int(entry(rng));
    k.rot = Int(entry(rng));
    for (std::size_t r = 0; r < h.one_handles; ++r) k.run_over.push_back(entry(rng));
    if (is_zero_vector(k.run_over) && coin(rng) == 1) {
      const Int g = genus_dist(rng);
      if (*k.tb + abs_int(*k.rot) <= 2 * g - 1) k.genus = g;
    }
    h.handles.push_back(std::move(k));
  }
  return h;
}

/// Apply up to `max_moves` random W-modifications to h.
inline Handlebody random_w_moves(Handlebody h, std::mt19937& rng, int max_moves) {
  std::uniform_int_distribution<int> count_dist(0, max_moves), p_dist(1, 3), coin(0, 1);
  const int moves = count_dist(rng);
  for (int m = 0; m < moves; ++m) {
    std::uniform_int_distribution<std::size_t> pick(0, h.handle_count() - 1);
    const std::string target = h.handles[pick(rng)].id;
    const Int p = p_dist(rng);
    h = coin(rng) == 1 ? w_plus(h, target, p).first : w_minus(h, target, p).first;
  }
  return h;
}

/// Random good Stein handlebody with second homology of rank 1: one basis
/// handle K0 off every 1-handle, plus up to one Stein-framed extra handle
/// per 1-handle, each running once over its own 1-handle.
inline Handlebody random_good_stein_b2_one(std::mt19937& rng) {
  std::uniform_int_distribution<int> s_dist(0, 3), m_dist(-5, 5), r_dist(-4, 4), t_dist(-3, 3),
      off_dist(-3, 3), pad_dist(0, 2), coin(0, 1);
  Handlebody h;
  h.one_handles = static_cast<std::size_t>(s_dist(rng));

  TwoHandle k0;
  k0.id = "K0";
  k0.role = Role::basis;
  k0.framing = m_dist(rng);
  k0.tb = k0.framing + 1;  // Stein framing
  k0.rot = Int(r_dist(rng));
  k0.run_over.assign(h.one_handles, 0);
  // smallest admissible genus: tb + |rot| <= 2g - 1
  const Int need = *k0.tb + abs_int(*k0.rot) + 1;
  Int g0 = need <= 0 ? Int(0) : floor_div(need + 1, 2);
  g0 += pad_dist(rng);
  k0.genus = g0;
  h.handles.push_back(k0);

  std::vector<TwoHandle> extras;
  for (std::size_t r = 0; r < h.one_handles; ++r) {
    if (coin(rng) == 0) continue;
    TwoHandle e;
    e.id = "E" + std::to_string(r);
    e.role = Role::extra;
    e.tb = Int(t_dist(rng));
    e.rot = Int(r_dist(rng));
    e.framing = *e.tb - 1;  // Stein framing
    e.run_over.assign(h.one_handles, 0);
    e.run_over[r] = 1;
    h.handles.push_back(std::move(e));
  }

  const std::size_t c = h.handle_count();
  h.linking = Matrix(c, c);
  for (std::size_t i = 0; i < c; ++i) h.linking(i, i) = h.handles[i].framing;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) {
      const Int v = off_dist(rng);
      h.linking(i, j) = v;
      h.linking(j, i) = v;
    }
  return h;
}

/// Build the full family of h (basis designated from the basis-role
/// handles, first one distinguished) with the minimal plan.
inline Family build(const Handlebody& h, std::size_t n, Variant variant = Variant::standard) {
  const std::vector<std::string> basis = default_basis_ids(h);
  const BasisData data = extract_data(h, basis, basis.front());
  return build_family(h, data, solve_plan(data, n, variant));
}

/// All 2^n sign assignments over the pending finishing handles of h.
inline std::vector<SteinStructureChoice> all_choices(const Handlebody& h) {
  const std::vector<std::string> pending = pending_finishing_ids(h);
  std::vector<SteinStructureChoice> out;
  const std::size_t total = std::size_t(1) << pending.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    SteinStructureChoice choice;
    for (std::size_t b = 0; b < pending.size(); ++b)
      choice.delta_signs[pending[b]] = (mask >> b) & 1 ? 1 : -1;
    out.push_back(std::move(choice));
  }
  return out;
}

}  // namespace corkforge::testing

#endif  // CORKFORGE_TESTS_SUPPORT_HPP
