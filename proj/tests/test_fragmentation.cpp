#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lipspace/fragmentation.hpp"

using namespace lipspace;

namespace {

PointSet all_points(const BitopModel& m) {
  PointSet A(m.size());
  for (std::size_t i = 0; i < A.size(); ++i) A[i] = i;
  return A;
}

bool contains(const PointSet& s, std::size_t v) {
  return std::binary_search(s.begin(), s.end(), v);
}

}  // namespace

TEST_CASE("one derivation step on a line removes everything") {
  ModelPtr m = make_model("interval_grid:101");
  // Neighborhoods have width 2*delta = 0.02, far below eps.
  PointSet out = derive_once(*m, all_points(*m), 0.5, 0.01);
  CHECK(out.empty());
}

TEST_CASE("derivation keeps points whose neighborhood is wide") {
  ModelPtr m = make_model("fan:8");
  PointSet out = derive_once(*m, all_points(*m), 1.0, 0.05);
  // Spike neighborhoods are {spike, apex} with diameter 0.5; only the
  // apex sees two spikes at mutual distance 1.
  CHECK(out == PointSet{0});
}

TEST_CASE("resolution gate") {
  ModelPtr m = make_model("interval_grid:11");
  CHECK_THROWS_AS(derive_once(*m, all_points(*m), 0.5, 0.2), Error);
  try {
    derive_once(*m, all_points(*m), 0.5, 0.2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
  }
  CHECK_THROWS_AS(derive_once(*m, all_points(*m), -1.0, 0.01), Error);
}

TEST_CASE("szlenk verdicts across the zoo") {
  auto fan = szlenk_index(make_model("fan:8"), 1.0, 0.05);
  REQUIRE(fan.finite);
  CHECK(fan.finite_index() == 2);
  CHECK(fan.levels[1] == PointSet{0});

  auto grid = szlenk_index(make_model("interval_grid:101"), 0.5, 0.01);
  REQUIRE(grid.finite);
  CHECK(grid.finite_index() == 1);

  auto cantor = szlenk_index(make_model("cantor:3"), 1.0, 0.25);
  REQUIRE_FALSE(cantor.finite);
  CHECK(cantor.fixpoint().size() == 8);  // every leaf keeps its sibling
}

TEST_CASE("derivation levels are nested") {
  auto trace = szlenk_index(make_model("fan:8"), 1.0, 0.05);
  for (std::size_t k = 1; k < trace.levels.size(); ++k)
    for (std::size_t x : trace.levels[k]) CHECK(contains(trace.levels[k - 1], x));
}

TEST_CASE("witness search certifies the tree and rejects the fan") {
  auto w = find_witness(make_model("cantor:4"), 0.25);
  REQUIRE(w.has_value());
  CHECK(w->set().size() == 16);
  CHECK(w->eps() == 0.25);
  CHECK_FALSE(find_witness(make_model("fan:8"), 1.0).has_value());
}

TEST_CASE("witness construction re-verifies the certificate") {
  ModelPtr m = make_model("interval_grid:11");
  try {
    NonFragWitness(m, {0, 10}, 0.4, 0.05);  // neighborhoods are singletons
    FAIL("invalid witness accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WitnessInvalid);
  }
  CHECK_THROWS_AS(NonFragWitness(m, {}, 0.4, 0.05), Error);
}

TEST_CASE("dyadic families satisfy the separation invariants") {
  ModelPtr m = make_model("cantor:4");
  auto w = find_witness(m, 0.25);
  REQUIRE(w.has_value());
  const int depth = 4;
  DyadicFamilies fam = build_dyadic_families(*w, depth);
  CHECK(fam.nodes.size() == (std::size_t(1) << (depth + 1)) - 1);
  const double eps = fam.eps;
  int leaves = 0;
  for (const auto& [key, node] : fam.nodes) {
    CHECK_FALSE(node.V.empty());
    CHECK(contains(node.V, node.x));
    for (std::size_t v : node.V) CHECK(contains(node.U, v));
    // V stays eps-separated from the outside of U.
    for (std::size_t v : node.V)
      for (std::size_t y = 0; y < m->size(); ++y)
        if (!contains(node.U, y)) CHECK(m->d()(v, y) > eps);
    if ((int)key.size() == depth) {
      ++leaves;
      CHECK(node.V.size() == 1);
    }
    if (!key.empty()) {
      const auto& parent = fam.nodes.at(key.substr(0, key.size() - 1));
      for (std::size_t u : node.U) CHECK(contains(parent.U, u));
      if (key.back() == '1') {
        const auto& sibling = fam.nodes.at(key.substr(0, key.size() - 1) + "0");
        for (std::size_t u : node.U) CHECK_FALSE(contains(sibling.U, u));
      }
    }
  }
  CHECK(leaves == 1 << depth);
}

TEST_CASE("dyadic construction reports exhaustion honestly") {
  auto w = find_witness(make_model("cantor:4"), 0.25);
  REQUIRE(w.has_value());
  try {
    build_dyadic_families(*w, 5);  // 32 leaves from a 16-point witness
    FAIL("impossible depth accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DepthExhausted);
  }
  CHECK_THROWS_AS(build_dyadic_families(*w, 0), Error);
}

TEST_CASE("quotient inequality holds for the identity map") {
  ModelPtr fan = make_model("fan:8");
  std::vector<std::size_t> id(fan->size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  auto res = check_quotient_monotonicity(fan, fan, id, {0.1, 0.3, 0.5});
  CHECK(res.lip_phi == doctest::Approx(1.0));
  CHECK(res.c == doctest::Approx(2.0));
  CHECK(res.all_ok);
  REQUIRE(res.rows.size() == 3);
  // The modulus envelope is monotone by construction.
  for (std::size_t k = 1; k < res.modulus.size(); ++k) {
    CHECK(res.modulus[k].first > res.modulus[k - 1].first);
    CHECK(res.modulus[k].second >= res.modulus[k - 1].second);
  }
}

TEST_CASE("quotient check over a tree truncation") {
  ModelPtr K1 = make_model("cantor:3");
  ModelPtr K2 = make_model("cantor:6");
  std::vector<std::size_t> phi(K2->size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = i >> 3;
  auto res = check_quotient_monotonicity(K1, K2, phi, {0.1, 0.2, 0.4});
  CHECK(res.all_ok);
}

TEST_CASE("quotient check rejects maps that are not onto") {
  ModelPtr m = make_model("fan:4");
  std::vector<std::size_t> phi(m->size(), 0);
  try {
    check_quotient_monotonicity(m, m, phi, {0.1});
    FAIL("non-onto map accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
  CHECK_THROWS_AS(check_quotient_monotonicity(m, m, {0, 1}, {0.1}), Error);
}

TEST_CASE("scaling experiment emits rows and honest fits") {
  auto res = lq_scaling_experiment({1.0, 2.0}, {2}, {0.8, 0.5, 0.3}, 60, 7);
  CHECK(res.rows.size() == 6);
  CHECK(res.fits.size() == 2);
  for (const auto& f : res.fits) {
    CHECK(std::isfinite(f.slope));
    CHECK(f.points_used <= 3);
  }
  // Index never drops as eps shrinks (fixpoints count as infinite).
  for (int g = 0; g < 2; ++g) {
    long long prev = -1;
    for (int k = 0; k < 3; ++k) {
      const auto& row = res.rows[g * 3 + k];
      long long v = row.index < 0 ? 1000000 : row.index;
      if (k) CHECK(v >= prev);
      prev = v;
    }
  }
}
