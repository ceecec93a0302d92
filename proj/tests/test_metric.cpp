#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lipspace/metric.hpp"

using namespace lipspace;

namespace {

FiniteMetric line_metric(const std::vector<double>& pts) {
  std::vector<std::string> ids;
  std::vector<double> m(pts.size() * pts.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ids.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < pts.size(); ++j)
      m[i * pts.size() + j] = std::abs(pts[i] - pts[j]);
  }
  return FiniteMetric(ids, m);
}

// Independent difference-quotient scan, written as a plain double loop so
// the library kernel is checked against a second implementation.
double lip_oracle(const BitopModel& model, const std::vector<double>& v) {
  double best = 0;
  for (std::size_t i = 0; i < model.size(); ++i)
    for (std::size_t j = 0; j < model.size(); ++j) {
      if (i == j) continue;
      double q = std::abs(v[i] - v[j]) / model.d()(i, j);
      best = std::max(best, q);
    }
  return best;
}

}  // namespace

TEST_CASE("validate_metric accepts a clean line metric") {
  auto rep = validate_metric(line_metric({0.0, 0.3, 1.0}));
  CHECK(rep.valid());
}

TEST_CASE("validate_metric flags each broken axiom") {
  FiniteMetric m = line_metric({0.0, 0.5, 1.0});
  std::vector<double> raw = m.raw();

  SUBCASE("asymmetry") {
    raw[0 * 3 + 1] = 0.7;
    auto rep = validate_metric(FiniteMetric(m.point_ids(), raw));
    REQUIRE_FALSE(rep.valid());
    bool found = false;
    for (auto& v : rep.violations)
      if (v.kind == MetricViolation::Kind::Symmetry) found = true;
    CHECK(found);
  }
  SUBCASE("nonzero diagonal") {
    raw[1 * 3 + 1] = 0.1;
    auto rep = validate_metric(FiniteMetric(m.point_ids(), raw));
    REQUIRE_FALSE(rep.valid());
    CHECK(rep.violations.front().kind == MetricViolation::Kind::Diagonal);
  }
  SUBCASE("zero off-diagonal") {
    raw[0 * 3 + 1] = raw[1 * 3 + 0] = 0.0;
    auto rep = validate_metric(FiniteMetric(m.point_ids(), raw));
    REQUIRE_FALSE(rep.valid());
    bool found = false;
    for (auto& v : rep.violations)
      if (v.kind == MetricViolation::Kind::Positivity) found = true;
    CHECK(found);
  }
  SUBCASE("triangle violation") {
    raw[0 * 3 + 2] = raw[2 * 3 + 0] = 10.0;
    auto rep = validate_metric(FiniteMetric(m.point_ids(), raw));
    REQUIRE_FALSE(rep.valid());
    bool found = false;
    for (auto& v : rep.violations)
      if (v.kind == MetricViolation::Kind::Triangle) found = true;
    CHECK(found);
  }
  SUBCASE("non-finite entry") {
    raw[0 * 3 + 2] = raw[2 * 3 + 0] = std::nan("");
    auto rep = validate_metric(FiniteMetric(m.point_ids(), raw));
    REQUIRE_FALSE(rep.valid());
    CHECK(rep.violations.front().kind == MetricViolation::Kind::NonFinite);
  }
}

TEST_CASE("interval grid endpoints and resolution") {
  ModelPtr m = make_model("interval_grid:101");
  CHECK(m->size() == 101);
  CHECK(m->d()(0, 100) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m->d()(0, 1) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(m->delta() == doctest::Approx(0.01).epsilon(1e-12));
  // Coarse and fine metrics agree on the line.
  CHECK(m->rho()(3, 77) == m->d()(3, 77));
}

TEST_CASE("convergent sequence separates points uniformly in d") {
  ModelPtr m = make_model("convergent_sequence:6:1");
  REQUIRE(m->size() == 7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) CHECK(m->d()(i, j) == 1.0);
  // rho(lim, t_k) = 1/k with lim stored first.
  CHECK(m->rho()(0, 1) == doctest::Approx(1.0));
  CHECK(m->rho()(0, 3) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(make_model("convergent_sequence:6:0.5"), Error);
}

TEST_CASE("cantor tree uses prefix depth for rho") {
  ModelPtr m = make_model("cantor:3");
  REQUIRE(m->size() == 8);
  const auto& ids = m->d().point_ids();
  CHECK(ids[0] == "000");
  CHECK(ids[5] == "101");
  // lcp("000","001") = 2 so rho = 2^-2; d is discrete.
  CHECK(m->rho()(0, 1) == doctest::Approx(0.25));
  CHECK(m->rho()(0, 7) == doctest::Approx(1.0));
  CHECK(m->d()(0, 7) == 1.0);
  CHECK(m->delta() == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_model("cantor:17"), Error);
}

TEST_CASE("lq ball sampling is deterministic and stays inside the ball") {
  ModelPtr a = make_model("lq_ball:2:3:60:9");
  ModelPtr b = make_model("lq_ball:2:3:60:9");
  CHECK(a->d().raw() == b->d().raw());
  CHECK(a->rho().raw() == b->rho().raw());
  const auto& coords = a->d().coords();
  REQUIRE(coords.size() == 60);
  // The first 2*dim points are the signed coordinate vectors.
  CHECK(coords[0] == std::vector<double>{1, 0, 0});
  CHECK(coords[1] == std::vector<double>{-1, 0, 0});
  for (const auto& x : coords) {
    double n2 = 0;
    for (double v : x) n2 += v * v;
    CHECK(std::sqrt(n2) <= 1.0 + 1e-12);
  }
  // Fine dominates coarse everywhere.
  for (std::size_t i = 0; i < a->size(); ++i)
    for (std::size_t j = 0; j < a->size(); ++j)
      CHECK(a->d()(i, j) >= a->rho()(i, j) - 1e-12);
  CHECK(make_model("lq_ball:2:3:60:10")->d().raw() != a->d().raw());
}

TEST_CASE("hilbert cube weights coordinates geometrically") {
  ModelPtr m = make_model("hilbert_cube:2:3");
  REQUIRE(m->size() == 9);
  const auto& c = m->d().coords();
  // d = sum_k 2^-k |a_k - b_k| with the first coordinate weighted 1/2.
  std::size_t i = 1, j = 3;  // (0, 1/2) and (1/2, 0)
  double expect = 0.5 * std::abs(c[i][0] - c[j][0]) + 0.25 * std::abs(c[i][1] - c[j][1]);
  CHECK(m->d()(i, j) == doctest::Approx(expect).epsilon(1e-15));
  CHECK_THROWS_AS(make_model("hilbert_cube:5:20"), Error);
}

TEST_CASE("fan geometry: short spikes, star-shaped coarse metric") {
  ModelPtr m = make_model("fan:8");
  REQUIRE(m->size() == 9);
  CHECK(m->d()(0, 1) == doctest::Approx(0.5));   // apex to spike
  CHECK(m->d()(1, 2) == doctest::Approx(1.0));   // spike to spike, l1
  CHECK(m->rho()(0, 1) == doctest::Approx(0.04));
  CHECK(m->rho()(1, 2) == doctest::Approx(0.08));
  CHECK(m->delta() == doctest::Approx(0.04));
}

TEST_CASE("model spec parsing round-trips and rejects junk") {
  ModelSpec s = ModelSpec::parse("lq_ball:1.5:4:80:3");
  CHECK(s.kind == "lq_ball");
  CHECK(s.q == doctest::Approx(1.5));
  CHECK(s.dim == 4);
  CHECK(s.n == 80);
  CHECK(s.seed == 3);
  CHECK(ModelSpec::parse(s.to_string()).to_string() == s.to_string());
  CHECK_THROWS_AS(ModelSpec::parse("banach:3"), Error);
  CHECK_THROWS_AS(ModelSpec::parse(""), Error);
}

TEST_CASE("lip constant of the identity field on a line is 1") {
  ModelPtr m = make_model("interval_grid:11");
  std::vector<double> v;
  for (const auto& c : m->d().coords()) v.push_back(c[0]);
  ScalarField f(m, v);
  CHECK(lip_constant(f) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lip_constant(f, MetricChoice::Coarse) == doctest::Approx(1.0));
}

TEST_CASE("lip constant matches an independent scan on random fields") {
  ModelPtr m = make_model("lq_ball:2:3:40:5");
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v(m->size());
    for (double& x : v) x = u(rng);
    ScalarField f(m, v);
    CHECK(lip_constant(f) == doctest::Approx(lip_oracle(*m, v)).epsilon(1e-14));
  }
}

TEST_CASE("partial lip reports the attaining pair") {
  ModelPtr m = make_model("interval_grid:5");
  std::vector<std::size_t> H{0, 2, 4};
  std::vector<double> v{0.0, 0.9, 1.0};
  std::size_t wi = 99, wj = 99;
  double L = partial_lip(*m, H, v, &wi, &wj);
  CHECK(L == doctest::Approx(1.8));  // |0.9 - 0| / 0.5
  CHECK(wi == 0);
  CHECK(wj == 2);
}

TEST_CASE("mcshane extension on a line reproduces the linear interpolant") {
  ModelPtr m = make_model("interval_grid:5");
  ScalarField f = mcshane_extend(m, {0, 4}, {0.0, 1.0}, 1.0, 0.0, 1.0);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(f[i] == doctest::Approx(m->d().coords()[i][0]).epsilon(1e-15));
}

TEST_CASE("mcshane restriction is bit-exact and the constant is kept") {
  ModelPtr m = make_model("lq_ball:2:3:50:11");
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, m->size() - 1);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<std::size_t> H;
    std::vector<double> vals;
    for (int k = 0; k < 6; ++k) {
      std::size_t idx = pick(rng);
      bool dup = false;
      for (std::size_t h : H) dup = dup || h == idx;
      if (dup) continue;
      H.push_back(idx);
      vals.push_back(u(rng));
    }
    double L = partial_lip(*m, H, vals) + 0.25;
    ScalarField ext = mcshane_extend(m, H, vals, L, 0.0, 1.0);
    for (std::size_t k = 0; k < H.size(); ++k) CHECK(ext[H[k]] == vals[k]);
    CHECK(lip_constant(ext) <= L * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("mcshane rejects bad inputs with the right codes") {
  ModelPtr m = make_model("interval_grid:5");
  try {
    mcshane_extend(m, {}, {}, 1.0, 0.0, 1.0);
    FAIL("empty subset accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
  try {
    mcshane_extend(m, {0, 4}, {0.0, 2.0}, 1.0, 0.0, 1.0);
    FAIL("out-of-range values accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
  try {
    mcshane_extend(m, {0, 1}, {0.0, 1.0}, 1.0, 0.0, 1.0);  // slope 4 > 1
    FAIL("non-Lipschitz data accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
  CHECK_THROWS_AS(mcshane_extend(m, {0, 9}, {0.0, 1.0}, 4.0, 0.0, 1.0), Error);
}

TEST_CASE("closed ball on the line matches the interval oracle") {
  ModelPtr m = make_model("interval_grid:11");
  auto ball = closed_ball(*m, {5}, 0.25);
  CHECK(ball == std::vector<std::size_t>{3, 4, 5, 6, 7});
  auto all = closed_ball(*m, {0, 10}, 1.0);
  CHECK(all.size() == 11);
  CHECK_THROWS_AS(closed_ball(*m, {}, 0.1), Error);
  CHECK_THROWS_AS(closed_ball(*m, {0}, -0.1), Error);
}

TEST_CASE("model JSON round-trip preserves both metrics") {
  ModelPtr m = make_model("fan:5");
  ModelPtr back = model_from_json(model_to_json(*m));
  REQUIRE(back->size() == m->size());
  CHECK(back->delta() == m->delta());
  CHECK(back->d().raw() == m->d().raw());
  CHECK(back->rho().raw() == m->rho().raw());
  CHECK(back->d().point_ids() == m->d().point_ids());
  CHECK(model_to_json(*back) == model_to_json(*m));
}

TEST_CASE("bitop model enforces d >= rho") {
  FiniteMetric big = line_metric({0.0, 1.0});
  FiniteMetric small = line_metric({0.0, 0.5});
  CHECK_THROWS_AS(BitopModel(big, small, 0.1), Error);  // d smaller than rho
  CHECK_NOTHROW(BitopModel(small, big, 0.1));
  CHECK_THROWS_AS(BitopModel(small, big, 0.0), Error);
}
