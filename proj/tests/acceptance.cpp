// Acceptance gate: one pass/fail line per criterion, exit 0 only when
// every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "lipspace/convex.hpp"
#include "lipspace/embeddings.hpp"
#include "lipspace/fragmentation.hpp"
#include "lipspace/metric.hpp"
#include "lipspace/run.hpp"

using namespace lipspace;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Vec> random_coeffs(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> out(count, Vec(dim));
  for (auto& v : out)
    for (double& x : v) x = u(rng);
  return out;
}

Vec combine(const std::vector<ScalarField>& fields, const Vec& a) {
  Vec out(fields.front().size(), 0.0);
  for (std::size_t n = 0; n < fields.size(); ++n)
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += a[n] * fields[n][t];
  return out;
}

double sup_abs(const Vec& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

struct Criterion {
  const char* label;
  bool (*fn)();
};

// -- 1: exact sup-norm identities -----------------------------------------

C0Result& c0_fixture() {
  static C0Result res = construct_c0(make_model("convergent_sequence:6:1"), 0.125);
  return res;
}

Ell1Result& ell1_fixture() {
  static Ell1Result res = [] {
    ModelPtr m = make_model("cantor:4");
    auto w = find_witness(m, 0.25);
    if (!w) throw std::runtime_error("no witness on cantor:4");
    return construct_ell1(m, *w, 4);
  }();
  return res;
}

bool criterion1() {
  const auto& c0 = c0_fixture();
  const auto& l1 = ell1_fixture();
  auto coeffs_c0 = random_coeffs((int)c0.basis.fields.size(), 1000, 101);
  auto coeffs_l1 = random_coeffs((int)l1.basis.fields.size(), 1000, 202);

  auto t0 = Clock::now();
  for (const Vec& a : coeffs_c0) {
    double sup = sup_abs(combine(c0.basis.fields, a));
    if (std::abs(sup - sup_abs(a)) > 1e-12) return false;
  }
  double c0_time = seconds_since(t0);

  t0 = Clock::now();
  for (const Vec& a : coeffs_l1) {
    double want = 0;
    for (double x : a) want += std::abs(x);
    double sup = sup_abs(combine(l1.basis.fields, a));
    if (std::abs(sup - want) > 1e-12) return false;
  }
  double l1_time = seconds_since(t0);
  return c0_time <= 1.0 && l1_time <= 1.0;
}

// -- 2: Lipschitz bounds for the constructed fields -----------------------

bool criterion2() {
  const auto& c0 = c0_fixture();
  const auto& l1 = ell1_fixture();
  for (const Vec& a : random_coeffs((int)c0.basis.fields.size(), 200, 303)) {
    ScalarField combo(c0.basis.model, combine(c0.basis.fields, a));
    double bound = 2.0 / c0.eps * sup_abs(a);
    if (lip_constant(combo) > bound * (1 + 1e-9)) return false;
  }
  for (const ScalarField& f : l1.basis.fields)
    if (lip_constant(f) > (1 + 1e-9) / l1.eps) return false;
  return true;
}

// -- 3: finite sup-norm embedding capacity --------------------------------

bool criterion3() {
  for (const char* name : {"l1:2", "linf:2", "linf:3", "hexagon"}) {
    PolyhedralNorm N = PolyhedralNorm::preset(name);
    int faces = face_count(N);
    auto dual = polar_vertices(N).ext_points;
    auto tests = make_test_vectors(N.dim, 200, 11);
    for (int n = faces / 2; n <= faces / 2 + 2; ++n) {
      EmbeddingMap E = embed_polyhedral_linf(N, n);
      EmbeddingReport rep = verify_isometry(E, tests, dual);
      if (rep.isometry_defect > 1e-9) return false;
    }
    bool refused = false;
    try {
      embed_polyhedral_linf(N, faces / 2 - 1);
    } catch (const Error& e) {
      refused = e.code() == ErrorCode::FacesExceedCapacity;
    }
    if (!refused) return false;
  }
  return true;
}

// -- 4: randomized extension instances ------------------------------------

bool criterion4() {
  std::vector<ModelPtr> pool{
      make_model("interval_grid:25"), make_model("convergent_sequence:8:1"),
      make_model("cantor:4"), make_model("fan:6"), make_model("hilbert_cube:2:3")};
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto t0 = Clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    ModelPtr m = pool[trial % pool.size()];
    std::uniform_int_distribution<std::size_t> pick(0, m->size() - 1);
    std::size_t k = 1 + pick(rng) % m->size();
    std::vector<std::size_t> subset;
    std::vector<bool> used(m->size(), false);
    while (subset.size() < k) {
      std::size_t i = pick(rng);
      if (!used[i]) {
        used[i] = true;
        subset.push_back(i);
      }
    }
    std::vector<double> values(k);
    for (double& v : values) v = u(rng);
    double L = partial_lip(*m, subset, values);
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    ScalarField ext = mcshane_extend(m, subset, values, L, lo, hi);
    for (std::size_t j = 0; j < k; ++j)
      if (ext[subset[j]] != values[j]) return false;
    if (lip_constant(ext) > L * (1 + 1e-12) + 1e-15) return false;
  }
  return seconds_since(t0) <= 10.0;
}

// -- 5: signed power map identities at scale ------------------------------

bool criterion5() {
  const std::vector<double> qs{1.0, 1.5, 2.0, 3.0};
  const int dim = 4;
  auto vectors = random_coeffs(dim, 100000, 505);
  for (double q1 : qs)
    for (double q2 : qs) {
      if (q2 > q1) continue;
      for (const Vec& x : vectors) {
        Vec y = mazur_map(x, q1, q2);
        double lhs = 0, rhs = 0;
        for (int k = 0; k < dim; ++k) {
          lhs += std::pow(std::abs(y[k]), q2);
          rhs += std::pow(std::abs(x[k]), q1);
        }
        if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) return false;
        Vec neg(dim);
        for (int k = 0; k < dim; ++k) neg[k] = -x[k];
        Vec yneg = mazur_map(neg, q1, q2);
        for (int k = 0; k < dim; ++k)
          if (yneg[k] != -y[k]) return false;
      }
    }
  return true;
}

// -- 6: derivation verdicts and the quotient inequality -------------------

bool criterion6() {
  auto fan = szlenk_index(make_model("fan:8"), 1.0, 0.05);
  if (!fan.finite || fan.finite_index() != 2) return false;
  auto grid = szlenk_index(make_model("interval_grid:101"), 0.5, 0.01);
  if (!grid.finite || grid.finite_index() != 1) return false;
  auto cantor = szlenk_index(make_model("cantor:3"), 1.0, 0.25);
  if (cantor.finite) return false;

  RunOutcome out = run({"quotient-check", "{}", ""});
  if (out.exit_status != 0) return false;
  auto rep = nlohmann::json::parse(out.report_json);
  std::size_t rows = 0;
  for (const auto& pair : rep.at("pairs")) {
    for (const auto& row : pair.at("rows"))
      if (!row.at("ok").get<bool>()) return false;
    rows += pair.at("rows").size();
  }
  return rows >= 20;
}

// -- 7: unbounded Lipschitz growth vs the circle contrast -----------------

bool criterion7() {
  auto t0 = Clock::now();
  auto rows = filling_curve_demo({2, 3, 4, 5, 6});
  for (std::size_t k = 0; k + 2 < rows.size(); ++k)
    if (rows[k + 2].max_lip < 1.8 * rows[k].max_lip) return false;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k].defect > rows[k - 1].defect) return false;
  auto circle = embed_euclid2_circle(4096);
  if (circle.second.max_lip > 3.1415926535897931 + 0.01) return false;
  return seconds_since(t0) <= 30.0;
}

// -- 8: index growth as eps shrinks ---------------------------------------

bool criterion8() {
  auto res = lq_scaling_experiment({1.0, 2.0}, {2, 3}, {0.6, 0.4, 0.3, 0.2}, 80, 7);
  if (res.rows.empty() || res.fits.empty()) return false;
  std::size_t k = 0;
  for (double q : {1.0, 2.0}) {
    (void)q;
    for (int dim : {2, 3}) {
      (void)dim;
      long long prev = -1;
      for (int e = 0; e < 4; ++e, ++k) {
        long long v = res.rows[k].index < 0 ? 1LL << 40 : res.rows[k].index;
        if (v < prev) return false;
        prev = v;
      }
    }
  }
  // Fitted slopes are reported, not asserted; require only sanity.
  for (const auto& f : res.fits)
    if (!std::isfinite(f.slope)) return false;
  return true;
}

// -- 9: deterministic reports ---------------------------------------------

bool criterion9() {
  for (const char* cfg :
       {R"({"model":"fan:8","eps":1.0,"delta":0.05})",
        R"({"model":"convergent_sequence:6:1","eps":0.125})"}) {
    const char* command = std::string(cfg).find("fan") != std::string::npos
                              ? "szlenk"
                              : "c0-construct";
    RunOutcome a = run({command, cfg, ""});
    RunOutcome b = run({command, cfg, ""});
    if (a.exit_status != 0 || b.exit_status != 0) return false;
    if (a.report_json != b.report_json) return false;
    if (a.artifacts != b.artifacts) return false;
  }
  return true;
}

const Criterion kCriteria[] = {
    {"exact sup-norm identities (1000 random combinations each)", criterion1},
    {"Lipschitz bounds on constructed fields", criterion2},
    {"sup-norm embedding capacity boundary", criterion3},
    {"500 randomized extension instances", criterion4},
    {"signed power map identities over 1e5 vectors per exponent pair", criterion5},
    {"derivation verdicts and quotient index inequality", criterion6},
    {"filling-curve growth vs circle contrast", criterion7},
    {"scaling index monotone as eps shrinks", criterion8},
    {"byte-identical reports on re-run", criterion9},
};

}  // namespace

int main() {
  int failures = 0;
  int id = 0;
  for (const auto& c : kCriteria) {
    ++id;
    bool ok = false;
    std::string note;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    std::printf("criterion %d: %s: %s%s\n", id, c.label, ok ? "PASS" : "FAIL",
                note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
