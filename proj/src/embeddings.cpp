#include "lipspace/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace lipspace {

namespace {

// q <= 0 encodes the sup norm throughout this module.
double norm_q(const Vec& x, double q) {
  if (q <= 0) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0;
  for (double v : x) acc += std::pow(std::abs(v), q);
  return std::pow(acc, 1.0 / q);
}

double conjugate_exponent(double q) {
  if (q <= 0) return 1.0;         // dual of sup is l1
  if (q <= 1.0 + 1e-12) return 0;  // dual of l1 is sup
  return q / (q - 1.0);
}

double weighted_coord_dist(const Vec& a, const Vec& b) {
  double acc = 0, w = 0.5;
  for (std::size_t k = 0; k < a.size(); ++k, w *= 0.5)
    acc += w * std::abs(a[k] - b[k]);
  return acc;
}

double lq_dist(const Vec& a, const Vec& b, double q) {
  double acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += std::pow(std::abs(a[k] - b[k]), q);
  return std::pow(acc, 1.0 / q);
}

// Inverse stereographic projection from the south pole: the origin maps
// to the north pole and the closed unit disk onto the closed upper
// hemisphere of S^n in R^{n+1}.
Vec inv_stereo(const Vec& u) {
  double s = 0;
  for (double v : u) s += v * v;
  Vec out(u.size() + 1);
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = 2 * u[k] / (1 + s);
  out.back() = (1 - s) / (1 + s);
  return out;
}

Vec cube_to_sphere(const Vec& a) {
  Vec u(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) u[k] = 2 * a[k] - 1;
  return inv_stereo(u);
}

std::vector<Vec> cube_lattice(int n, int grid) {
  std::vector<Vec> out;
  Vec a(n, 0.0);
  std::vector<int> idx(n, 0);
  for (;;) {
    for (int k = 0; k < n; ++k) a[k] = double(idx[k]) / (grid - 1);
    out.push_back(a);
    int k = 0;
    while (k < n && ++idx[k] == grid) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

// One representative per antipodal pair of dual extreme points: the one
// whose first nonzero coordinate is positive.
std::vector<Vec> antipodal_reps(const DualBall& dual) {
  std::vector<Vec> reps;
  for (const Vec& u : dual.ext_points) {
    bool keep = false;
    for (double v : u) {
      if (std::abs(v) > 1e-12) {
        keep = v > 0;
        break;
      }
    }
    if (keep) reps.push_back(u);
  }
  return reps;
}

std::vector<Vec> sample_lq_ball(double q, int dim, int samples,
                                std::uint64_t seed) {
  std::vector<Vec> coords;
  for (int k = 0; k < dim; ++k) {
    Vec e(dim, 0.0);
    e[k] = 1.0;
    coords.push_back(e);
    e[k] = -1.0;
    coords.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  while ((int)coords.size() < samples) {
    Vec x(dim);
    double nq = 0;
    for (int k = 0; k < dim; ++k) {
      x[k] = sym(rng);
      nq += std::pow(std::abs(x[k]), q);
    }
    double norm = std::pow(nq, 1.0 / q);
    if (norm < 1e-12) continue;
    double r = std::pow(uni(rng), 1.0 / dim);
    for (int k = 0; k < dim; ++k) x[k] = x[k] / norm * r;
    coords.push_back(std::move(x));
  }
  return coords;
}

// Deterministic subsample of 0..n-1 when the pairwise scan would be too
// large; always keeps the first and last index.
std::vector<std::size_t> lip_sample_indices(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (n <= cap) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  double stride = double(n - 1) / double(cap - 1);
  for (std::size_t i = 0; i < cap; ++i)
    idx.push_back((std::size_t)std::llround(i * stride));
  idx.push_back(n - 1);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

double source_norm_eval(const SourceNorm& N, const Vec& x) {
  if (const auto* p = std::get_if<PolyhedralNorm>(&N)) return norm_eval(*p, x);
  return norm_q(x, std::get<LqNormTag>(N).q);
}

double source_dual_eval(const SourceNorm& N, const Vec& f) {
  if (const auto* p = std::get_if<PolyhedralNorm>(&N)) {
    if (!p->v_rep.empty()) {
      double best = 0;
      for (const Vec& v : p->v_rep) best = std::max(best, dot(f, v));
      return best;
    }
    return gauge_from_vertices(p->h_rep, f);
  }
  return norm_q(f, conjugate_exponent(std::get<LqNormTag>(N).q));
}

int source_dim(const SourceNorm& N) {
  if (const auto* p = std::get_if<PolyhedralNorm>(&N)) return p->dim;
  return std::get<LqNormTag>(N).dim;
}

std::size_t DomainMetric::size() const {
  return kind == Kind::Model ? model->size() : coords.size();
}

double DomainMetric::dist(std::size_t i, std::size_t j) const {
  switch (kind) {
    case Kind::Model:
      return model->d()(i, j);
    case Kind::Line:
      return std::abs(coords[i][0] - coords[j][0]);
    case Kind::WeightedCoords:
      return weighted_coord_dist(coords[i], coords[j]);
    case Kind::LqCoords:
      return lq_dist(coords[i], coords[j], q);
  }
  return 0;
}

std::vector<double> EmbeddingMap::apply(const Vec& x) const {
  if ((int)x.size() != dim)
    throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  std::vector<double> out(psi.size());
  for (std::size_t t = 0; t < psi.size(); ++t) out[t] = dot(psi[t], x);
  return out;
}

std::vector<Vec> make_test_vectors(int dim, int count, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  std::vector<Vec> out;
  for (int k = 0; k < dim; ++k)
    for (double s : {1.0, -1.0}) {
      Vec e(dim, 0.0);
      e[k] = s;
      out.push_back(e);
    }
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (double sj : {1.0, -1.0})
        for (double si : {1.0, -1.0}) {
          Vec v(dim, 0.0);
          v[i] = si * r;
          v[j] = sj * r;
          out.push_back(v);
        }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while ((int)out.size() < count) {
    Vec v(dim);
    for (double& c : v) c = gauss(rng);
    double n = euclid_norm(v);
    if (n < 1e-9) continue;
    for (double& c : v) c /= n;
    out.push_back(std::move(v));
  }
  return out;
}

EmbeddingReport verify_isometry(const EmbeddingMap& E,
                                const std::vector<Vec>& test_vectors,
                                const std::vector<Vec>& dual_ext) {
  if (test_vectors.empty())
    throw Error(ErrorCode::InvalidArgument, "no test vectors");
  if (E.psi.size() != E.domain.size())
    throw Error(ErrorCode::InvalidArgument, "psi/domain size mismatch");
  const std::size_t n = E.psi.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty embedding");

  EmbeddingReport rep;
  std::vector<std::vector<double>> vals;
  vals.reserve(test_vectors.size());
  std::vector<double> norms, sups;
  for (std::size_t k = 0; k < test_vectors.size(); ++k) {
    vals.push_back(E.apply(test_vectors[k]));
    double nx = source_norm_eval(E.norm, test_vectors[k]);
    double sup = 0;
    for (double v : vals.back()) sup = std::max(sup, std::abs(v));
    norms.push_back(nx);
    sups.push_back(sup);
    double defect = std::abs(sup - nx);
    if (defect > rep.isometry_defect) {
      rep.isometry_defect = defect;
      rep.defect_witness = k;
    }
    if (nx >= 1e-6) rep.relative_defect = std::max(rep.relative_defect, defect / nx);
  }

  // Lipschitz scan. On a 1-D line the adjacent quotients are exact by
  // telescoping; otherwise all pairs of a capped point sample.
  std::vector<double> lips(test_vectors.size(), 0.0);
  if (E.domain.kind == DomainMetric::Kind::Line) {
    for (std::size_t t = 0; t + 1 < n; ++t) {
      double dd = E.domain.dist(t, t + 1);
      if (dd <= 0) continue;
      for (std::size_t k = 0; k < vals.size(); ++k)
        lips[k] = std::max(lips[k], std::abs(vals[k][t] - vals[k][t + 1]) / dd);
    }
  } else {
    auto idx = lip_sample_indices(n, 700);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        double dd = E.domain.dist(idx[a], idx[b]);
        if (dd <= 0) continue;
        for (std::size_t k = 0; k < vals.size(); ++k)
          lips[k] = std::max(
              lips[k], std::abs(vals[k][idx[a]] - vals[k][idx[b]]) / dd);
      }
  }
  for (std::size_t k = 0; k < lips.size(); ++k) {
    if (norms[k] >= 1e-9) rep.max_lip = std::max(rep.max_lip, lips[k] / norms[k]);
    if (sups[k] >= 1e-9) rep.lambda = std::max(rep.lambda, lips[k] / sups[k]);
  }

  for (const Vec& u : dual_ext) {
    double best = std::numeric_limits<double>::infinity();
    Vec neg(u.size());
    for (std::size_t c = 0; c < u.size(); ++c) neg[c] = -u[c];
    for (const Vec& p : E.psi) {
      best = std::min(best, std::min(euclid_dist(p, u), euclid_dist(p, neg)));
      if (best < 1e-14) break;
    }
    rep.coverage_defect = std::max(rep.coverage_defect, best);
  }
  return rep;
}

std::pair<EmbeddingMap, EmbeddingReport> embed_euclid2_circle(int grid_n) {
  if (grid_n < 2)
    throw Error(ErrorCode::InvalidArgument, "circle grid needs >= 2 points");
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::Line;
  E.dim = 2;
  E.norm = LqNormTag{2.0, 2};
  const double pi = std::acos(-1.0);
  for (int i = 0; i < grid_n; ++i) {
    double t = double(i) / (grid_n - 1);
    E.domain.coords.push_back({t});
    E.psi.push_back({std::cos(pi * t), std::sin(pi * t)});
  }
  EmbeddingReport rep = verify_isometry(E, make_test_vectors(2, 200, 12345),
                                        sphere_grid(1, 256));
  return {std::move(E), rep};
}

EmbeddingMap embed_polyhedral_linf(const PolyhedralNorm& N, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1 points");
  DualBall dual = polar_vertices(N);
  std::vector<Vec> reps = antipodal_reps(dual);
  if (reps.size() > (std::size_t)n)
    throw Error(ErrorCode::FacesExceedCapacity,
                "unit ball has " + std::to_string(dual.ext_points.size()) +
                    " facets but only " + std::to_string(n) +
                    " points are available");
  // Discrete two-metric model on n points.
  std::vector<std::string> ids;
  std::vector<double> dist(std::size_t(n) * n, 1.0);
  for (int i = 0; i < n; ++i) {
    ids.push_back("k" + std::to_string(i));
    dist[std::size_t(i) * n + i] = 0.0;
  }
  FiniteMetric m(ids, dist);
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::Model;
  E.domain.model =
      std::make_shared<BitopModel>(m, m, 0.5, "discrete:" + std::to_string(n));
  E.dim = N.dim;
  E.norm = N;
  for (int i = 0; i < n; ++i) E.psi.push_back(reps[i % reps.size()]);
  return E;
}

BumpsResult embed_polyhedral_bumps(const PolyhedralNorm& N, ModelPtr model,
                                   const std::vector<std::size_t>& sites) {
  DualBall dual = polar_vertices(N);
  std::vector<Vec> reps = antipodal_reps(dual);
  if (sites.size() < reps.size())
    throw Error(ErrorCode::FacesExceedCapacity,
                std::to_string(reps.size()) + " facet pairs need as many sites, got " +
                    std::to_string(sites.size()));
  std::set<std::size_t> seen;
  for (std::size_t s : sites) {
    if (s >= model->size())
      throw Error(ErrorCode::InvalidArgument, "site index out of range");
    if (!seen.insert(s).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate site index");
  }
  const double delta = model->delta();
  for (std::size_t a = 0; a < sites.size(); ++a)
    for (std::size_t b = a + 1; b < sites.size(); ++b) {
      double dd = model->d()(sites[a], sites[b]);
      if (dd <= 4 * delta)
        throw Error(ErrorCode::SiteSeparation,
                    "sites " + std::to_string(sites[a]) + " and " +
                        std::to_string(sites[b]) + " are at distance " +
                        std::to_string(dd) + " <= 4*delta");
    }

  // Bump at site s: 1 on the site, 0 outside the 2 delta ball, Lipschitz
  // constant 1/delta. Supports of distinct bumps are disjoint.
  std::vector<ScalarField> bumps;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::vector<std::size_t> subset{sites[i]};
    std::vector<double> values{1.0};
    for (std::size_t t = 0; t < model->size(); ++t)
      if (model->d()(t, sites[i]) >= 2 * delta) {
        subset.push_back(t);
        values.push_back(0.0);
      }
    bumps.push_back(mcshane_extend(model, subset, values, 1.0 / delta, 0.0, 1.0));
  }

  BumpsResult res;
  res.sites.assign(sites.begin(), sites.begin() + reps.size());
  res.map.domain.kind = DomainMetric::Kind::Model;
  res.map.domain.model = model;
  res.map.dim = N.dim;
  res.map.norm = N;
  for (std::size_t t = 0; t < model->size(); ++t) {
    Vec p(N.dim, 0.0);
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (int c = 0; c < N.dim; ++c) p[c] += bumps[i][t] * reps[i][c];
    res.map.psi.push_back(std::move(p));
  }
  res.basis.model = model;
  res.basis.target_norm_tag = N.name.empty() ? "polyhedral" : N.name;
  for (int c = 0; c < N.dim; ++c) {
    std::vector<double> vals(model->size(), 0.0);
    for (std::size_t t = 0; t < model->size(); ++t) vals[t] = res.map.psi[t][c];
    res.basis.fields.emplace_back(model, std::move(vals));
  }
  res.report = verify_isometry(res.map, make_test_vectors(N.dim, 200, 2024),
                               dual.ext_points);
  return res;
}

namespace {

C0Result build_c0(ModelPtr model, double eps, std::size_t t0,
                  std::vector<std::size_t> centers) {
  C0Result res;
  res.eps = eps;
  res.base_point = t0;
  res.centers = std::move(centers);
  res.basis.model = model;
  res.basis.target_norm_tag = "c0";
  for (std::size_t tn : res.centers) {
    std::vector<std::size_t> subset;
    std::vector<double> values;
    for (std::size_t t = 0; t < model->size(); ++t) {
      double dd = model->d()(t, tn);
      if (dd <= eps) {
        subset.push_back(t);
        values.push_back(1.0);
      } else if (dd >= 3 * eps) {
        subset.push_back(t);
        values.push_back(0.0);
      }
    }
    res.basis.fields.push_back(
        mcshane_extend(model, subset, values, 1.0 / eps, 0.0, 1.0));
  }
  const int m = (int)res.centers.size();
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::Model;
  E.domain.model = model;
  E.dim = m;
  E.norm = LqNormTag{0.0, m};  // sup norm: finite section of c0
  for (std::size_t t = 0; t < model->size(); ++t) {
    Vec p(m);
    for (int k = 0; k < m; ++k) p[k] = res.basis.fields[k][t];
    E.psi.push_back(std::move(p));
  }
  std::vector<Vec> dual_ext;
  for (int k = 0; k < m; ++k)
    for (double s : {1.0, -1.0}) {
      Vec e(m, 0.0);
      e[k] = s;
      dual_ext.push_back(e);
    }
  res.report = verify_isometry(E, make_test_vectors(m, 160, 777), dual_ext);
  return res;
}

}  // namespace

C0Result construct_c0(ModelPtr model, double eps, std::size_t t0,
                      const std::vector<std::size_t>& centers) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (t0 >= model->size())
    throw Error(ErrorCode::InvalidArgument, "base point out of range");
  if (centers.empty())
    throw Error(ErrorCode::WitnessInvalid, "no centers supplied");
  for (std::size_t c : centers) {
    if (c >= model->size())
      throw Error(ErrorCode::InvalidArgument, "center out of range");
    if (c == t0)
      throw Error(ErrorCode::WitnessInvalid, "base point used as center");
    if (model->d()(c, t0) < 3 * eps)
      throw Error(ErrorCode::WitnessInvalid,
                  "center " + std::to_string(c) + " is within 3*eps of the base point");
  }
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (model->d()(centers[a], centers[b]) <= 6 * eps)
        throw Error(ErrorCode::WitnessInvalid,
                    "centers " + std::to_string(centers[a]) + " and " +
                        std::to_string(centers[b]) +
                        " are not 6*eps separated");
  return build_c0(model, eps, t0, centers);
}

C0Result construct_c0(ModelPtr model, double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  std::size_t best_t0 = 0;
  std::vector<std::size_t> best;
  for (std::size_t t0 = 0; t0 < model->size(); ++t0) {
    std::vector<std::size_t> centers;
    for (std::size_t t = 0; t < model->size(); ++t) {
      if (t == t0 || model->d()(t, t0) < 3 * eps) continue;
      bool ok = true;
      for (std::size_t c : centers)
        if (model->d()(t, c) <= 6 * eps) {
          ok = false;
          break;
        }
      if (ok) centers.push_back(t);
    }
    if (centers.size() > best.size()) {
      best_t0 = t0;
      best = std::move(centers);
    }
  }
  if (best.empty()) {
    double widest = 0;
    for (std::size_t a = 0; a < model->size(); ++a)
      for (std::size_t b = a + 1; b < model->size(); ++b)
        widest = std::max(widest, model->d()(a, b));
    throw Error(ErrorCode::WitnessInvalid,
                "no 6*eps-separated family exists: the model diameter is " +
                    std::to_string(widest));
  }
  return build_c0(model, eps, best_t0, best);
}

Ell1Result construct_ell1(ModelPtr model, const NonFragWitness& witness,
                          int depth) {
  Ell1Result res;
  res.eps = witness.eps();
  res.families = build_dyadic_families(witness, depth);
  for (const auto& [key, node] : res.families.nodes) {
    if ((int)key.size() != depth) continue;
    res.patterns.push_back(key);
    res.H.push_back(node.x);
  }
  res.basis.model = model;
  res.basis.target_norm_tag = "ell1";
  const double eps = res.eps;
  for (int n = 0; n < depth; ++n) {
    std::vector<double> values;
    for (const std::string& pat : res.patterns)
      values.push_back(pat[n] == '0' ? 1.0 : -1.0);
    res.basis.fields.push_back(
        mcshane_extend(model, res.H, values, 1.0 / eps, -1.0, 1.0));
  }
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::Model;
  E.domain.model = model;
  E.dim = depth;
  E.norm = LqNormTag{1.0, depth};
  for (std::size_t t = 0; t < model->size(); ++t) {
    Vec p(depth);
    for (int n = 0; n < depth; ++n) p[n] = res.basis.fields[n][t];
    E.psi.push_back(std::move(p));
  }
  // Dual extreme points of l1 are the sign patterns; all of them are hit
  // exactly at the points of H.
  std::vector<Vec> dual_ext;
  for (std::size_t mask = 0; mask < (std::size_t(1) << depth); ++mask) {
    Vec u(depth);
    for (int n = 0; n < depth; ++n) u[n] = (mask >> n) & 1 ? -1.0 : 1.0;
    dual_ext.push_back(u);
  }
  res.report = verify_isometry(E, make_test_vectors(depth, 160, 555), dual_ext);
  return res;
}

BallExampleResult example_c0_in_ball(int dim, int samples, std::uint64_t seed,
                                     const Vec& coeffs) {
  if (coeffs.empty() || (int)coeffs.size() > dim)
    throw Error(ErrorCode::InvalidArgument,
                "need between 1 and dim coefficients");
  ModelSpec spec;
  spec.kind = "lq_ball";
  spec.q = 2.0;
  spec.dim = dim;
  spec.n = samples;
  spec.seed = seed;
  ModelPtr model = make_model(spec);
  const auto& coords = model->d().coords();
  std::vector<double> values(model->size(), 0.0);
  for (std::size_t t = 0; t < model->size(); ++t)
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      values[t] += coeffs[k] * coords[t][k] * coords[t][k];
  BallExampleResult res{ScalarField(model, values), 0, 0, 0, false, false};
  for (double a : coeffs) res.coeff_max = std::max(res.coeff_max, std::abs(a));
  res.value_bound_ok = true;
  for (double v : values) {
    res.sup_over_samples = std::max(res.sup_over_samples, v);
    if (std::abs(v) > res.coeff_max + 1e-12) res.value_bound_ok = false;
  }
  res.measured_lip = lip_constant(res.field);
  res.lip_bound_ok = res.measured_lip <= 2 * res.coeff_max + 1e-9;
  return res;
}

Vec mazur_map(const Vec& x, double q1, double q2) {
  if (q1 < 1 || q2 < 1)
    throw Error(ErrorCode::InvalidArgument, "exponents must be >= 1");
  Vec out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    double mag = std::pow(std::abs(x[k]), q1 / q2);
    out[k] = x[k] < 0 ? -mag : mag;
  }
  return out;
}

TransferResult transfer_lp(double q, double q_prime, int dim, int samples,
                           std::uint64_t seed) {
  if (q < 1 || q_prime < 1)
    throw Error(ErrorCode::InvalidArgument, "exponents must be >= 1");
  if (dim < 1 || samples < 2 * dim)
    throw Error(ErrorCode::InvalidArgument, "need samples >= 2*dim");
  if (q_prime > q + 1e-12)
    throw Error(ErrorCode::DirectionNotLipschitz,
                "the signed power map with exponent " + std::to_string(q / q_prime) +
                    " < 1 is not Lipschitz on the ball");
  std::vector<Vec> coords = sample_lq_ball(q, dim, samples, seed);
  TransferResult res;
  res.p_prime = conjugate_exponent(q_prime);
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::LqCoords;
  E.domain.q = q;
  E.domain.coords = coords;
  E.dim = dim;
  E.norm = LqNormTag{res.p_prime, dim};
  for (const Vec& x : coords) E.psi.push_back(mazur_map(x, q, q_prime));
  res.psi_prime = E.psi;
  res.report = verify_isometry(E, make_test_vectors(dim, 200, seed ^ 0x9e3779b9),
                               {});
  return res;
}

SphereCoverResult sphere_cover(int n, int grid) {
  if (n < 1 || n > 3)
    throw Error(ErrorCode::InvalidArgument, "sphere dimension must be 1..3");
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be >= 2");
  double total = std::pow((double)grid, n);
  if (total > 20000)
    throw Error(ErrorCode::InvalidArgument, "cover lattice exceeds 20000 points");
  SphereCoverResult res;
  res.n = n;
  res.grid = grid;
  res.domain = cube_lattice(n, grid);
  for (const Vec& a : res.domain) res.image.push_back(cube_to_sphere(a));
  auto idx = lip_sample_indices(res.domain.size(), 1500);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      double dd = euclid_dist(res.domain[idx[a]], res.domain[idx[b]]);
      if (dd <= 0) continue;
      res.lip = std::max(
          res.lip, euclid_dist(res.image[idx[a]], res.image[idx[b]]) / dd);
    }
  for (const Vec& u : sphere_grid(n, std::max(grid, 16))) {
    double best = std::numeric_limits<double>::infinity();
    Vec neg(u.size());
    for (std::size_t c = 0; c < u.size(); ++c) neg[c] = -u[c];
    for (const Vec& p : res.image)
      best = std::min(best, std::min(euclid_dist(p, u), euclid_dist(p, neg)));
    res.coverage_defect = std::max(res.coverage_defect, best);
  }
  return res;
}

std::pair<EmbeddingMap, EmbeddingReport> embed_euclid_via_cover(int n,
                                                                int cube_dim,
                                                                int grid) {
  if (cube_dim < n)
    throw Error(ErrorCode::InvalidArgument,
                "cube dimension must be at least the sphere dimension");
  SphereCoverResult cover = sphere_cover(n, grid);
  if (cover.coverage_defect > 6.0 / grid)
    throw Error(ErrorCode::CoverageUncertified,
                "hemisphere coverage defect " +
                    std::to_string(cover.coverage_defect) +
                    " exceeds the certification threshold " +
                    std::to_string(6.0 / grid));
  double total = std::pow((double)grid, cube_dim);
  if (total > 20000)
    throw Error(ErrorCode::InvalidArgument, "cube lattice exceeds 20000 points");
  EmbeddingMap E;
  E.domain.kind = DomainMetric::Kind::WeightedCoords;
  E.domain.coords = cube_lattice(cube_dim, grid);
  E.dim = n + 1;
  E.norm = LqNormTag{2.0, n + 1};
  for (const Vec& t : E.domain.coords) {
    Vec a(t.begin(), t.begin() + n);
    E.psi.push_back(cube_to_sphere(a));
  }
  EmbeddingReport rep = verify_isometry(
      E, make_test_vectors(n + 1, 120, 31337), sphere_grid(n, std::max(grid, 24)));
  return {std::move(E), rep};
}

Vec hilbert_curve_point(int level, std::uint64_t index) {
  if (level < 1 || level > 12)
    throw Error(ErrorCode::InvalidArgument, "curve level must be 1..12");
  const std::uint64_t side = std::uint64_t(1) << level;
  if (index >= side * side)
    throw Error(ErrorCode::InvalidArgument, "curve index out of range");
  std::uint64_t x = 0, y = 0, t = index;
  for (std::uint64_t s = 1; s < side; s *= 2) {
    std::uint64_t rx = 1 & (t / 2);
    std::uint64_t ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {(x + 0.5) / side, (y + 0.5) / side};
}

std::vector<FillingCurveRow> filling_curve_demo(const std::vector<int>& levels) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "no levels given");
  std::vector<FillingCurveRow> rows;
  for (int level : levels) {
    if (level < 1 || level > 8)
      throw Error(ErrorCode::InvalidArgument, "demo levels must be 1..8");
    const std::size_t npts = std::size_t(1) << (2 * level);
    EmbeddingMap E;
    E.domain.kind = DomainMetric::Kind::Line;
    E.dim = 3;
    E.norm = LqNormTag{2.0, 3};
    for (std::size_t i = 0; i < npts; ++i) {
      E.domain.coords.push_back({double(i) / double(npts - 1)});
      E.psi.push_back(cube_to_sphere(hilbert_curve_point(level, i)));
    }
    EmbeddingReport rep = verify_isometry(E, make_test_vectors(3, 60, 4242), {});
    rows.push_back({level, npts, rep.max_lip, rep.isometry_defect});
  }
  return rows;
}

ScalarField pullback_field(ModelPtr K2, const std::vector<std::size_t>& phi,
                           const ScalarField& f) {
  if (phi.size() != K2->size())
    throw Error(ErrorCode::InvalidArgument, "phi must map every point of K2");
  std::vector<double> values(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] >= f.size())
      throw Error(ErrorCode::InvalidArgument, "phi image out of range");
    values[i] = f[phi[i]];
  }
  return ScalarField(K2, std::move(values));
}

}  // namespace lipspace
