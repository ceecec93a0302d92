#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "lipspace/convex.hpp"
#include "lipspace/fragmentation.hpp"
#include "lipspace/metric.hpp"

namespace lipspace {

/// Closed-form lq norm on R^dim (q = infinity encoded as q <= 0).
struct LqNormTag {
  double q = 2.0;
  int dim = 0;
};

/// The source space X whose dual houses the Psi values.
using SourceNorm = std::variant<PolyhedralNorm, LqNormTag>;

double source_norm_eval(const SourceNorm& N, const Vec& x);
double source_dual_eval(const SourceNorm& N, const Vec& f);
int source_dim(const SourceNorm& N);

/// Fine-metric view of an embedding domain. Model-backed for the zoo
/// models; Line and WeightedCoords avoid materializing dense matrices
/// for the large implicit grids.
struct DomainMetric {
  enum class Kind { Model, Line, WeightedCoords, LqCoords };
  Kind kind = Kind::Model;
  ModelPtr model;
  std::vector<Vec> coords;  // Line: {t}; otherwise ambient coordinates
  double q = 2.0;           // LqCoords exponent

  std::size_t size() const;
  double dist(std::size_t i, std::size_t j) const;
};

/// A functional Psi(t) per domain point plus the induced operator
/// J(x)(t) = <Psi(t), x>.
struct EmbeddingMap {
  DomainMetric domain;
  int dim = 0;
  std::vector<Vec> psi;
  SourceNorm norm;

  std::vector<double> apply(const Vec& x) const;  // values of J(x)
};

/// Verification summary; all entries nonnegative and finite.
struct EmbeddingReport {
  double isometry_defect = 0;
  double relative_defect = 0;  // over test vectors with norm >= 1e-6
  double max_lip = 0;          // max over tests of L(J(x)) / ||x||_X
  double lambda = 0;           // measured sup of L(f) / ||f||_inf
  double coverage_defect = 0;
  std::size_t defect_witness = 0;  // index of the worst test vector
};

struct SubspaceBasis {
  ModelPtr model;
  std::vector<ScalarField> fields;
  std::string target_norm_tag;  // c0 | ell1 | linf_n | source-norm
};

/// Deterministic test-vector set: all +-e_i, all normalized +-e_i +- e_j,
/// then seeded random unit vectors up to `count`.
std::vector<Vec> make_test_vectors(int dim, int count, std::uint64_t seed);

/// Computes isometry/coverage defects and the measured Lipschitz ratios
/// for an embedding. `dual_ext` is the extreme-point set of B_{X*} (or a
/// sphere grid for smooth sources); pass empty to skip the coverage scan.
EmbeddingReport verify_isometry(const EmbeddingMap& E,
                                const std::vector<Vec>& test_vectors,
                                const std::vector<Vec>& dual_ext);

// --- constructions --------------------------------------------------------

/// Psi(t) = (cos pi t, sin pi t) over a uniform grid of [0,1].
std::pair<EmbeddingMap, EmbeddingReport> embed_euclid2_circle(int grid_n);

/// K = {1..n} with discrete metrics, Psi enumerating the dual extreme
/// points (one per antipodal pair). Requires 2n >= face_count(N).
EmbeddingMap embed_polyhedral_linf(const PolyhedralNorm& N, int n);

struct BumpsResult {
  EmbeddingMap map;
  SubspaceBasis basis;
  EmbeddingReport report;
  std::vector<std::size_t> sites;
};

/// Disjointly supported bump fields carrying the dual extreme points.
BumpsResult embed_polyhedral_bumps(const PolyhedralNorm& N, ModelPtr model,
                                   const std::vector<std::size_t>& sites);

struct C0Result {
  SubspaceBasis basis;
  EmbeddingReport report;
  std::size_t base_point = 0;      // t0
  std::vector<std::size_t> centers;  // t_1..t_m
  double eps = 0;
};

/// Isometric c0 basis from a 6 eps-separated family clustered at a base
/// point; centers auto-detected greedily when not supplied.
C0Result construct_c0(ModelPtr model, double eps);
C0Result construct_c0(ModelPtr model, double eps, std::size_t t0,
                      const std::vector<std::size_t>& centers);

struct Ell1Result {
  SubspaceBasis basis;
  EmbeddingReport report;
  DyadicFamilies families;
  PointSet H;                         // sign-pattern points, one per leaf
  std::vector<std::string> patterns;  // binary strings matching H
  double eps = 0;
};

/// Isometric ell_1 basis from a non-fragmentability witness via the
/// dyadic families at finite depth.
Ell1Result construct_ell1(ModelPtr model, const NonFragWitness& witness,
                          int depth);

struct BallExampleResult {
  ScalarField field;  // sum a_k x_k^2 over a sampled Hilbert ball
  double sup_over_samples = 0;
  double coeff_max = 0;
  double measured_lip = 0;
  bool value_bound_ok = false;  // every value <= max|a_k|
  bool lip_bound_ok = false;    // measured lip <= 2 max|a_k| + 1e-9
};

BallExampleResult example_c0_in_ball(int dim, int samples, std::uint64_t seed,
                                     const Vec& coeffs);

/// Coordinatewise signed power map between lq balls; requires q1,q2 >= 1.
Vec mazur_map(const Vec& x, double q1, double q2);

struct TransferResult {
  std::vector<Vec> psi_prime;  // transferred functionals in B_{l_{q'}}
  double p_prime = 0;          // conjugate of q' (<=0 encodes infinity)
  EmbeddingReport report;
};

/// Transfers the identity sampling of B_{lq} through the signed power
/// map; requires q' <= q (DirectionNotLipschitz otherwise).
TransferResult transfer_lp(double q, double q_prime, int dim, int samples,
                           std::uint64_t seed);

struct SphereCoverResult {
  int n = 0;
  int grid = 0;
  std::vector<Vec> domain;  // I^n lattice points
  std::vector<Vec> image;   // psi(domain) in S^n
  double lip = 0;           // measured constant of psi on the cube
  double coverage_defect = 0;
};

/// psi = inverse stereographic projection of the scaled cube; the image
/// contains a closed hemisphere and image ∪ -image covers S^n.
SphereCoverResult sphere_cover(int n, int grid);

/// Psi = psi ∘ (projection to the first n coordinates) over a Hilbert
/// cube lattice; certifies hemisphere coverage before reporting.
std::pair<EmbeddingMap, EmbeddingReport> embed_euclid_via_cover(int n,
                                                                int cube_dim,
                                                                int grid);

struct FillingCurveRow {
  int level = 0;
  std::size_t points = 0;
  double max_lip = 0;  // max over tests of L(J(x)) / ||x||_2
  double defect = 0;   // isometry defect for (R^3, l2)
};

/// Hilbert-curve refinements composed with the sphere cover: the
/// Lipschitz constants grow without bound while the defect shrinks.
std::vector<FillingCurveRow> filling_curve_demo(const std::vector<int>& levels);

/// Cell-center position of the level-k Hilbert curve at parameter index i.
Vec hilbert_curve_point(int level, std::uint64_t index);

/// Composes a field on K1 with a point map phi: K2 -> K1 (quotient
/// transfer of basis fields).
ScalarField pullback_field(ModelPtr K2, const std::vector<std::size_t>& phi,
                           const ScalarField& f);

}  // namespace lipspace
