#pragma once

#include <string>
#include <vector>

#include "lipspace/errors.hpp"

namespace lipspace {

using Vec = std::vector<double>;

/// Finite-dimensional norm given by unit-ball vertices (v_rep) and/or
/// facet functionals (h_rep, facet {x: <u,x> = 1}). Representations are
/// symmetrized under negation at construction.
struct PolyhedralNorm {
  int dim = 0;
  std::vector<Vec> v_rep;
  std::vector<Vec> h_rep;
  std::string name;

  static PolyhedralNorm from_vertices(int dim, std::vector<Vec> vertices,
                                      std::string name = "");
  static PolyhedralNorm from_facets(int dim, std::vector<Vec> facets,
                                    std::string name = "");
  /// Named presets: "l1:2", "l1:3", "linf:2", "linf:3", "hexagon".
  static PolyhedralNorm preset(const std::string& name);
};

struct DualBall {
  int dim = 0;
  std::vector<Vec> ext_points;  // symmetric under negation, canonically sorted
};

/// Gauge of the unit ball. Uses the facet representation when present,
/// otherwise the Minkowski gauge computed by linear feasibility.
double norm_eval(const PolyhedralNorm& N, const Vec& x);

/// Gauge from the vertex representation alone (linear program). Kept as a
/// separate route so both evaluations can be cross-checked.
double gauge_from_vertices(const std::vector<Vec>& vertices, const Vec& x);

/// Support-function route: max over facet functionals of <u, x>.
double support_from_facets(const std::vector<Vec>& facets, const Vec& x);

/// Extreme points of the polar body, dim <= 4 (brute-force double
/// description). polar(polar(N)) reproduces N's vertex set up to
/// permutation within 1e-9.
DualBall polar_vertices(const PolyhedralNorm& N);

/// Number of facets of the unit ball = number of extreme points of the
/// dual ball; always even.
int face_count(const PolyhedralNorm& N);

/// Deterministic quasi-uniform sample of S^n (n in {1,2,3}) with mesh
/// <= c/resolution, including all +-e_i.
std::vector<Vec> sphere_grid(int n, int resolution);

std::string norm_to_json(const PolyhedralNorm& N);
PolyhedralNorm norm_from_json(const std::string& text);

// Small dense helpers shared with the embeddings module.
double dot(const Vec& a, const Vec& b);
double euclid_norm(const Vec& a);
double euclid_dist(const Vec& a, const Vec& b);
double lq_norm(const Vec& a, double q);

}  // namespace lipspace
