#include "lipspace/convex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "json.hpp"
#include "linprog.hpp"

namespace lipspace {

using nlohmann::json;

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclid_norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double euclid_dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double lq_norm(const Vec& a, double q) {
  double s = 0;
  for (double v : a) s += std::pow(std::abs(v), q);
  return std::pow(s, 1.0 / q);
}

namespace {

constexpr double kDedupTol = 1e-9;

Vec negate(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

bool close(const Vec& a, const Vec& b) { return euclid_dist(a, b) <= kDedupTol; }

bool lex_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kDedupTol) return true;
    if (a[i] > b[i] + kDedupTol) return false;
  }
  return false;
}

std::vector<Vec> symmetrize_dedupe(std::vector<Vec> vecs) {
  std::vector<Vec> out;
  auto add = [&](const Vec& v) {
    for (const Vec& w : out)
      if (close(v, w)) return;
    out.push_back(v);
  };
  for (const Vec& v : vecs) {
    add(v);
    add(negate(v));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

int rank_of(std::vector<Vec> rows, int dim) {
  int rank = 0;
  for (int col = 0; col < dim && rank < (int)rows.size(); ++col) {
    int pivot = -1;
    double best = 1e-10;
    for (int r = rank; r < (int)rows.size(); ++r)
      if (std::abs(rows[r][col]) > best) {
        best = std::abs(rows[r][col]);
        pivot = r;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < (int)rows.size(); ++r) {
      if (r == rank) continue;
      double f = rows[r][col] / rows[rank][col];
      for (int c = col; c < dim; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

// Solves the dim x dim system M y = 1; returns false when singular.
bool solve_ones(std::vector<Vec> M, Vec& y) {
  const int n = (int)M.size();
  Vec rhs(n, 1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[pivot][col])) pivot = r;
    if (std::abs(M[pivot][col]) < 1e-10) return false;
    std::swap(M[col], M[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = M[r][col] / M[col][col];
      for (int c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = rhs[i] / M[i][i];
  return true;
}

void check_representation(const PolyhedralNorm& N) {
  if (N.dim < 1) throw Error(ErrorCode::InvalidArgument, "norm dim must be >= 1");
  const auto& rep = N.v_rep.empty() ? N.h_rep : N.v_rep;
  if (rep.empty())
    throw Error(ErrorCode::InvalidArgument, "norm needs a v_rep or h_rep");
  for (const Vec& v : rep)
    if ((int)v.size() != N.dim)
      throw Error(ErrorCode::InvalidArgument, "representation dimension mismatch");
  if (rank_of(rep, N.dim) < N.dim)
    throw Error(ErrorCode::Precondition, "degenerate (flat) unit ball");
}

// Extreme points of conv(points): p is extreme iff it is not a convex
// combination of the others (LP feasibility).
std::vector<Vec> extreme_filter(const std::vector<Vec>& points) {
  std::vector<Vec> out;
  const int dim = points.empty() ? 0 : (int)points[0].size();
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::vector<Vec> A(dim + 1);
    std::vector<double> b(dim + 1);
    std::size_t cols = points.size() - 1;
    for (int r = 0; r < dim; ++r) {
      A[r].reserve(cols);
      for (std::size_t i = 0; i < points.size(); ++i)
        if (i != j) A[r].push_back(points[i][r]);
      b[r] = points[j][r];
    }
    A[dim].assign(cols, 1.0);
    b[dim] = 1.0;
    auto lp = detail::solve_lp(A, b, std::vector<double>(cols, 0.0));
    if (!lp.feasible) out.push_back(points[j]);
  }
  return out;
}

// Vertex enumeration of {y : <v, y> <= 1 for all v} by intersecting
// dim-subsets of active facets (desk-scale double description).
std::vector<Vec> polar_of_vertices(const std::vector<Vec>& vertices, int dim) {
  std::vector<Vec> found;
  const int m = (int)vertices.size();
  std::vector<int> idx(dim);
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == dim) {
      std::vector<Vec> M;
      for (int i : idx) M.push_back(vertices[i]);
      Vec y;
      if (!solve_ones(M, y)) return;
      for (const Vec& v : vertices)
        if (dot(v, y) > 1 + 1e-7) return;
      for (const Vec& w : found)
        if (close(w, y)) return;
      found.push_back(y);
      return;
    }
    for (int i = start; i <= m - (dim - k); ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  std::sort(found.begin(), found.end(), lex_less);
  return found;
}

}  // namespace

PolyhedralNorm PolyhedralNorm::from_vertices(int dim, std::vector<Vec> vertices,
                                             std::string name) {
  PolyhedralNorm N;
  N.dim = dim;
  N.v_rep = symmetrize_dedupe(std::move(vertices));
  N.name = std::move(name);
  check_representation(N);
  return N;
}

PolyhedralNorm PolyhedralNorm::from_facets(int dim, std::vector<Vec> facets,
                                           std::string name) {
  PolyhedralNorm N;
  N.dim = dim;
  N.h_rep = symmetrize_dedupe(std::move(facets));
  N.name = std::move(name);
  check_representation(N);
  return N;
}

PolyhedralNorm PolyhedralNorm::preset(const std::string& name) {
  auto cross = [&](int dim) {
    std::vector<Vec> v;
    for (int k = 0; k < dim; ++k) {
      Vec e(dim, 0.0);
      e[k] = 1.0;
      v.push_back(e);
    }
    return PolyhedralNorm::from_vertices(dim, v, name);
  };
  auto cube = [&](int dim) {
    std::vector<Vec> v;
    for (int mask = 0; mask < (1 << dim); ++mask) {
      Vec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = (mask >> k) & 1 ? 1.0 : -1.0;
      v.push_back(x);
    }
    return PolyhedralNorm::from_vertices(dim, v, name);
  };
  if (name == "l1:2") return cross(2);
  if (name == "l1:3") return cross(3);
  if (name == "linf:2") return cube(2);
  if (name == "linf:3") return cube(3);
  if (name == "hexagon") {
    double h = std::sqrt(3.0) / 2;
    return PolyhedralNorm::from_vertices(
        2, {{1, 0}, {0.5, h}, {-0.5, h}}, name);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown norm preset: " + name);
}

double support_from_facets(const std::vector<Vec>& facets, const Vec& x) {
  double best = 0;
  for (const Vec& u : facets) best = std::max(best, dot(u, x));
  return best;
}

double gauge_from_vertices(const std::vector<Vec>& vertices, const Vec& x) {
  // gauge(x) = min sum lambda  s.t.  V lambda = x, lambda >= 0, with the
  // symmetric vertex list as columns.
  const int dim = (int)x.size();
  const std::size_t m = vertices.size();
  std::vector<Vec> A(dim);
  for (int r = 0; r < dim; ++r) {
    A[r].resize(m);
    for (std::size_t i = 0; i < m; ++i) A[r][i] = vertices[i][r];
  }
  auto lp = detail::solve_lp(A, x, std::vector<double>(m, 1.0));
  if (!lp.feasible)
    throw Error(ErrorCode::Precondition, "point outside the span of the vertices");
  return lp.objective;
}

double norm_eval(const PolyhedralNorm& N, const Vec& x) {
  if ((int)x.size() != N.dim)
    throw Error(ErrorCode::InvalidArgument, "norm_eval dimension mismatch");
  if (!N.h_rep.empty()) return support_from_facets(N.h_rep, x);
  return gauge_from_vertices(N.v_rep, x);
}

DualBall polar_vertices(const PolyhedralNorm& N) {
  check_representation(N);
  if (N.dim > 4)
    throw Error(ErrorCode::InvalidArgument,
                "polar_vertices supports dim <= 4 only");
  DualBall dual;
  dual.dim = N.dim;
  if (!N.v_rep.empty()) {
    dual.ext_points = polar_of_vertices(N.v_rep, N.dim);
  } else {
    // Polar of the h_rep ball is conv of the facet functionals.
    dual.ext_points = extreme_filter(N.h_rep);
    std::sort(dual.ext_points.begin(), dual.ext_points.end(), lex_less);
  }
  if (dual.ext_points.empty())
    throw Error(ErrorCode::Precondition, "degenerate polar body");
  return dual;
}

int face_count(const PolyhedralNorm& N) {
  return (int)polar_vertices(N).ext_points.size();
}

std::vector<Vec> sphere_grid(int n, int resolution) {
  if (n < 1 || n > 3)
    throw Error(ErrorCode::InvalidArgument, "sphere_grid supports n in {1,2,3}");
  if (resolution < 2)
    throw Error(ErrorCode::InvalidArgument, "sphere_grid needs resolution >= 2");
  std::vector<Vec> out;
  auto add = [&](Vec v) {
    double nrm = euclid_norm(v);
    for (auto& c : v) c /= nrm;
    for (const Vec& w : out)
      if (close(w, v)) return;
    out.push_back(std::move(v));
  };
  const int dim = n + 1;
  for (int k = 0; k < dim; ++k) {
    Vec e(dim, 0.0);
    e[k] = 1.0;
    add(e);
    e[k] = -1.0;
    add(e);
  }
  if (n == 1) {
    for (int k = 0; k < 2 * resolution; ++k) {
      double a = std::numbers::pi * k / resolution;
      add({std::cos(a), std::sin(a)});
    }
    return out;
  }
  // Cube-face lattice projected to the sphere.
  const int per_face = resolution + 1;
  std::vector<int> idx(n, 0);
  for (int axis = 0; axis < dim; ++axis)
    for (int sign = -1; sign <= 1; sign += 2) {
      std::fill(idx.begin(), idx.end(), 0);
      const int cells = (int)std::pow(per_face, n);
      for (int c = 0; c < cells; ++c) {
        Vec v(dim);
        v[axis] = sign;
        int pos = 0;
        for (int k = 0; k < dim; ++k) {
          if (k == axis) continue;
          v[k] = -1.0 + 2.0 * idx[pos++] / resolution;
        }
        add(v);
        for (int k = n - 1; k >= 0; --k) {
          if (++idx[k] < per_face) break;
          idx[k] = 0;
        }
      }
    }
  return out;
}

std::string norm_to_json(const PolyhedralNorm& N) {
  json j;
  j["dim"] = N.dim;
  if (!N.v_rep.empty()) j["v_rep"] = N.v_rep;
  if (!N.h_rep.empty()) j["h_rep"] = N.h_rep;
  if (!N.name.empty()) j["name"] = N.name;
  return j.dump(2);
}

PolyhedralNorm norm_from_json(const std::string& text) {
  json j = json::parse(text);
  int dim = j.at("dim").get<int>();
  std::string name = j.value("name", std::string{});
  if (j.contains("v_rep"))
    return PolyhedralNorm::from_vertices(dim, j["v_rep"].get<std::vector<Vec>>(),
                                         name);
  if (j.contains("h_rep"))
    return PolyhedralNorm::from_facets(dim, j["h_rep"].get<std::vector<Vec>>(),
                                       name);
  throw Error(ErrorCode::Io, "norm JSON needs v_rep or h_rep");
}

}  // namespace lipspace
