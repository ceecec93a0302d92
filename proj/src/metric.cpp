#include "lipspace/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

namespace lipspace {

using nlohmann::json;

FiniteMetric::FiniteMetric(std::vector<std::string> point_ids,
                           std::vector<double> dist)
    : point_ids_(std::move(point_ids)), dist_(std::move(dist)) {
  if (dist_.size() != point_ids_.size() * point_ids_.size())
    throw Error(ErrorCode::InvalidArgument, "distance matrix is not square");
}

double FiniteMetric::min_positive_dist() const {
  double best = 0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (*this)(i, j);
      if (v > 0 && (best == 0 || v < best)) best = v;
    }
  return best;
}

double FiniteMetric::diameter() const {
  double best = 0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, (*this)(i, j));
  return best;
}

ValidationReport validate_metric(const FiniteMetric& m) {
  ValidationReport report;
  const std::size_t n = m.size();
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(m(i, j)))
        report.violations.push_back(
            {MetricViolation::Kind::NonFinite, i, j, 0, "non-finite entry"});
  if (!report.violations.empty()) return report;

  for (std::size_t i = 0; i < n; ++i)
    if (m(i, i) != 0.0)
      report.violations.push_back(
          {MetricViolation::Kind::Diagonal, i, i, 0, "nonzero diagonal"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i))
        report.violations.push_back(
            {MetricViolation::Kind::Symmetry, i, j, 0, "asymmetric pair"});
      if (m(i, j) <= 0)
        report.violations.push_back({MetricViolation::Kind::Positivity, i, j, 0,
                                     "nonpositive off-diagonal"});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (m(i, j) > m(i, k) + m(k, j) + kTol) {
          std::ostringstream os;
          os << "d(" << i << "," << j << ") > d(" << i << "," << k << ") + d("
             << k << "," << j << ")";
          report.violations.push_back(
              {MetricViolation::Kind::Triangle, i, j, k, os.str()});
        }
      }
    }
  return report;
}

BitopModel::BitopModel(FiniteMetric rho, FiniteMetric d, double delta,
                       std::string spec)
    : rho_(std::move(rho)), d_(std::move(d)), delta_(delta), spec_(std::move(spec)) {
  if (rho_.size() != d_.size() || rho_.point_ids() != d_.point_ids())
    throw Error(ErrorCode::Precondition, "rho and d must share the point set");
  if (!(delta_ > 0))
    throw Error(ErrorCode::Precondition, "delta must be positive");
  const std::size_t n = d_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d_(i, j) < rho_(i, j) - 1e-12)
        throw Error(ErrorCode::Precondition,
                    "fine metric must dominate the coarse metric (pair " +
                        std::to_string(i) + "," + std::to_string(j) + ")");
}

// ---------------------------------------------------------------------------
// Model zoo

namespace {

std::vector<double> zero_matrix(std::size_t n) {
  return std::vector<double>(n * n, 0.0);
}

void set_sym(std::vector<double>& m, std::size_t n, std::size_t i, std::size_t j,
             double v) {
  m[i * n + j] = v;
  m[j * n + i] = v;
}

double lq_dist(const std::vector<double>& a, const std::vector<double>& b,
               double q) {
  double acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::pow(std::abs(a[k] - b[k]), q);
  return std::pow(acc, 1.0 / q);
}

// Sum over coordinates of 2^{-k} |a_k - b_k| with k starting at 1.
double weighted_coord_dist(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double acc = 0, w = 0.5;
  for (std::size_t k = 0; k < a.size(); ++k, w *= 0.5)
    acc += w * std::abs(a[k] - b[k]);
  return acc;
}

ModelPtr build_interval_grid(int n, const std::string& spec) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "interval_grid needs n >= 2");
  std::vector<std::string> ids;
  std::vector<std::vector<double>> coords;
  for (int i = 0; i < n; ++i) {
    ids.push_back("t" + std::to_string(i));
    coords.push_back({double(i) / (n - 1)});
  }
  auto m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      set_sym(m, n, i, j, std::abs(coords[i][0] - coords[j][0]));
  FiniteMetric d(ids, m);
  d.set_coords(coords);
  FiniteMetric rho = d;
  return std::make_shared<BitopModel>(std::move(rho), std::move(d),
                                      1.0 / (n - 1), spec);
}

ModelPtr build_convergent_sequence(int m, double gap, const std::string& spec) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "convergent_sequence needs m >= 1");
  if (gap < 1.0)
    throw Error(ErrorCode::InvalidArgument,
                "convergent_sequence gap must be >= 1 so that d dominates rho");
  const int n = m + 1;
  std::vector<std::string> ids{"lim"};
  std::vector<std::vector<double>> coords{{0.0}};
  for (int k = 1; k <= m; ++k) {
    ids.push_back("t" + std::to_string(k));
    coords.push_back({1.0 / k});
  }
  auto rho_m = zero_matrix(n);
  auto d_m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      set_sym(rho_m, n, i, j, std::abs(coords[i][0] - coords[j][0]));
      set_sym(d_m, n, i, j, gap);
    }
  FiniteMetric rho(ids, rho_m);
  rho.set_coords(coords);
  FiniteMetric d(ids, d_m);
  d.set_coords(coords);
  double delta = rho.min_positive_dist();
  return std::make_shared<BitopModel>(std::move(rho), std::move(d), delta, spec);
}

ModelPtr build_cantor_tree(int depth, const std::string& spec) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "cantor_tree needs depth >= 1");
  if (depth > 16) throw Error(ErrorCode::InvalidArgument, "cantor_tree depth cap is 16");
  const int n = 1 << depth;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    std::string s;
    for (int b = depth - 1; b >= 0; --b) s += ((i >> b) & 1) ? '1' : '0';
    ids.push_back(s);
  }
  auto rho_m = zero_matrix(n);
  auto d_m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int lcp = 0;
      while (lcp < depth && ids[i][lcp] == ids[j][lcp]) ++lcp;
      set_sym(rho_m, n, i, j, std::pow(2.0, -lcp));
      set_sym(d_m, n, i, j, 1.0);
    }
  FiniteMetric rho(ids, rho_m);
  FiniteMetric d(ids, d_m);
  double delta = std::pow(2.0, -(depth - 1));
  return std::make_shared<BitopModel>(std::move(rho), std::move(d), delta, spec);
}

ModelPtr build_lq_ball(double q, int dim, int samples, std::uint64_t seed,
                       const std::string& spec) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "lq_ball needs q >= 1");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "lq_ball needs dim >= 1");
  if (samples < 2 * dim)
    throw Error(ErrorCode::InvalidArgument, "lq_ball needs samples >= 2*dim");
  std::vector<std::vector<double>> coords;
  // Coordinate vertices first so that norming directions are always present.
  for (int k = 0; k < dim; ++k) {
    std::vector<double> e(dim, 0.0);
    e[k] = 1.0;
    coords.push_back(e);
    e[k] = -1.0;
    coords.push_back(e);
  }
  // Remaining points: signed uniform draws normalized to the lq sphere,
  // scaled by u^{1/dim} as radius surrogate. Deterministic for a given seed.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  while ((int)coords.size() < samples) {
    std::vector<double> x(dim);
    double norm_q = 0;
    for (int k = 0; k < dim; ++k) {
      x[k] = sym(rng);
      norm_q += std::pow(std::abs(x[k]), q);
    }
    double norm = std::pow(norm_q, 1.0 / q);
    if (norm < 1e-12) continue;
    double r = std::pow(uni(rng), 1.0 / dim);
    for (int k = 0; k < dim; ++k) x[k] = x[k] / norm * r;
    coords.push_back(std::move(x));
  }
  const int n = samples;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
  auto rho_m = zero_matrix(n);
  auto d_m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      set_sym(d_m, n, i, j, lq_dist(coords[i], coords[j], q));
      set_sym(rho_m, n, i, j, weighted_coord_dist(coords[i], coords[j]));
    }
  FiniteMetric rho(ids, rho_m);
  rho.set_coords(coords);
  FiniteMetric d(ids, d_m);
  d.set_coords(coords);
  double delta = rho.min_positive_dist();
  return std::make_shared<BitopModel>(std::move(rho), std::move(d), delta, spec);
}

ModelPtr build_hilbert_cube(int dim, int grid, const std::string& spec) {
  if (dim < 1 || grid < 2)
    throw Error(ErrorCode::InvalidArgument, "hilbert_cube needs dim >= 1, grid >= 2");
  double count = std::pow((double)grid, dim);
  if (count > 20000)
    throw Error(ErrorCode::InvalidArgument, "hilbert_cube lattice too large");
  const int n = (int)count;
  std::vector<std::vector<double>> coords;
  std::vector<int> idx(dim, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (int k = 0; k < dim; ++k) x[k] = double(idx[k]) / (grid - 1);
    coords.push_back(x);
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[k] < grid) break;
      idx[k] = 0;
    }
  }
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  auto d_m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      set_sym(d_m, n, i, j, weighted_coord_dist(coords[i], coords[j]));
  FiniteMetric d(ids, d_m);
  d.set_coords(coords);
  FiniteMetric rho = d;
  double delta = std::pow(2.0, -dim) / (grid - 1);
  return std::make_shared<BitopModel>(std::move(rho), std::move(d), delta, spec);
}

ModelPtr build_fan(int n_spikes, double rho_radius, const std::string& spec) {
  if (n_spikes < 1) throw Error(ErrorCode::InvalidArgument, "fan needs n >= 1");
  if (!(rho_radius > 0) || rho_radius > 0.5)
    throw Error(ErrorCode::InvalidArgument, "fan rho radius must be in (0, 0.5]");
  const int n = n_spikes + 1;
  std::vector<std::string> ids{"apex"};
  std::vector<std::vector<double>> coords{std::vector<double>(n_spikes, 0.0)};
  for (int k = 1; k <= n_spikes; ++k) {
    ids.push_back("s" + std::to_string(k));
    std::vector<double> e(n_spikes, 0.0);
    e[k - 1] = 0.5;
    coords.push_back(e);
  }
  auto rho_m = zero_matrix(n);
  auto d_m = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d1 = 0;  // ell_1 on the spike coordinates
      for (int k = 0; k < n_spikes; ++k) d1 += std::abs(coords[i][k] - coords[j][k]);
      set_sym(d_m, n, i, j, d1);
      set_sym(rho_m, n, i, j, i == 0 || j == 0 ? rho_radius : 2 * rho_radius);
    }
  FiniteMetric rho(ids, rho_m);
  rho.set_coords(coords);
  FiniteMetric d(ids, d_m);
  d.set_coords(coords);
  return std::make_shared<BitopModel>(std::move(rho), std::move(d), rho_radius, spec);
}

}  // namespace

ModelSpec ModelSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  parts.push_back(cur);
  if (parts.empty() || parts[0].empty())
    throw Error(ErrorCode::InvalidArgument, "empty model spec");
  ModelSpec s;
  s.kind = parts[0];
  auto num = [&](std::size_t i, double dflt) {
    return parts.size() > i && !parts[i].empty() ? std::stod(parts[i]) : dflt;
  };
  if (s.kind == "interval_grid" || s.kind == "interval") {
    s.kind = "interval_grid";
    s.n = (int)num(1, 101);
  } else if (s.kind == "convergent_sequence" || s.kind == "convseq") {
    s.kind = "convergent_sequence";
    s.n = (int)num(1, 6);
    s.gap = num(2, 1.0);
  } else if (s.kind == "cantor_tree" || s.kind == "cantor") {
    s.kind = "cantor_tree";
    s.n = (int)num(1, 4);
  } else if (s.kind == "lq_ball") {
    s.q = num(1, 2.0);
    s.dim = (int)num(2, 8);
    s.n = (int)num(3, 500);
    s.seed = (std::uint64_t)num(4, 0);
  } else if (s.kind == "hilbert_cube") {
    s.dim = (int)num(1, 2);
    s.grid = (int)num(2, 8);
  } else if (s.kind == "fan") {
    s.n = (int)num(1, 8);
    s.rho_radius = num(2, 0.04);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown model kind: " + s.kind);
  }
  return s;
}

std::string ModelSpec::to_string() const {
  std::ostringstream os;
  if (kind == "interval_grid")
    os << kind << ":" << n;
  else if (kind == "convergent_sequence")
    os << kind << ":" << n << ":" << gap;
  else if (kind == "cantor_tree")
    os << kind << ":" << n;
  else if (kind == "lq_ball")
    os << kind << ":" << q << ":" << dim << ":" << n << ":" << seed;
  else if (kind == "hilbert_cube")
    os << kind << ":" << dim << ":" << grid;
  else if (kind == "fan")
    os << kind << ":" << n << ":" << rho_radius;
  else
    os << kind;
  return os.str();
}

ModelPtr make_model(const ModelSpec& spec) {
  const std::string text = spec.to_string();
  ModelPtr model;
  if (spec.kind == "interval_grid")
    model = build_interval_grid(spec.n, text);
  else if (spec.kind == "convergent_sequence")
    model = build_convergent_sequence(spec.n, spec.gap, text);
  else if (spec.kind == "cantor_tree")
    model = build_cantor_tree(spec.n, text);
  else if (spec.kind == "lq_ball")
    model = build_lq_ball(spec.q, spec.dim, spec.n, spec.seed, text);
  else if (spec.kind == "hilbert_cube")
    model = build_hilbert_cube(spec.dim, spec.grid, text);
  else if (spec.kind == "fan")
    model = build_fan(spec.n, spec.rho_radius, text);
  else
    throw Error(ErrorCode::InvalidArgument, "unknown model kind: " + spec.kind);

  if (!validate_metric(model->rho()).valid() || !validate_metric(model->d()).valid())
    throw Error(ErrorCode::Internal, "generated model fails metric axioms");
  return model;
}

ModelPtr make_model(const std::string& spec_text) {
  return make_model(ModelSpec::parse(spec_text));
}

// ---------------------------------------------------------------------------
// Scalar fields and Lipschitz kernels

ScalarField::ScalarField(ModelPtr model, std::vector<double> values)
    : model_(std::move(model)), values_(std::move(values)) {
  if (!model_) throw Error(ErrorCode::InvalidArgument, "null model");
  if (values_.size() != model_->size())
    throw Error(ErrorCode::InvalidArgument, "field size mismatch");
  for (double v : values_)
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "field values must be finite");
}

double ScalarField::sup_norm() const {
  double best = 0;
  for (double v : values_) best = std::max(best, std::abs(v));
  return best;
}

double lip_constant(const ScalarField& f, MetricChoice metric_choice) {
  if (metric_choice == MetricChoice::Fine && f.lip_d_) return *f.lip_d_;
  const FiniteMetric& m =
      metric_choice == MetricChoice::Fine ? f.model().d() : f.model().rho();
  const std::size_t n = f.size();
  double best = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double q = std::abs(f[i] - f[j]) / m(i, j);
      if (q > best) best = q;
    }
  if (metric_choice == MetricChoice::Fine) f.lip_d_ = best;
  return best;
}

double partial_lip(const BitopModel& model, const std::vector<std::size_t>& subset,
                   const std::vector<double>& values, std::size_t* wi,
                   std::size_t* wj) {
  double best = 0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      double q = std::abs(values[a] - values[b]) /
                 model.d()(subset[a], subset[b]);
      if (q > best) {
        best = q;
        if (wi) *wi = subset[a];
        if (wj) *wj = subset[b];
      }
    }
  return best;
}

ScalarField mcshane_extend(ModelPtr model, const std::vector<std::size_t>& subset,
                           const std::vector<double>& values, double L, double lo,
                           double hi) {
  if (subset.empty())
    throw Error(ErrorCode::Precondition, "extension subset must be nonempty");
  if (subset.size() != values.size())
    throw Error(ErrorCode::InvalidArgument, "subset/values size mismatch");
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "empty range");
  for (std::size_t idx : subset)
    if (idx >= model->size())
      throw Error(ErrorCode::InvalidArgument, "subset index out of range");
  double vmin = *std::min_element(values.begin(), values.end());
  double vmax = *std::max_element(values.begin(), values.end());
  if (vmin < lo || vmax > hi)
    throw Error(ErrorCode::Precondition, "partial values outside the range");
  std::size_t wi = 0, wj = 0;
  double plip = partial_lip(*model, subset, values, &wi, &wj);
  if (plip > L * (1 + 1e-9) + 1e-12)
    throw Error(ErrorCode::Precondition,
                "data is not L-Lipschitz on the subset; violating pair (" +
                    std::to_string(wi) + "," + std::to_string(wj) + ")");

  const std::size_t n = model->size();
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < subset.size(); ++a)
      inf = std::min(inf, values[a] + L * model->d()(x, subset[a]));
    out[x] = std::clamp(inf, lo, hi);
  }
  // Restriction is bit-exact by construction.
  for (std::size_t a = 0; a < subset.size(); ++a) out[subset[a]] = values[a];
  return ScalarField(std::move(model), std::move(out));
}

std::vector<std::size_t> closed_ball(const BitopModel& model,
                                     const std::vector<std::size_t>& H, double r) {
  if (H.empty()) throw Error(ErrorCode::Precondition, "ball center set is empty");
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "radius must be nonnegative");
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < model.size(); ++x) {
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t h : H) dist = std::min(dist, model.d()(x, h));
    if (dist <= r) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
json matrix_to_json(const FiniteMetric& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

std::string model_to_json(const BitopModel& model) {
  json j;
  j["points"] = model.d().point_ids();
  j["rho_matrix"] = matrix_to_json(model.rho());
  j["d_matrix"] = matrix_to_json(model.d());
  j["delta"] = model.delta();
  if (model.d().has_coords()) j["coords"] = model.d().coords();
  j["spec"] = model.spec();
  return j.dump(2);
}

ModelPtr model_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  std::vector<std::string> ids = j.at("points").get<std::vector<std::string>>();
  const std::size_t n = ids.size();
  auto read_matrix = [&](const char* key) {
    std::vector<double> m(n * n);
    const json& rows = j.at(key);
    if (rows.size() != n) throw Error(ErrorCode::Io, "bad matrix size");
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw Error(ErrorCode::Io, "bad matrix row");
      for (std::size_t jj = 0; jj < n; ++jj) m[i * n + jj] = rows[i][jj].get<double>();
    }
    return m;
  };
  FiniteMetric rho(ids, read_matrix("rho_matrix"));
  FiniteMetric d(ids, read_matrix("d_matrix"));
  if (j.contains("coords")) {
    auto coords = j["coords"].get<std::vector<std::vector<double>>>();
    rho.set_coords(coords);
    d.set_coords(coords);
  }
  return std::make_shared<BitopModel>(std::move(rho), std::move(d),
                                      j.at("delta").get<double>(),
                                      j.value("spec", std::string{}));
}

}  // namespace lipspace
