#include "lipspace/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lipspace/convex.hpp"
#include "lipspace/embeddings.hpp"
#include "lipspace/errors.hpp"
#include "lipspace/fragmentation.hpp"
#include "lipspace/metric.hpp"

namespace lipspace {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// --- artifact writers -----------------------------------------------------

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string make_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

using Series = std::pair<std::string, std::vector<std::pair<double, double>>>;

// Minimal self-contained line plot; log axes applied before scaling.
std::string line_plot_svg(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, std::vector<Series> series,
                          bool logx, bool logy) {
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return logy ? std::log10(std::max(v, 1e-300)) : v; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto& s : series)
    for (auto& [x, y] : s.second) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double fx = x0 + (x1 - x0) * t / 4, fy = y0 + (y1 - y0) * t / 4;
    double gx = ml + (W - ml - mr) * t / 4, gy = H - mb - (H - mt - mb) * t / 4;
    double vx = logx ? std::pow(10.0, fx) : fx;
    double vy = logy ? std::pow(10.0, fy) : fy;
    svg << "<text x=\"" << gx << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(vx) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(vy) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << xlabel << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\">" << ylabel
      << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (auto& [x, y] : series[s].second) svg << px(x) << "," << py(y) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 16 * s
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
        << "fill=\"" << color << "\">" << series[s].first << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// --- shared pieces --------------------------------------------------------

struct Ctx {
  json params;
  json report;
  std::map<std::string, std::string> artifacts;
  std::vector<std::pair<std::string, bool>> checks;

  void check(const std::string& name, bool pass) { checks.emplace_back(name, pass); }
};

PolyhedralNorm parse_norm(const json& spec) {
  std::string text = spec.get<std::string>();
  if (!text.empty() && text[0] == '{') return norm_from_json(text);
  return PolyhedralNorm::preset(text);
}

json report_of(const EmbeddingReport& r) {
  return json{{"isometry_defect", r.isometry_defect},
              {"relative_defect", r.relative_defect},
              {"max_lip", r.max_lip},
              {"lambda", r.lambda},
              {"coverage_defect", r.coverage_defect},
              {"defect_witness", r.defect_witness}};
}

// Per-test-vector table for an embedding: sup of |J(x)|, source norm,
// absolute defect.
std::string vectors_csv(const EmbeddingMap& E, const std::vector<Vec>& tests) {
  std::vector<std::vector<std::string>> rows{{"index", "norm", "sup", "defect"}};
  for (std::size_t k = 0; k < tests.size(); ++k) {
    auto vals = E.apply(tests[k]);
    double sup = 0;
    for (double v : vals) sup = std::max(sup, std::abs(v));
    double nx = source_norm_eval(E.norm, tests[k]);
    rows.push_back({std::to_string(k), fmt(nx), fmt(sup), fmt(std::abs(sup - nx))});
  }
  return make_csv(rows);
}

std::vector<double> get_vec(const json& j) { return j.get<std::vector<double>>(); }

std::vector<std::size_t> get_idx(const json& j) {
  return j.get<std::vector<std::size_t>>();
}

// Built-in corpus for the quotient monotonicity check: identity maps,
// a tree-depth truncation, a tree-to-fan collapse and a grid refinement.
std::vector<std::size_t> make_point_map(const std::string& name, ModelPtr K1,
                                        ModelPtr K2) {
  std::vector<std::size_t> phi(K2->size());
  if (name == "identity") {
    if (K1->size() != K2->size())
      throw Error(ErrorCode::InvalidArgument, "identity needs equal sizes");
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = i;
  } else if (name == "prefix") {
    // cantor leaves of K2 onto cantor leaves of K1 by truncating ids.
    if (K2->size() % K1->size() != 0)
      throw Error(ErrorCode::InvalidArgument, "prefix needs nested tree sizes");
    std::size_t block = K2->size() / K1->size();
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = i / block;
  } else if (name == "collapse") {
    // first |K1| points map identically, the rest onto point 0.
    if (K2->size() < K1->size())
      throw Error(ErrorCode::InvalidArgument, "collapse needs a larger source");
    for (std::size_t i = 0; i < phi.size(); ++i)
      phi[i] = i < K1->size() ? i : 0;
  } else if (name == "halve") {
    for (std::size_t i = 0; i < phi.size(); ++i)
      phi[i] = std::min(i / 2, K1->size() - 1);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown point map: " + name);
  }
  return phi;
}

struct CorpusEntry {
  std::string target, source, map;
};

const std::vector<CorpusEntry>& quotient_corpus() {
  static const std::vector<CorpusEntry> corpus{
      {"fan:8", "fan:8", "identity"},
      {"cantor:3", "cantor:3", "identity"},
      {"cantor:3", "cantor:6", "prefix"},
      {"fan:7", "cantor:6", "collapse"},
      {"interval_grid:21", "interval_grid:41", "halve"},
  };
  return corpus;
}

json quotient_row_json(const QuotientCheckResult::Row& row) {
  return json{{"eps", row.eps},
              {"index_target", row.index_target},
              {"index_source", row.index_source},
              {"ok", row.ok}};
}

// --- command handlers -----------------------------------------------------

void cmd_validate_metric(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  std::string which = c.params.value("metric", "fine");
  const FiniteMetric& m = which == "coarse" ? model->rho() : model->d();
  ValidationReport rep = validate_metric(m);
  json viols = json::array();
  for (const auto& v : rep.violations)
    viols.push_back({{"i", v.i}, {"j", v.j}, {"k", v.k}, {"detail", v.detail}});
  c.report["violations"] = viols;
  c.check("metric_axioms", rep.valid());
}

void cmd_lip(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  ScalarField f(model, get_vec(c.params.at("values")));
  std::string which = c.params.value("metric", "fine");
  double L = lip_constant(f, which == "coarse" ? MetricChoice::Coarse
                                               : MetricChoice::Fine);
  c.report["lip"] = L;
  c.report["sup_norm"] = f.sup_norm();
}

void cmd_extend(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  auto subset = get_idx(c.params.at("subset"));
  auto values = get_vec(c.params.at("values"));
  double L = c.params.at("L").get<double>();
  double lo = c.params.value("lo", 0.0), hi = c.params.value("hi", 1.0);
  ScalarField ext = mcshane_extend(model, subset, values, L, lo, hi);
  bool exact = true;
  for (std::size_t k = 0; k < subset.size(); ++k)
    if (ext[subset[k]] != values[k]) exact = false;
  c.report["extension"] = ext.values();
  c.report["lip"] = lip_constant(ext);
  c.check("restriction_exact", exact);
  c.check("lip_bound", lip_constant(ext) <= L * (1 + 1e-9) + 1e-12);
}

void cmd_ball(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  auto members =
      closed_ball(*model, get_idx(c.params.at("points")), c.params.at("r").get<double>());
  c.report["members"] = members;
  c.report["count"] = members.size();
}

void cmd_model(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  std::string text = model_to_json(*model);
  c.report["model"] = json::parse(text);
  c.report["size"] = model->size();
  c.report["delta"] = model->delta();
  c.artifacts["model.json"] = text;
}

void cmd_norm_eval(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  c.report["value"] = norm_eval(N, get_vec(c.params.at("x")));
}

void cmd_polar(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  DualBall dual = polar_vertices(N);
  c.report["ext_points"] = dual.ext_points;
  if (!N.v_rep.empty()) {
    PolyhedralNorm D = PolyhedralNorm::from_vertices(N.dim, dual.ext_points);
    DualBall bipolar = polar_vertices(D);
    bool same = bipolar.ext_points.size() == N.v_rep.size();
    for (std::size_t i = 0; same && i < N.v_rep.size(); ++i)
      same = euclid_dist(bipolar.ext_points[i], N.v_rep[i]) <= 1e-9;
    c.check("bipolar_identity", same);
  }
}

void cmd_face_count(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  int faces = face_count(N);
  c.report["face_count"] = faces;
  c.check("even", faces % 2 == 0);
}

void cmd_sphere_grid(Ctx& c) {
  int n = c.params.at("n").get<int>();
  int res = c.params.at("resolution").get<int>();
  auto pts = sphere_grid(n, res);
  c.report["count"] = pts.size();
  bool has_axes = true;
  for (int k = 0; k <= n && has_axes; ++k)
    for (double s : {1.0, -1.0}) {
      Vec e(n + 1, 0.0);
      e[k] = s;
      bool found = false;
      for (const Vec& p : pts)
        if (euclid_dist(p, e) <= 1e-12) {
          found = true;
          break;
        }
      has_axes = has_axes && found;
    }
  c.check("contains_axis_vectors", has_axes);
  std::vector<std::vector<std::string>> rows{{"index"}};
  for (int k = 0; k <= n; ++k) rows[0].push_back("x" + std::to_string(k));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (double v : pts[i]) row.push_back(fmt(v));
    rows.push_back(row);
  }
  c.artifacts["sphere_grid.csv"] = make_csv(rows);
}

void cmd_embed_circle(Ctx& c) {
  int grid = c.params.at("grid").get<int>();
  auto [E, rep] = embed_euclid2_circle(grid);
  c.report["grid"] = grid;
  c.report["report"] = report_of(rep);
  double tol = 5.0 / (double(grid - 1) * (grid - 1)) + 1e-12;
  c.check("isometry_defect_within_mesh", rep.isometry_defect <= tol);
  c.check("lip_bounded_by_pi", rep.max_lip <= std::acos(-1.0) + 0.01);
  c.artifacts["vectors.csv"] = vectors_csv(E, make_test_vectors(2, 200, 12345));
}

void cmd_embed_linf(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  int n = c.params.at("n").get<int>();
  EmbeddingMap E = embed_polyhedral_linf(N, n);
  DualBall dual = polar_vertices(N);
  EmbeddingReport rep =
      verify_isometry(E, make_test_vectors(N.dim, 200, 2024), dual.ext_points);
  c.report["points"] = n;
  c.report["face_count"] = face_count(N);
  c.report["report"] = report_of(rep);
  c.check("isometric", rep.isometry_defect <= 1e-9);
}

void cmd_embed_bumps(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  BumpsResult res = embed_polyhedral_bumps(N, model, get_idx(c.params.at("sites")));
  c.report["sites"] = res.sites;
  c.report["report"] = report_of(res.report);
  c.check("isometric", res.report.isometry_defect <= 1e-9);
  c.check("dual_points_covered", res.report.coverage_defect <= 1e-9);
}

void cmd_c0(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  C0Result res;
  if (c.params.contains("centers"))
    res = construct_c0(model, eps, c.params.value("base", std::size_t(0)),
                       get_idx(c.params.at("centers")));
  else
    res = construct_c0(model, eps);
  c.report["base_point"] = res.base_point;
  c.report["centers"] = res.centers;
  c.report["basis_size"] = res.centers.size();
  c.report["report"] = report_of(res.report);
  c.check("sup_norm_identity", res.report.isometry_defect <= 1e-12);
  c.check("lambda_bound", res.report.lambda <= 2.0 / eps * (1 + 1e-9));
  if (c.params.contains("coeffs")) {
    Vec a = get_vec(c.params.at("coeffs"));
    a.resize(res.centers.size(), 0.0);
    std::vector<double> combo(model->size(), 0.0);
    for (std::size_t t = 0; t < model->size(); ++t)
      for (std::size_t k = 0; k < a.size(); ++k)
        combo[t] += a[k] * res.basis.fields[k][t];
    ScalarField f(model, combo);
    double expect = 0;
    for (double v : a) expect = std::max(expect, std::abs(v));
    c.report["combination_sup"] = f.sup_norm();
    c.check("combination_matches_max", std::abs(f.sup_norm() - expect) <= 1e-12);
  }
}

void cmd_ell1(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  int depth = c.params.at("depth").get<int>();
  auto witness = find_witness(model, eps);
  if (!witness)
    throw Error(ErrorCode::WitnessInvalid,
                "model fragments at eps=" + fmt(eps) + ", no witness set");
  Ell1Result res = construct_ell1(model, *witness, depth);
  c.report["witness_size"] = witness->set().size();
  c.report["patterns"] = res.patterns;
  c.report["H"] = res.H;
  c.report["report"] = report_of(res.report);
  c.check("sup_norm_identity", res.report.isometry_defect <= 1e-12);
  bool lip_ok = true;
  for (const ScalarField& f : res.basis.fields)
    if (lip_constant(f) > (1 + 1e-9) / eps) lip_ok = false;
  c.check("field_lip_bound", lip_ok);
  if (c.params.contains("coeffs")) {
    Vec a = get_vec(c.params.at("coeffs"));
    a.resize(depth, 0.0);
    std::vector<double> combo(model->size(), 0.0);
    for (std::size_t t = 0; t < model->size(); ++t)
      for (int k = 0; k < depth; ++k) combo[t] += a[k] * res.basis.fields[k][t];
    ScalarField f(model, combo);
    double expect = 0;
    for (double v : a) expect += std::abs(v);
    c.report["combination_sup"] = f.sup_norm();
    c.check("combination_matches_sum", std::abs(f.sup_norm() - expect) <= 1e-12);
  }
}

void cmd_ball_example(Ctx& c) {
  BallExampleResult res = example_c0_in_ball(
      c.params.at("dim").get<int>(), c.params.at("samples").get<int>(),
      c.params.value("seed", std::uint64_t(7)), get_vec(c.params.at("coeffs")));
  c.report["sup_over_samples"] = res.sup_over_samples;
  c.report["coeff_max"] = res.coeff_max;
  c.report["measured_lip"] = res.measured_lip;
  c.check("value_bound", res.value_bound_ok);
  c.check("lip_bound", res.lip_bound_ok);
}

void cmd_mazur(Ctx& c) {
  Vec x = get_vec(c.params.at("x"));
  double q1 = c.params.at("q1").get<double>();
  double q2 = c.params.at("q2").get<double>();
  Vec y = mazur_map(x, q1, q2);
  c.report["y"] = y;
  double in = 0, out = 0;
  for (double v : x) in += std::pow(std::abs(v), q1);
  for (double v : y) out += std::pow(std::abs(v), q2);
  c.report["norm_q1_pow"] = in;
  c.report["norm_q2_pow"] = out;
  c.check("power_identity", std::abs(in - out) <= 1e-12 * std::max(1.0, in));
  Vec neg(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) neg[k] = -x[k];
  Vec yn = mazur_map(neg, q1, q2);
  bool odd = true;
  for (std::size_t k = 0; k < y.size(); ++k)
    if (yn[k] != -y[k]) odd = false;
  c.check("odd_symmetry", odd);
}

void cmd_transfer(Ctx& c) {
  double q = c.params.at("q").get<double>();
  double qp = c.params.at("q_prime").get<double>();
  int dim = c.params.at("dim").get<int>();
  int samples = c.params.value("samples", 2000);
  std::uint64_t seed = c.params.value("seed", std::uint64_t(7));
  TransferResult res = transfer_lp(q, qp, dim, samples, seed);
  c.report["p_prime"] = res.p_prime;
  c.report["report"] = report_of(res.report);
  double tol = qp <= 1.0 + 1e-12 ? 1e-9 : 6.0 * std::pow((double)samples, -1.0 / dim);
  c.report["defect_tolerance"] = tol;
  c.check("defect_within_sample_mesh", res.report.isometry_defect <= tol);
}

void cmd_sphere_cover(Ctx& c) {
  int n = c.params.at("n").get<int>();
  int grid = c.params.at("grid").get<int>();
  SphereCoverResult res = sphere_cover(n, grid);
  c.report["points"] = res.domain.size();
  c.report["lip"] = res.lip;
  c.report["coverage_defect"] = res.coverage_defect;
  c.check("hemisphere_covered", res.coverage_defect <= 6.0 / grid);
  c.check("lip_finite", std::isfinite(res.lip));
  std::vector<std::vector<std::string>> rows{{"index"}};
  for (int k = 0; k < n; ++k) rows[0].push_back("a" + std::to_string(k));
  for (int k = 0; k <= n; ++k) rows[0].push_back("s" + std::to_string(k));
  for (std::size_t i = 0; i < res.domain.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (double v : res.domain[i]) row.push_back(fmt(v));
    for (double v : res.image[i]) row.push_back(fmt(v));
    rows.push_back(row);
  }
  c.artifacts["cover.csv"] = make_csv(rows);
}

void cmd_embed_cover(Ctx& c) {
  int n = c.params.at("n").get<int>();
  int cube_dim = c.params.at("cube_dim").get<int>();
  int grid = c.params.at("grid").get<int>();
  auto [E, rep] = embed_euclid_via_cover(n, cube_dim, grid);
  c.report["points"] = E.psi.size();
  c.report["report"] = report_of(rep);
  c.check("defect_bounded_by_coverage",
          rep.isometry_defect <= rep.coverage_defect + 0.1);
}

void cmd_filling_curve(Ctx& c) {
  std::vector<int> levels =
      c.params.value("levels", std::vector<int>{2, 3, 4, 5, 6});
  auto rows = filling_curve_demo(levels);
  json table = json::array();
  std::vector<std::vector<std::string>> csv{{"level", "points", "max_lip", "defect"}};
  std::vector<Series> lip_series{{"max_lip", {}}}, defect_series{{"defect", {}}};
  for (const auto& r : rows) {
    table.push_back({{"level", r.level},
                     {"points", r.points},
                     {"max_lip", r.max_lip},
                     {"defect", r.defect}});
    csv.push_back({std::to_string(r.level), std::to_string(r.points),
                   fmt(r.max_lip), fmt(r.defect)});
    lip_series[0].second.emplace_back(r.level, r.max_lip);
    defect_series[0].second.emplace_back(r.level, r.defect);
  }
  c.report["rows"] = table;
  c.artifacts["filling_curve.csv"] = make_csv(csv);
  c.artifacts["lip_growth.svg"] = line_plot_svg(
      "Lipschitz growth under refinement", "level", "max_lip", lip_series, false, true);
  c.artifacts["defect_decay.svg"] = line_plot_svg(
      "Isometry defect under refinement", "level", "defect", defect_series, false, true);
}

void cmd_verify(Ctx& c) {
  PolyhedralNorm N = parse_norm(c.params.at("norm"));
  int n = c.params.at("n").get<int>();
  EmbeddingMap E = embed_polyhedral_linf(N, n);
  auto tests = make_test_vectors(N.dim, c.params.value("vectors", 200), 2024);
  DualBall dual = polar_vertices(N);
  EmbeddingReport rep = verify_isometry(E, tests, dual.ext_points);
  c.report["report"] = report_of(rep);
  c.artifacts["vectors.csv"] = vectors_csv(E, tests);
}

void cmd_derive(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  double delta = c.params.value("delta", std::min(model->delta(), eps / 4));
  PointSet A(model->size());
  for (std::size_t i = 0; i < A.size(); ++i) A[i] = i;
  PointSet out = derive_once(*model, A, eps, delta);
  c.report["surviving"] = out;
  c.report["count"] = out.size();
}

void cmd_szlenk(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  double delta = c.params.value("delta", std::min(model->delta(), eps / 4));
  DerivationTrace trace = szlenk_index(model, eps, delta);
  json sizes = json::array();
  std::vector<std::vector<std::string>> csv{{"model", "eps", "delta", "level", "size"}};
  std::vector<Series> cascade{{"|A_level|", {}}};
  for (std::size_t k = 0; k < trace.levels.size(); ++k) {
    sizes.push_back(trace.levels[k].size());
    csv.push_back({model->spec(), fmt(eps), fmt(delta), std::to_string(k),
                   std::to_string(trace.levels[k].size())});
    cascade[0].second.emplace_back((double)k, (double)trace.levels[k].size());
  }
  c.report["eps"] = eps;
  c.report["delta"] = delta;
  c.report["level_sizes"] = sizes;
  if (trace.finite) {
    c.report["verdict"] = "Finite";
    c.report["index"] = trace.finite_index();
  } else {
    c.report["verdict"] = "NonFragmentable";
    c.report["fixpoint"] = trace.fixpoint();
  }
  c.artifacts["derivation.csv"] = make_csv(csv);
  c.artifacts["cascade.svg"] = line_plot_svg("Derivation cascade " + model->spec(),
                                             "level", "surviving points", cascade,
                                             false, false);
}

void cmd_witness(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  auto w = find_witness(model, eps);
  c.report["found"] = bool(w);
  if (w) {
    c.report["set"] = w->set();
    c.report["delta"] = w->delta();
  }
}

void cmd_dyadic(Ctx& c) {
  ModelPtr model = make_model(c.params.at("model").get<std::string>());
  double eps = c.params.at("eps").get<double>();
  int depth = c.params.at("depth").get<int>();
  auto w = find_witness(model, eps);
  if (!w)
    throw Error(ErrorCode::WitnessInvalid,
                "model fragments at eps=" + fmt(eps) + ", no witness set");
  DyadicFamilies fam = build_dyadic_families(*w, depth);
  auto contains = [](const PointSet& s, std::size_t v) {
    return std::binary_search(s.begin(), s.end(), v);
  };
  bool nested = true, v_in_u = true, disjoint = true, separated = true;
  for (const auto& [key, node] : fam.nodes) {
    for (std::size_t v : node.V)
      if (!contains(node.U, v)) v_in_u = false;
    // d(V_s, complement of U_s) > eps.
    for (std::size_t v : node.V)
      for (std::size_t y = 0; y < model->size(); ++y)
        if (!contains(node.U, y) && model->d()(v, y) <= eps) separated = false;
    if (key.empty()) continue;
    const PointSet& parent = fam.nodes.at(key.substr(0, key.size() - 1)).U;
    for (std::size_t u : node.U)
      if (!contains(parent, u)) nested = false;
    if (key.back() == '0') {
      auto sib = fam.nodes.find(key.substr(0, key.size() - 1) + "1");
      if (sib != fam.nodes.end())
        for (std::size_t u : node.U)
          if (contains(sib->second.U, u)) disjoint = false;
    }
  }
  json nodes = json::object();
  for (const auto& [key, node] : fam.nodes)
    nodes[key.empty() ? "root" : key] = {
        {"U_size", node.U.size()}, {"V_size", node.V.size()}, {"x", node.x}};
  c.report["nodes"] = nodes;
  c.check("children_nested_in_parent", nested);
  c.check("V_inside_U", v_in_u);
  c.check("siblings_disjoint", disjoint);
  c.check("V_eps_separated_from_outside_U", separated);
}

void cmd_quotient_check(Ctx& c) {
  std::vector<double> eps_list =
      c.params.value("eps_list", std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.5});
  json pairs = json::array();
  std::vector<std::vector<std::string>> csv{
      {"target", "source", "map", "eps", "index_target", "index_source", "ok"}};
  bool all_ok = true;
  auto run_pair = [&](const std::string& target, const std::string& source,
                      const std::string& map_name) {
    ModelPtr K1 = make_model(target);
    ModelPtr K2 = make_model(source);
    auto phi = make_point_map(map_name, K1, K2);
    QuotientCheckResult res = check_quotient_monotonicity(K1, K2, phi, eps_list);
    json rows = json::array();
    for (const auto& row : res.rows) {
      rows.push_back(quotient_row_json(row));
      csv.push_back({target, source, map_name, fmt(row.eps),
                     std::to_string(row.index_target),
                     std::to_string(row.index_source), row.ok ? "1" : "0"});
    }
    pairs.push_back({{"target", target},
                     {"source", source},
                     {"map", map_name},
                     {"lip_phi", res.lip_phi},
                     {"c", res.c},
                     {"rows", rows}});
    all_ok = all_ok && res.all_ok;
  };
  if (c.params.contains("source"))
    run_pair(c.params.at("target").get<std::string>(),
             c.params.at("source").get<std::string>(),
             c.params.value("map", "identity"));
  else
    for (const auto& entry : quotient_corpus())
      run_pair(entry.target, entry.source, entry.map);
  c.report["pairs"] = pairs;
  c.check("index_inequality", all_ok);
  c.artifacts["quotient.csv"] = make_csv(csv);
}

void cmd_scaling(Ctx& c) {
  std::vector<double> q_list = c.params.value("q_list", std::vector<double>{1.0, 2.0});
  std::vector<int> dims = c.params.value("dims", std::vector<int>{2});
  std::vector<double> eps_grid = c.params.value(
      "eps_grid", std::vector<double>{0.8, 0.6, 0.45, 0.34, 0.25});
  int samples = c.params.value("samples", 300);
  std::uint64_t seed = c.params.value("seed", std::uint64_t(7));
  ScalingResult res = lq_scaling_experiment(q_list, dims, eps_grid, samples, seed);
  json rows = json::array(), fits = json::array();
  std::vector<std::vector<std::string>> csv{{"q", "dim", "eps", "index"}};
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  bool monotone = true;
  std::map<std::pair<double, int>, std::vector<std::pair<double, int>>> grouped;
  for (const auto& r : res.rows) {
    rows.push_back({{"q", r.q}, {"dim", r.dim}, {"eps", r.eps}, {"index", r.index}});
    csv.push_back({fmt(r.q), std::to_string(r.dim), fmt(r.eps),
                   std::to_string(r.index)});
    grouped[{r.q, r.dim}].emplace_back(r.eps, r.index);
    if (r.index > 0)
      series["q=" + fmt(r.q) + " dim=" + std::to_string(r.dim)].emplace_back(
          1.0 / r.eps, (double)r.index);
  }
  // Index must not decrease as eps decreases; a fixpoint (-1) counts as
  // larger than every finite index.
  for (auto& [key, pts] : grouped) {
    std::sort(pts.begin(), pts.end(),
              [](auto& a, auto& b) { return a.first > b.first; });
    long long prev = -2;
    for (auto& [eps, idx] : pts) {
      long long v = idx < 0 ? std::numeric_limits<long long>::max() : idx;
      if (prev != -2 && v < prev) monotone = false;
      prev = v;
    }
  }
  for (const auto& f : res.fits)
    fits.push_back({{"q", f.q},
                    {"dim", f.dim},
                    {"slope", f.slope},
                    {"slope_stderr", f.slope_stderr},
                    {"points_used", f.points_used}});
  c.report["rows"] = rows;
  c.report["fits"] = fits;
  c.check("index_monotone_in_eps", monotone);
  c.artifacts["scaling.csv"] = make_csv(csv);
  std::vector<Series> svg_series;
  for (auto& [name, pts] : series) svg_series.emplace_back(name, pts);
  if (!svg_series.empty())
    c.artifacts["scaling.svg"] = line_plot_svg("Derivation index scaling", "1/eps",
                                               "index", svg_series, true, true);
}

using Handler = std::function<void(Ctx&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"validate-metric", cmd_validate_metric},
      {"lip", cmd_lip},
      {"extend", cmd_extend},
      {"ball", cmd_ball},
      {"model", cmd_model},
      {"norm-eval", cmd_norm_eval},
      {"polar", cmd_polar},
      {"face-count", cmd_face_count},
      {"sphere-grid", cmd_sphere_grid},
      {"embed-circle", cmd_embed_circle},
      {"embed-linf", cmd_embed_linf},
      {"embed-bumps", cmd_embed_bumps},
      {"c0-construct", cmd_c0},
      {"ell1", cmd_ell1},
      {"ball-example", cmd_ball_example},
      {"mazur", cmd_mazur},
      {"transfer", cmd_transfer},
      {"sphere-cover", cmd_sphere_cover},
      {"embed-cover", cmd_embed_cover},
      {"filling-curve", cmd_filling_curve},
      {"verify", cmd_verify},
      {"derive", cmd_derive},
      {"szlenk", cmd_szlenk},
      {"witness", cmd_witness},
      {"dyadic", cmd_dyadic},
      {"quotient-check", cmd_quotient_check},
      {"scaling", cmd_scaling},
  };
  return table;
}

void write_artifacts(const RunConfig& config, const RunOutcome& out) {
  namespace fs = std::filesystem;
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "report.json", std::ios::binary);
    f << out.report_json;
  }
  {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                    now.time_since_epoch())
                    .count();
    json meta{{"command", config.command}, {"unix_time", secs}};
    std::ofstream f(dir / "metadata.json", std::ios::binary);
    f << meta.dump(2) << "\n";
  }
  for (const auto& [name, content] : out.artifacts) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
  }
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  auto it = handlers().find(config.command);
  json report{{"command", config.command}};
  if (it == handlers().end()) {
    out.exit_status = 2;
    out.failure = "unknown command: " + config.command;
    report["error"] = out.failure;
    out.report_json = report.dump(2) + "\n";
    return out;
  }
  Ctx ctx;
  try {
    ctx.params = json::parse(config.params_json);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad config: ") + e.what());
  }
  report["params"] = ctx.params;
  try {
    it->second(ctx);
  } catch (const Error& e) {
    out.exit_status = 1;
    out.failure = std::string(error_code_name(e.code())) + ": " + e.what();
    report["error"] = out.failure;
    report["error_code"] = error_code_name(e.code());
    out.report_json = report.dump(2) + "\n";
    if (!config.out_dir.empty()) write_artifacts(config, out);
    return out;
  } catch (const json::exception& e) {
    out.exit_status = 1;
    out.failure = std::string("InvalidArgument: ") + e.what();
    report["error"] = out.failure;
    out.report_json = report.dump(2) + "\n";
    if (!config.out_dir.empty()) write_artifacts(config, out);
    return out;
  }
  json checks = json::array();
  bool passed = true;
  for (const auto& [name, pass] : ctx.checks) {
    checks.push_back({{"name", name}, {"pass", pass}});
    if (!pass && out.failure.empty()) out.failure = "check failed: " + name;
    passed = passed && pass;
  }
  for (auto& [key, value] : ctx.report.items()) report[key] = value;
  report["checks"] = checks;
  report["passed"] = passed;
  out.exit_status = passed ? 0 : 1;
  out.report_json = report.dump(2) + "\n";
  out.artifacts = std::move(ctx.artifacts);
  if (!config.out_dir.empty()) write_artifacts(config, out);
  return out;
}

const std::vector<CommandRow>& list_commands() {
  static const std::vector<CommandRow> table{
      {"validate-metric", "validate_metric",
       "check all metric axioms and list violations"},
      {"lip", "lip_constant",
       "largest difference quotient of a field over the chosen metric"},
      {"extend", "mcshane_extend",
       "extend partial Lipschitz data to the whole model with the same constant"},
      {"ball", "closed_ball", "points within fine distance r of a subset"},
      {"model", "make_model", "build a generated model and emit its JSON"},
      {"norm-eval", "norm_eval", "evaluate a polyhedral norm at a vector"},
      {"polar", "polar_vertices", "extreme points of the dual unit ball"},
      {"face-count", "face_count", "number of facets of the unit ball"},
      {"sphere-grid", "sphere_grid", "deterministic quasi-uniform sphere sample"},
      {"embed circle", "embed_euclid2_circle",
       "plane into fields over an interval via half-circle directions"},
      {"embed linf", "embed_polyhedral_linf",
       "polyhedral space into fields over finitely many points"},
      {"embed bumps", "embed_polyhedral_bumps",
       "polyhedral space via disjoint bump fields at separated sites"},
      {"c0-construct", "construct_c0",
       "sup-norm basis from a separated family around a base point"},
      {"ell1", "construct_ell1",
       "absolute-sum basis from a non-fragmentability witness"},
      {"ball-example", "example_c0_in_ball",
       "quadratic coordinate fields over a sampled round ball"},
      {"mazur", "mazur_map", "signed power map between lq balls"},
      {"transfer", "transfer_lp",
       "push a sampled lq ball to a lower exponent and re-verify"},
      {"sphere-cover", "sphere_cover",
       "Lipschitz cover of the sphere by a scaled cube"},
      {"embed cover", "embed_euclid_via_cover",
       "Euclidean space into fields over a cube lattice via the sphere cover"},
      {"filling-curve", "filling_curve_demo",
       "Lipschitz growth under space-filling curve refinement"},
      {"verify", "verify_isometry",
       "isometry and coverage defects of an embedding over test vectors"},
      {"derive", "derive_once", "one step of the eps-derivation"},
      {"szlenk", "szlenk_index", "iterate the derivation to a verdict"},
      {"witness", "find_witness", "largest subset certifying non-fragmentation"},
      {"dyadic", "build_dyadic_families",
       "nested separated families indexed by binary strings"},
      {"quotient-check", "check_quotient_monotonicity",
       "derivation index inequality along a Lipschitz point map"},
      {"scaling", "lq_scaling_experiment",
       "derivation index across an eps grid with a fitted slope"},
  };
  return table;
}

}  // namespace lipspace
