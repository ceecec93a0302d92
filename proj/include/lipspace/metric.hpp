#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipspace/errors.hpp"

namespace lipspace {

/// Symmetric distance matrix over a finite labelled point set.
/// Entries are dimensionless nonnegative reals; axioms are checked by
/// validate_metric rather than at construction.
class FiniteMetric {
public:
  FiniteMetric() = default;
  FiniteMetric(std::vector<std::string> point_ids, std::vector<double> dist);

  std::size_t size() const { return point_ids_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return dist_[i * size() + j];
  }
  const std::vector<std::string>& point_ids() const { return point_ids_; }
  const std::vector<double>& raw() const { return dist_; }

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }
  void set_coords(std::vector<std::vector<double>> c) { coords_ = std::move(c); }

  /// Smallest strictly positive off-diagonal entry (0 on a singleton).
  double min_positive_dist() const;
  double diameter() const;

private:
  std::vector<std::string> point_ids_;
  std::vector<double> dist_;  // row-major size*size
  std::vector<std::vector<double>> coords_;  // optional, one vector per point
};

struct MetricViolation {
  enum class Kind { Diagonal, Symmetry, Positivity, Triangle, NonFinite };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<MetricViolation> violations;
  bool valid() const { return violations.empty(); }
};

/// Checks all metric axioms (tolerance 1e-12 for the triangle inequality).
/// The report lists every violation with the offending pair or triple.
ValidationReport validate_metric(const FiniteMetric& m);

/// Parameter block for the model zoo. `kind` is one of: interval_grid,
/// convergent_sequence, cantor_tree, lq_ball, hilbert_cube, fan.
struct ModelSpec {
  std::string kind;
  double q = 2.0;          // lq_ball
  int dim = 0;             // lq_ball, hilbert_cube
  int n = 0;               // interval_grid, fan, convergent_sequence (m), cantor depth, samples
  int grid = 0;            // hilbert_cube
  double gap = 1.0;        // convergent_sequence
  double rho_radius = 0.04;  // fan coarse radius
  std::uint64_t seed = 0;  // lq_ball

  /// Parses the compact colon form used by the CLI, e.g. "fan:8",
  /// "cantor:4", "convergent_sequence:6:1", "lq_ball:2:8:500:7",
  /// "hilbert_cube:2:3", "interval_grid:101".
  static ModelSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Finite stand-in for a compact space carrying a coarse metric rho
/// (topology proxy) and a finer metric d, at resolution delta.
class BitopModel {
public:
  BitopModel(FiniteMetric rho, FiniteMetric d, double delta,
             std::string spec = "");

  std::size_t size() const { return d_.size(); }
  const FiniteMetric& rho() const { return rho_; }
  const FiniteMetric& d() const { return d_; }
  double delta() const { return delta_; }
  const std::string& spec() const { return spec_; }

private:
  FiniteMetric rho_;
  FiniteMetric d_;
  double delta_;
  std::string spec_;
};

using ModelPtr = std::shared_ptr<const BitopModel>;

/// Builds one of the standard generated models. The result passes
/// validate_metric on both metrics and the d >= rho entrywise invariant;
/// generation is deterministic given the seed.
ModelPtr make_model(const ModelSpec& spec);
ModelPtr make_model(const std::string& spec_text);

enum class MetricChoice { Fine, Coarse };

/// One real value per model point; the finite stand-in for f in C(K).
class ScalarField {
public:
  ScalarField(ModelPtr model, std::vector<double> values);

  const BitopModel& model() const { return *model_; }
  ModelPtr model_ptr() const { return model_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double sup_norm() const;

private:
  friend double lip_constant(const ScalarField&, MetricChoice);
  ModelPtr model_;
  std::vector<double> values_;
  mutable std::optional<double> lip_d_;  // cached fine-metric constant
};

/// Exact maximum difference quotient over all unordered pairs; 0 on a
/// singleton. Caches the result on the field when metric_choice is Fine.
double lip_constant(const ScalarField& f, MetricChoice metric_choice = MetricChoice::Fine);

/// Lipschitz constant of partial data given on `subset` w.r.t. the fine
/// metric; reports the attaining pair through `wi`/`wj` when non-null.
double partial_lip(const BitopModel& model, const std::vector<std::size_t>& subset,
                   const std::vector<double>& values, std::size_t* wi = nullptr,
                   std::size_t* wj = nullptr);

/// Extends L-Lipschitz data on `subset` to the whole model via the
/// infimal-convolution formula, clamped to [lo, hi]. The restriction to
/// `subset` is bit-exact and the extension keeps the constant L.
ScalarField mcshane_extend(ModelPtr model, const std::vector<std::size_t>& subset,
                           const std::vector<double>& values, double L, double lo,
                           double hi);

/// Points whose fine-metric distance to H is <= r.
std::vector<std::size_t> closed_ball(const BitopModel& model,
                                     const std::vector<std::size_t>& H, double r);

/// JSON document {points, rho_matrix, d_matrix, delta, coords?, spec};
/// round-trip stable.
std::string model_to_json(const BitopModel& model);
ModelPtr model_from_json(const std::string& json_text);

}  // namespace lipspace
