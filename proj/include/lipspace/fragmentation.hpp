#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lipspace/metric.hpp"

namespace lipspace {

using PointSet = std::vector<std::size_t>;  // sorted ascending

/// Sequence of surviving subsets under the eps-derivation at resolution
/// delta. Finite(k): A_k is the first empty level. NonFragmentable: a
/// nonempty fixpoint was reached (the last stored level).
struct DerivationTrace {
  ModelPtr model;
  double eps = 0;
  double delta = 0;
  std::vector<PointSet> levels;
  bool finite = true;

  int finite_index() const { return (int)levels.size() - 1; }
  const PointSet& fixpoint() const { return levels.back(); }
};

/// {x in A : d-diam(A ∩ rho-ball(x, delta)) >= eps}. Requires
/// delta <= eps/4 (ResolutionTooCoarse otherwise).
PointSet derive_once(const BitopModel& model, const PointSet& A, double eps,
                     double delta);

DerivationTrace szlenk_index(ModelPtr model, double eps, double delta);

/// Subset A with: for every x in A, d-diam(A ∩ rho-ball(x, delta)) >= 3 eps.
/// The certification is verified exhaustively at construction.
class NonFragWitness {
public:
  NonFragWitness(ModelPtr model, PointSet set, double eps, double delta);

  const BitopModel& model() const { return *model_; }
  ModelPtr model_ptr() const { return model_; }
  const PointSet& set() const { return set_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }

private:
  ModelPtr model_;
  PointSet set_;
  double eps_;
  double delta_;
};

/// Fixpoint search at threshold 3 eps and resolution min(model delta,
/// 3 eps / 4). NotFound is the empty optional.
std::optional<NonFragWitness> find_witness(ModelPtr model, double eps);

/// The two nested families (U_s), (V_s) plus chosen points x_s, indexed
/// by binary strings of length <= depth (root key "").
struct DyadicFamilies {
  struct Node {
    PointSet U, V;
    std::size_t x = 0;
  };
  int depth = 0;
  double eps = 0;
  ModelPtr model;
  std::map<std::string, Node> nodes;
};

DyadicFamilies build_dyadic_families(const NonFragWitness& witness, int depth);

struct QuotientCheckResult {
  double lip_phi = 0;  // Lipschitz constant of phi for the fine metrics
  double c = 0;        // 2 * lip_phi
  struct Row {
    double eps;
    int index_target;  // Sz(K1, c*eps); -1 for infinite
    int index_source;  // Sz(K2, eps); -1 for infinite
    bool ok;
  };
  std::vector<Row> rows;
  // Monotone envelope of rho1(phi x, phi y) as a function of rho2(x, y),
  // sampled at the distinct rho2 values (coarse-continuity proxy).
  std::vector<std::pair<double, double>> modulus;
  bool all_ok = true;
};

/// phi maps each point of K2 to a point index of K1 and must be onto.
QuotientCheckResult check_quotient_monotonicity(ModelPtr K1, ModelPtr K2,
                                                const std::vector<std::size_t>& phi,
                                                const std::vector<double>& eps_list);

struct ScalingRow {
  double q;
  int dim;
  double eps;
  int index;  // -1 for infinite (fixpoint)
};

struct ScalingFit {
  double q;
  int dim;
  double slope;       // d log(index) / d log(1/eps)
  double slope_stderr;
  int points_used;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<ScalingFit> fits;
};

/// Exploratory: indices across an eps grid for sampled lq balls, plus a
/// fitted log-log slope with its standard error. Nothing is asserted
/// beyond monotonicity of the index in eps.
ScalingResult lq_scaling_experiment(const std::vector<double>& q_list,
                                    const std::vector<int>& dims,
                                    const std::vector<double>& eps_grid,
                                    int samples, std::uint64_t seed);

}  // namespace lipspace
