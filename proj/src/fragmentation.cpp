#include "lipspace/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace lipspace {

namespace {

double set_diam(const BitopModel& model, const PointSet& pts) {
  double best = 0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      best = std::max(best, model.d()(pts[a], pts[b]));
  return best;
}

// Resolved neighborhood diameter: d-diam(A ∩ rho-ball(x, delta)), with an
// early exit once `threshold` is reached.
double resolved_diam(const BitopModel& model, const std::vector<char>& in_A,
                     std::size_t x, double delta, double threshold) {
  PointSet ball;
  for (std::size_t y = 0; y < model.size(); ++y)
    if (in_A[y] && model.rho()(x, y) <= delta) ball.push_back(y);
  double best = 0;
  for (std::size_t a = 0; a < ball.size(); ++a)
    for (std::size_t b = a + 1; b < ball.size(); ++b) {
      best = std::max(best, model.d()(ball[a], ball[b]));
      if (best >= threshold) return best;
    }
  return best;
}

PointSet derive_with_threshold(const BitopModel& model, const PointSet& A,
                               double threshold, double delta) {
  std::vector<char> in_A(model.size(), 0);
  for (std::size_t x : A) in_A[x] = 1;
  PointSet out;
  for (std::size_t x : A)
    if (resolved_diam(model, in_A, x, delta, threshold) >= threshold)
      out.push_back(x);
  return out;
}

}  // namespace

PointSet derive_once(const BitopModel& model, const PointSet& A, double eps,
                     double delta) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (!(delta > 0) || delta > eps / 4)
    throw Error(ErrorCode::ResolutionTooCoarse,
                "derivation requires 0 < delta <= eps/4");
  return derive_with_threshold(model, A, eps, delta);
}

DerivationTrace szlenk_index(ModelPtr model, double eps, double delta) {
  DerivationTrace trace;
  trace.model = model;
  trace.eps = eps;
  trace.delta = delta;
  PointSet A(model->size());
  for (std::size_t i = 0; i < A.size(); ++i) A[i] = i;
  trace.levels.push_back(A);
  for (;;) {
    PointSet next = derive_once(*model, trace.levels.back(), eps, delta);
    if (next.empty()) {
      trace.levels.push_back(next);
      trace.finite = true;
      return trace;
    }
    if (next == trace.levels.back()) {
      trace.finite = false;  // nonempty fixpoint
      return trace;
    }
    trace.levels.push_back(std::move(next));
  }
}

NonFragWitness::NonFragWitness(ModelPtr model, PointSet set, double eps,
                               double delta)
    : model_(std::move(model)), set_(std::move(set)), eps_(eps), delta_(delta) {
  if (set_.empty())
    throw Error(ErrorCode::WitnessInvalid, "witness set is empty");
  std::vector<char> in_A(model_->size(), 0);
  for (std::size_t x : set_) in_A[x] = 1;
  for (std::size_t x : set_) {
    double diam = resolved_diam(*model_, in_A, x, delta_, 3 * eps_);
    if (diam < 3 * eps_ - 1e-12)
      throw Error(ErrorCode::WitnessInvalid,
                  "resolved neighborhood of point " + std::to_string(x) +
                      " has diameter " + std::to_string(diam) + " < 3*eps");
  }
}

std::optional<NonFragWitness> find_witness(ModelPtr model, double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const double threshold = 3 * eps;
  const double delta = std::min(model->delta(), threshold / 4);
  PointSet A(model->size());
  for (std::size_t i = 0; i < A.size(); ++i) A[i] = i;
  for (;;) {
    PointSet next = derive_with_threshold(*model, A, threshold, delta);
    if (next.empty()) return std::nullopt;
    if (next == A) break;
    A = std::move(next);
  }
  return NonFragWitness(model, A, eps, delta);
}

DyadicFamilies build_dyadic_families(const NonFragWitness& witness, int depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  const BitopModel& model = witness.model();
  const double eps = witness.eps();
  const PointSet& A = witness.set();
  if ((std::size_t(1) << depth) > A.size())
    throw Error(ErrorCode::DepthExhausted,
                "witness has " + std::to_string(A.size()) +
                    " points, cannot support depth " + std::to_string(depth));

  DyadicFamilies fam;
  fam.depth = depth;
  fam.eps = eps;
  fam.model = witness.model_ptr();

  PointSet everything(model.size());
  for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = i;
  fam.nodes[""] = {everything, A, A.front()};

  // Recursive split of the candidate pool S_s ⊆ A. The pair is chosen to
  // maximize the coarse distance subject to d > 3 eps (row-major tie
  // break), the pool is split by the rho-Voronoi rule, and each side is
  // pruned to keep d(S_{s0}, S_{s1}) > 2 eps, which forces disjointness
  // of the U-children.
  struct Frame {
    std::string s;
    PointSet pool;
  };
  std::vector<Frame> stack{{"", A}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if ((int)fr.s.size() == depth) continue;
    std::size_t a = 0, b = 0;
    double best_rho = -1;
    for (std::size_t i = 0; i < fr.pool.size(); ++i)
      for (std::size_t j = i + 1; j < fr.pool.size(); ++j) {
        if (model.d()(fr.pool[i], fr.pool[j]) <= 3 * eps) continue;
        double r = model.rho()(fr.pool[i], fr.pool[j]);
        if (r > best_rho) {
          best_rho = r;
          a = fr.pool[i];
          b = fr.pool[j];
        }
      }
    if (best_rho < 0)
      throw Error(ErrorCode::DepthExhausted,
                  "no 3*eps-separated pair inside the pool at level " +
                      std::to_string(fr.s.size()));
    PointSet T0, T1;
    for (std::size_t y : fr.pool)
      (model.rho()(y, a) <= model.rho()(y, b) ? T0 : T1).push_back(y);
    auto prune = [&](const PointSet& keep, const PointSet& other) {
      PointSet out;
      for (std::size_t y : keep) {
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t z : other) dist = std::min(dist, model.d()(y, z));
        if (dist > 2 * eps) out.push_back(y);
      }
      return out;
    };
    PointSet S0 = prune(T0, T1);
    PointSet S1 = prune(T1, T0);
    auto contains = [](const PointSet& s, std::size_t v) {
      return std::binary_search(s.begin(), s.end(), v);
    };
    if (!contains(S0, a) || !contains(S1, b))
      throw Error(ErrorCode::DepthExhausted,
                  "separation pruning removed a chosen point at level " +
                      std::to_string(fr.s.size()));
    const PointSet& parentU = fam.nodes[fr.s].U;
    auto make_U = [&](const PointSet& V) {
      PointSet out;
      for (std::size_t y : parentU) {
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t v : V) dist = std::min(dist, model.d()(y, v));
        if (dist <= eps) out.push_back(y);
      }
      return out;
    };
    fam.nodes[fr.s + "0"] = {make_U(S0), S0, a};
    fam.nodes[fr.s + "1"] = {make_U(S1), S1, b};
    stack.push_back({fr.s + "1", std::move(S1)});
    stack.push_back({fr.s + "0", std::move(S0)});
  }
  return fam;
}

QuotientCheckResult check_quotient_monotonicity(ModelPtr K1, ModelPtr K2,
                                                const std::vector<std::size_t>& phi,
                                                const std::vector<double>& eps_list) {
  if (phi.size() != K2->size())
    throw Error(ErrorCode::InvalidArgument, "phi must map every point of K2");
  std::vector<char> hit(K1->size(), 0);
  for (std::size_t img : phi) {
    if (img >= K1->size())
      throw Error(ErrorCode::InvalidArgument, "phi image out of range");
    hit[img] = 1;
  }
  for (char h : hit)
    if (!h) throw Error(ErrorCode::Precondition, "phi is not onto");

  QuotientCheckResult res;
  std::map<double, double> envelope;  // rho2 -> max rho1 of images
  for (std::size_t x = 0; x < K2->size(); ++x)
    for (std::size_t y = x + 1; y < K2->size(); ++y) {
      double d2 = K2->d()(x, y);
      double d1 = K1->d()(phi[x], phi[y]);
      if (d2 > 0) res.lip_phi = std::max(res.lip_phi, d1 / d2);
      double r2 = K2->rho()(x, y);
      double r1 = K1->rho()(phi[x], phi[y]);
      auto it = envelope.find(r2);
      if (it == envelope.end())
        envelope[r2] = r1;
      else
        it->second = std::max(it->second, r1);
    }
  double running = 0;
  for (auto& [r2, r1] : envelope) {
    running = std::max(running, r1);
    res.modulus.emplace_back(r2, running);
  }
  res.c = 2 * res.lip_phi;
  for (double eps : eps_list) {
    // Same resolution on both sides; otherwise the two derivations see
    // incomparable neighborhoods and the index comparison is meaningless.
    double eps1 = res.c * eps;
    double delta = std::min(std::min(K1->delta(), K2->delta()),
                            std::min(eps, eps1) / 4);
    auto t2 = szlenk_index(K2, eps, delta);
    auto t1 = szlenk_index(K1, eps1, delta);
    QuotientCheckResult::Row row;
    row.eps = eps;
    row.index_target = t1.finite ? t1.finite_index() : -1;
    row.index_source = t2.finite ? t2.finite_index() : -1;
    // Sz(K1, c eps) <= Sz(K2, eps), with -1 playing the role of infinity.
    if (row.index_source < 0)
      row.ok = true;
    else
      row.ok = row.index_target >= 0 && row.index_target <= row.index_source;
    res.all_ok = res.all_ok && row.ok;
    res.rows.push_back(row);
  }
  return res;
}

ScalingResult lq_scaling_experiment(const std::vector<double>& q_list,
                                    const std::vector<int>& dims,
                                    const std::vector<double>& eps_grid,
                                    int samples, std::uint64_t seed) {
  ScalingResult res;
  for (double q : q_list)
    for (int dim : dims) {
      ModelSpec spec;
      spec.kind = "lq_ball";
      spec.q = q;
      spec.dim = dim;
      spec.n = samples;
      spec.seed = seed;
      ModelPtr model = make_model(spec);
      std::vector<double> xs, ys;
      for (double eps : eps_grid) {
        auto trace = szlenk_index(model, eps, std::min(model->delta(), eps / 4));
        int idx = trace.finite ? trace.finite_index() : -1;
        res.rows.push_back({q, dim, eps, idx});
        if (idx > 0) {
          xs.push_back(std::log(1.0 / eps));
          ys.push_back(std::log((double)idx));
        }
      }
      ScalingFit fit{q, dim, 0, 0, (int)xs.size()};
      if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          mx += xs[i];
          my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          sxx += (xs[i] - mx) * (xs[i] - mx);
          sxy += (xs[i] - mx) * (ys[i] - my);
        }
        if (sxx > 0) {
          fit.slope = sxy / sxx;
          double sse = 0;
          for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = ys[i] - my - fit.slope * (xs[i] - mx);
            sse += r * r;
          }
          if (xs.size() > 2)
            fit.slope_stderr = std::sqrt(sse / (xs.size() - 2) / sxx);
        }
      }
      res.fits.push_back(fit);
    }
  return res;
}

}  // namespace lipspace
