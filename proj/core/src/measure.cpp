#include "wcalc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wcalc/errors.hpp"

namespace wcalc {

DiscreteMeasure::DiscreteMeasure(std::vector<Vec> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) fail(ErrorCode::LengthMismatch, "measure needs at least one atom");
  if (atoms_.size() != weights_.size())
    fail(ErrorCode::LengthMismatch, "atom and weight counts differ");
  dimension_ = static_cast<int>(atoms_.front().size());
  if (dimension_ < 1) fail(ErrorCode::DimensionMismatch, "atoms must live in R^D, D >= 1");
  for (const Vec& x : atoms_) {
    if (static_cast<int>(x.size()) != dimension_)
      fail(ErrorCode::DimensionMismatch, "atoms have mixed dimensions");
    if (!x.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite atom coordinate");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) fail(ErrorCode::NonpositiveWeight, "weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
      fail(ErrorCode::WeightSumOutOfRange,
           "weight sum " + std::to_string(sum) + " not within 1e-9 of 1");
    for (double& w : weights_) w /= sum;
  }
}

double DiscreteMeasure::second_moment() const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += weight(i) * atom(i).squaredNorm();
  return s;
}

double DiscreteMeasure::extent() const {
  double m = 0.0;
  for (const Vec& x : atoms_) m = std::max(m, x.norm());
  return 1.0 + m;
}

double DiscreteMeasure::min_atom_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      gap = std::min(gap, (atom(i) - atom(j)).norm());
  return gap;
}

DiscreteMeasure make_measure(std::vector<Vec> atoms, std::vector<double> weights) {
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure dirac(const Vec& x) { return DiscreteMeasure({x}, {1.0}); }

DiscreteMeasure pushforward(const std::function<Vec(const Vec&)>& phi,
                            const DiscreteMeasure& mu) {
  std::vector<Vec> atoms;
  atoms.reserve(static_cast<size_t>(mu.size()));
  for (int i = 0; i < mu.size(); ++i) atoms.push_back(phi(mu.atom(i)));
  // Coincident images are kept as-is; callers merge explicitly.
  return DiscreteMeasure(std::move(atoms), mu.weights());
}

DiscreteMeasure pushforward(const AnalyticField& phi, const DiscreteMeasure& mu) {
  return pushforward([&phi](const Vec& x) { return phi(x); }, mu);
}

double linear_functional(const ScalarField& f, const DiscreteMeasure& mu) {
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) s += mu.weight(i) * f(mu.atom(i));
  return s;
}

DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double tol) {
  if (tol < 0.0) fail(ErrorCode::InvalidArgument, "merge tolerance must be >= 0");
  std::vector<Vec> atoms = mu.atoms();
  std::vector<double> weights = mu.weights();
  bool changed = true;
  while (changed) {
    changed = false;
    const int n = static_cast<int>(atoms.size());
    for (int i = 0; i < n && !changed; ++i) {
      for (int j = i + 1; j < n && !changed; ++j) {
        if ((atoms[static_cast<size_t>(i)] - atoms[static_cast<size_t>(j)]).norm() <= tol) {
          const double wi = weights[static_cast<size_t>(i)];
          const double wj = weights[static_cast<size_t>(j)];
          atoms[static_cast<size_t>(i)] =
              (wi * atoms[static_cast<size_t>(i)] + wj * atoms[static_cast<size_t>(j)]) / (wi + wj);
          weights[static_cast<size_t>(i)] = wi + wj;
          atoms.erase(atoms.begin() + j);
          weights.erase(weights.begin() + j);
          changed = true;
        }
      }
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure mixture(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double lambda) {
  if (mu.dimension() != nu.dimension())
    fail(ErrorCode::DimensionMismatch, "mixture of measures in different dimensions");
  if (!(lambda > 0.0 && lambda < 1.0))
    fail(ErrorCode::InvalidArgument, "mixture weight must lie in (0,1)");
  std::vector<Vec> atoms = mu.atoms();
  atoms.insert(atoms.end(), nu.atoms().begin(), nu.atoms().end());
  std::vector<double> weights;
  weights.reserve(atoms.size());
  for (double w : mu.weights()) weights.push_back(lambda * w);
  for (double w : nu.weights()) weights.push_back((1.0 - lambda) * w);
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

TangentField sample(const AnalyticField& field, const DiscreteMeasure& mu) {
  TangentField f;
  f.vectors.reserve(static_cast<size_t>(mu.size()));
  for (int i = 0; i < mu.size(); ++i) f.vectors.push_back(field(mu.atom(i)));
  return f;
}

TangentField sample_gradient(const ScalarField& f, const DiscreteMeasure& mu) {
  TangentField g;
  g.vectors.reserve(static_cast<size_t>(mu.size()));
  for (int i = 0; i < mu.size(); ++i) g.vectors.push_back(f.gradient(mu.atom(i)));
  return g;
}

double field_inner(const DiscreteMeasure& mu, const TangentField& x,
                   const TangentField& y) {
  if (x.size() != mu.size() || y.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) s += mu.weight(i) * x[i].dot(y[i]);
  return s;
}

double field_norm(const DiscreteMeasure& mu, const TangentField& x) {
  return std::sqrt(std::max(field_inner(mu, x, x), 0.0));
}

}  // namespace wcalc
