#pragma once

#include <functional>
#include <vector>

#include "wcalc/fields.hpp"
#include "wcalc/types.hpp"

namespace wcalc {

/// Finitely-atomic probability measure on R^D: atoms with strictly positive
/// weights summing to 1. Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Vec> atoms, std::vector<double> weights);

  int size() const { return static_cast<int>(atoms_.size()); }
  int dimension() const { return dimension_; }

  const Vec& atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
  double weight(int i) const { return weights_[static_cast<size_t>(i)]; }
  const std::vector<Vec>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  /// sum_i a_i |x_i|^2; also W_2^2(mu, delta_0).
  double second_moment() const;

  /// 1 + max_i |x_i|, the scale used by relative tolerances.
  double extent() const;

  /// Smallest pairwise atom distance (infinity for a single atom).
  double min_atom_gap() const;

  bool has_distinct_atoms(double tol) const { return min_atom_gap() > tol; }

 private:
  std::vector<Vec> atoms_;
  std::vector<double> weights_;
  int dimension_;
};

/// Weight sums farther than this from 1 are rejected instead of renormalized.
inline constexpr double kWeightSumTolerance = 1e-9;

DiscreteMeasure make_measure(std::vector<Vec> atoms, std::vector<double> weights);
DiscreteMeasure dirac(const Vec& x);

DiscreteMeasure pushforward(const std::function<Vec(const Vec&)>& phi,
                            const DiscreteMeasure& mu);
DiscreteMeasure pushforward(const AnalyticField& phi, const DiscreteMeasure& mu);

/// integral of f against mu: sum_i a_i f(x_i).
double linear_functional(const ScalarField& f, const DiscreteMeasure& mu);

/// Combines atoms within tol of each other at their weight-barycenter until
/// the result is pairwise more than tol apart.
DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double tol);

/// Mixture with weights lambda and (1 - lambda), atoms concatenated.
DiscreteMeasure mixture(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double lambda);

/// Samples a vector field at the atoms of mu.
TangentField sample(const AnalyticField& field, const DiscreteMeasure& mu);
TangentField sample_gradient(const ScalarField& f, const DiscreteMeasure& mu);

/// L^2(mu) inner product sum_i a_i <X_i, Y_i> and the induced norm.
double field_inner(const DiscreteMeasure& mu, const TangentField& x,
                   const TangentField& y);
double field_norm(const DiscreteMeasure& mu, const TangentField& x);

}  // namespace wcalc
