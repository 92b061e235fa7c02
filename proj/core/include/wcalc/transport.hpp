#pragma once

#include <vector>

#include "wcalc/curve.hpp"
#include "wcalc/measure.hpp"

namespace wcalc {

/// Coupling between two discrete measures with squared-Euclidean cost.
/// Construction re-checks marginals and the stored cost.
class TransportPlan {
 public:
  TransportPlan(DiscreteMeasure source, DiscreteMeasure target, Mat gamma);

  const DiscreteMeasure& source() const { return source_; }
  const DiscreteMeasure& target() const { return target_; }
  const Mat& gamma() const { return gamma_; }
  double cost() const { return cost_; }

  /// Largest row/column marginal defect.
  double marginal_defect() const;

  /// No 2-cycle swap on the support decreases cost (slack >= -tol).
  /// Brute force; meant for n*m <= 64.
  bool support_is_cyclically_monotone(double tol = 1e-9) const;

 private:
  DiscreteMeasure source_;
  DiscreteMeasure target_;
  Mat gamma_;
  double cost_;
};

struct DualPotentials {
  std::vector<double> u;  // at source atoms
  std::vector<double> v;  // at target atoms
  double value;           // sum_i a_i u_i + sum_j b_j v_j
};

/// Exact minimizer of sum gamma_ij |x_i - y_j|^2 over the transportation
/// polytope. Optimality is certified by dual feasibility; identical inputs
/// yield the same vertex.
TransportPlan optimal_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

double w2_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Feasible potentials (u_i + v_j <= |x_i - y_j|^2) achieving the primal value.
DualPotentials dual_potentials(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Displacement field v = gammabar - Id on the source atoms:
/// v_i = (sum_j gamma_ij y_j) / a_i - x_i.
TangentField barycentric_projection(const TransportPlan& plan);

/// Constant-speed geodesic ((1-t) pi^1 + t pi^2)_# gamma sampled on tgrid;
/// one atom per nonzero plan entry, carrying its constant velocity y_j - x_i.
MeasureCurve geodesic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const std::vector<double>& tgrid);

}  // namespace wcalc
