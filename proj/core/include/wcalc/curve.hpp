#pragma once

#include <optional>
#include <vector>

#include "wcalc/measure.hpp"

namespace wcalc {

/// Time-sampled curve of discrete measures in particle-trajectory form:
/// constant atom count and weights, atoms indexed consistently across time.
/// Velocities, when present, are one tangent field per sample.
class MeasureCurve {
 public:
  MeasureCurve(std::vector<double> times, std::vector<DiscreteMeasure> measures);
  MeasureCurve(std::vector<double> times, std::vector<DiscreteMeasure> measures,
               std::vector<TangentField> velocities);

  int samples() const { return static_cast<int>(times_.size()); }
  int intervals() const { return samples() - 1; }
  int atom_count() const { return measures_.front().size(); }
  int dimension() const { return measures_.front().dimension(); }

  const std::vector<double>& times() const { return times_; }
  double time(int k) const { return times_[static_cast<size_t>(k)]; }
  double duration() const { return times_.back() - times_.front(); }

  const DiscreteMeasure& measure(int k) const { return measures_[static_cast<size_t>(k)]; }
  const DiscreteMeasure& front() const { return measures_.front(); }
  const DiscreteMeasure& back() const { return measures_.back(); }

  bool has_velocities() const { return !velocities_.empty(); }
  const TangentField& velocity(int k) const;

  /// sup over samples of ||v_t||_{sigma_t}; MissingVelocities without them.
  double max_speed() const;

  /// 1 + largest atom norm over the whole curve.
  double extent() const;

 private:
  void validate() const;

  std::vector<double> times_;
  std::vector<DiscreteMeasure> measures_;
  std::vector<TangentField> velocities_;
};

/// Velocities from trajectories: central differences at interior samples,
/// one-sided at the ends (O(dt^2) / O(dt)).
MeasureCurve with_velocities_from_trajectories(const MeasureCurve& curve);

/// Time reversal t -> T - t (velocities negated).
MeasureCurve reversed(const MeasureCurve& curve);

/// Every stride-th sample; intervals() must be divisible by stride.
MeasureCurve subsampled(const MeasureCurve& curve, int stride);

/// Largest gap between the stored velocities and the central difference of
/// the trajectories over interior samples; O(dt^2) for consistent curves.
double velocity_defect(const MeasureCurve& curve);

/// Largest defect of the discrete-weak continuity equation
///   d/dt int f dsigma_t = int <grad f, v_t> dsigma_t
/// over interior samples and the given test functions.
double continuity_residual(const MeasureCurve& curve,
                           const std::vector<ScalarField>& tests);

}  // namespace wcalc
