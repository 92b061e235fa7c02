#include "wcalc/curve.hpp"

#include <algorithm>
#include <cmath>

#include "wcalc/errors.hpp"

namespace wcalc {

MeasureCurve::MeasureCurve(std::vector<double> times, std::vector<DiscreteMeasure> measures)
    : times_(std::move(times)), measures_(std::move(measures)) {
  validate();
}

MeasureCurve::MeasureCurve(std::vector<double> times, std::vector<DiscreteMeasure> measures,
                           std::vector<TangentField> velocities)
    : times_(std::move(times)),
      measures_(std::move(measures)),
      velocities_(std::move(velocities)) {
  validate();
  if (velocities_.size() != times_.size())
    fail(ErrorCode::LengthMismatch, "one velocity field per time sample required");
  for (size_t k = 0; k < velocities_.size(); ++k)
    if (velocities_[k].size() != measures_[k].size())
      fail(ErrorCode::LengthMismatch, "velocity field not aligned with atoms");
}

void MeasureCurve::validate() const {
  if (times_.size() < 2) fail(ErrorCode::LengthMismatch, "curve needs at least two samples");
  if (times_.size() != measures_.size())
    fail(ErrorCode::LengthMismatch, "one measure per time sample required");
  for (size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1]))
      fail(ErrorCode::NonMonotone, "curve times must be strictly increasing");
  const int n = measures_.front().size();
  const int d = measures_.front().dimension();
  for (const DiscreteMeasure& m : measures_) {
    if (m.size() != n) fail(ErrorCode::LengthMismatch, "atom count changes along curve");
    if (m.dimension() != d) fail(ErrorCode::DimensionMismatch, "dimension changes along curve");
    for (int i = 0; i < n; ++i)
      if (std::abs(m.weight(i) - measures_.front().weight(i)) > 1e-12)
        fail(ErrorCode::InvalidArgument, "weights must be constant along the curve");
  }
}

const TangentField& MeasureCurve::velocity(int k) const {
  if (!has_velocities()) fail(ErrorCode::MissingVelocities, "curve carries no velocities");
  return velocities_[static_cast<size_t>(k)];
}

double MeasureCurve::max_speed() const {
  if (!has_velocities()) fail(ErrorCode::MissingVelocities, "curve carries no velocities");
  double m = 0.0;
  for (int k = 0; k < samples(); ++k)
    m = std::max(m, field_norm(measure(k), velocity(k)));
  return m;
}

double MeasureCurve::extent() const {
  double m = 0.0;
  for (const DiscreteMeasure& mu : measures_)
    for (const Vec& x : mu.atoms()) m = std::max(m, x.norm());
  return 1.0 + m;
}

MeasureCurve with_velocities_from_trajectories(const MeasureCurve& curve) {
  const int k_max = curve.samples() - 1;
  const int n = curve.atom_count();
  std::vector<TangentField> velocities;
  velocities.reserve(static_cast<size_t>(curve.samples()));
  for (int k = 0; k <= k_max; ++k) {
    const int lo = std::max(k - 1, 0);
    const int hi = std::min(k + 1, k_max);
    const double dt = curve.time(hi) - curve.time(lo);
    TangentField v;
    v.vectors.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      v.vectors.push_back((curve.measure(hi).atom(i) - curve.measure(lo).atom(i)) / dt);
    velocities.push_back(std::move(v));
  }
  std::vector<DiscreteMeasure> measures;
  for (int k = 0; k <= k_max; ++k) measures.push_back(curve.measure(k));
  return MeasureCurve(curve.times(), std::move(measures), std::move(velocities));
}

MeasureCurve reversed(const MeasureCurve& curve) {
  const double t0 = curve.times().front();
  const double t1 = curve.times().back();
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (int k = curve.samples() - 1; k >= 0; --k) {
    times.push_back(t0 + (t1 - curve.time(k)));
    measures.push_back(curve.measure(k));
    if (curve.has_velocities()) velocities.push_back(-1.0 * curve.velocity(k));
  }
  if (curve.has_velocities())
    return MeasureCurve(std::move(times), std::move(measures), std::move(velocities));
  return MeasureCurve(std::move(times), std::move(measures));
}

MeasureCurve subsampled(const MeasureCurve& curve, int stride) {
  if (stride < 1 || curve.intervals() % stride != 0)
    fail(ErrorCode::InvalidArgument, "stride must divide the interval count");
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (int k = 0; k < curve.samples(); k += stride) {
    times.push_back(curve.time(k));
    measures.push_back(curve.measure(k));
    if (curve.has_velocities()) velocities.push_back(curve.velocity(k));
  }
  if (curve.has_velocities())
    return MeasureCurve(std::move(times), std::move(measures), std::move(velocities));
  return MeasureCurve(std::move(times), std::move(measures));
}

double velocity_defect(const MeasureCurve& curve) {
  if (!curve.has_velocities())
    fail(ErrorCode::MissingVelocities, "curve carries no velocities");
  double worst = 0.0;
  for (int k = 1; k + 1 < curve.samples(); ++k) {
    const double dt = curve.time(k + 1) - curve.time(k - 1);
    for (int i = 0; i < curve.atom_count(); ++i) {
      const Vec quotient = (curve.measure(k + 1).atom(i) - curve.measure(k - 1).atom(i)) / dt;
      worst = std::max(worst, (curve.velocity(k)[i] - quotient).norm());
    }
  }
  return worst;
}

double continuity_residual(const MeasureCurve& curve,
                           const std::vector<ScalarField>& tests) {
  if (!curve.has_velocities())
    fail(ErrorCode::MissingVelocities, "continuity check needs velocities");
  double worst = 0.0;
  for (const ScalarField& f : tests) {
    for (int k = 1; k + 1 < curve.samples(); ++k) {
      const double dt = curve.time(k + 1) - curve.time(k - 1);
      const double dmean =
          (linear_functional(f, curve.measure(k + 1)) -
           linear_functional(f, curve.measure(k - 1))) / dt;
      const DiscreteMeasure& mu = curve.measure(k);
      const TangentField& v = curve.velocity(k);
      double pairing = 0.0;
      for (int i = 0; i < mu.size(); ++i)
        pairing += mu.weight(i) * f.gradient(mu.atom(i)).dot(v[i]);
      worst = std::max(worst, std::abs(dmean - pairing));
    }
  }
  return worst;
}

}  // namespace wcalc
