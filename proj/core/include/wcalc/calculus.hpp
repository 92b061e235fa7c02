#pragma once

#include <functional>

#include "wcalc/curve.hpp"
#include "wcalc/measure.hpp"
#include "wcalc/transport.hpp"

namespace wcalc {

/// Real-valued function of a measure, optionally with an analytic gradient
/// (one vector per atom, in the 1/a_i normalization of field_inner pairings).
struct Functional {
  std::function<double(const DiscreteMeasure&)> eval;
  std::function<TangentField(const DiscreteMeasure&)> gradient;  // may be empty

  bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// Atoms closer than this (times measure extent) count as coincident for the
/// distinct-atom guards below.
inline constexpr double kCoincidenceTolerance = 1e-12;

void require_distinct_atoms(const DiscreteMeasure& mu);

/// Weak divergence pairing <div_mu(X), f> = -sum_i a_i <grad f(x_i), X_i>.
double divergence_pairing(const DiscreteMeasure& mu, const TangentField& x,
                          const ScalarField& f);

/// Identity on the distinct-atom stratum; errors on coincident atoms rather
/// than projecting, since there the kernel of the divergence is trivial.
TangentField tangent_projection(const DiscreteMeasure& mu, const TangentField& x);

/// Per-atom central-difference gradient with the 1/a_i weight factor, so the
/// first-order expansion F((Id + tX)_# mu) = F(mu) + t * <grad F, X>_mu + o(t)
/// holds in the field_inner pairing. Uses the analytic gradient if present.
/// The step for atom i and coordinate k is h * (1 + |x_i(k)|); with
/// richardson set, results at h and h/2 are combined to fourth order.
TangentField wasserstein_gradient(const Functional& f, const DiscreteMeasure& mu,
                                  double h = 1e-5, bool richardson = false);

/// Symmetric difference quotient W_2(sigma_{t+h}, sigma_{t-h}) / 2h at an
/// interior grid point.
double metric_derivative(const MeasureCurve& curve, double t);

/// sigma_bar(s) = sigma(r(s)) on the grid s_k = r^{-1}(t_k), velocities
/// scaled by rdot. r must be strictly monotone from [c,d] onto the curve's
/// time range (decreasing r reverses orientation).
MeasureCurve reparametrize(const MeasureCurve& curve,
                           const std::function<double(double)>& r,
                           const std::function<double(double)>& rdot,
                           double c, double d);

}  // namespace wcalc
