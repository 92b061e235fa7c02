#include "wcalc/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "wcalc/errors.hpp"

namespace wcalc {

void require_distinct_atoms(const DiscreteMeasure& mu) {
  if (mu.size() > 1 && !mu.has_distinct_atoms(kCoincidenceTolerance * mu.extent()))
    fail(ErrorCode::CoincidentAtoms, "atoms coincide; merge_atoms first");
}

double divergence_pairing(const DiscreteMeasure& mu, const TangentField& x,
                          const ScalarField& f) {
  if (x.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    s += mu.weight(i) * f.gradient(mu.atom(i)).dot(x[i]);
  return -s;
}

TangentField tangent_projection(const DiscreteMeasure& mu, const TangentField& x) {
  if (x.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  require_distinct_atoms(mu);
  return x;
}

namespace {

TangentField fd_gradient_once(const Functional& f, const DiscreteMeasure& mu, double h) {
  const int n = mu.size();
  const int d = mu.dimension();
  TangentField g;
  g.vectors.reserve(static_cast<size_t>(n));
  std::vector<Vec> atoms = mu.atoms();
  for (int i = 0; i < n; ++i) {
    Vec gi(d);
    for (int k = 0; k < d; ++k) {
      const double step = h * (1.0 + std::abs(mu.atom(i)(k)));
      const double saved = atoms[static_cast<size_t>(i)](k);
      atoms[static_cast<size_t>(i)](k) = saved + step;
      const double fp = f.eval(DiscreteMeasure(atoms, mu.weights()));
      atoms[static_cast<size_t>(i)](k) = saved - step;
      const double fm = f.eval(DiscreteMeasure(atoms, mu.weights()));
      atoms[static_cast<size_t>(i)](k) = saved;
      gi(k) = (fp - fm) / (2.0 * step);
    }
    g.vectors.push_back(gi / mu.weight(i));
  }
  return g;
}

}  // namespace

TangentField wasserstein_gradient(const Functional& f, const DiscreteMeasure& mu,
                                  double h, bool richardson) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  require_distinct_atoms(mu);
  if (f.has_gradient()) return f.gradient(mu);
  TangentField g = fd_gradient_once(f, mu, h);
  if (richardson) {
    const TangentField g2 = fd_gradient_once(f, mu, h / 2.0);
    for (int i = 0; i < g.size(); ++i) g[i] = (4.0 * g2[i] - g[i]) / 3.0;
  }
  return g;
}

double metric_derivative(const MeasureCurve& curve, double t) {
  int k = -1;
  for (int q = 1; q + 1 < curve.samples(); ++q)
    if (std::abs(curve.time(q) - t) <= 1e-12 * (1.0 + std::abs(t))) {
      k = q;
      break;
    }
  if (k < 0) fail(ErrorCode::OutOfRange, "t is not an interior grid point");
  const double dt = curve.time(k + 1) - curve.time(k - 1);
  return w2_distance(curve.measure(k + 1), curve.measure(k - 1)) / dt;
}

MeasureCurve reparametrize(const MeasureCurve& curve,
                           const std::function<double(double)>& r,
                           const std::function<double(double)>& rdot,
                           double c, double d) {
  if (!(c < d)) fail(ErrorCode::InvalidArgument, "reparametrization domain is empty");
  const double a = curve.times().front();
  const double b = curve.times().back();
  const double rc = r(c), rd = r(d);
  const double span_tol = 1e-9 * (1.0 + std::abs(b - a));
  const bool increasing = rc < rd;
  if (std::abs((increasing ? rc : rd) - a) > span_tol ||
      std::abs((increasing ? rd : rc) - b) > span_tol)
    fail(ErrorCode::NonMonotone, "r does not map [c,d] onto the curve's time range");

  // s_k = r^{-1}(t_k) by bisection; r must stay strictly monotone.
  auto invert = [&](double t) {
    double lo = c, hi = d;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool below = increasing ? (r(mid) < t) : (r(mid) > t);
      (below ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> sgrid;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  const int k_lo = increasing ? 0 : curve.samples() - 1;
  const int k_step = increasing ? 1 : -1;
  for (int q = 0, k = k_lo; q < curve.samples(); ++q, k += k_step) {
    const double t = curve.time(k);
    double s;
    if ((increasing && k == 0) || (!increasing && k == curve.samples() - 1))
      s = c;
    else if ((increasing && k == curve.samples() - 1) || (!increasing && k == 0))
      s = d;
    else
      s = invert(t);
    // rdot may vanish at the endpoints (e.g. r(s) = s^2) but not change sign.
    const double slope = rdot(s);
    if ((increasing && slope < 0.0) || (!increasing && slope > 0.0))
      fail(ErrorCode::NonMonotone, "rdot changes sign inside the domain");
    sgrid.push_back(s);
    measures.push_back(curve.measure(k));
    if (curve.has_velocities()) velocities.push_back(slope * curve.velocity(k));
  }
  if (curve.has_velocities())
    return MeasureCurve(std::move(sgrid), std::move(measures), std::move(velocities));
  return MeasureCurve(std::move(sgrid), std::move(measures));
}

}  // namespace wcalc
