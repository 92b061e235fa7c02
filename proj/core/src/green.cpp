#include "wcalc/green.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wcalc/errors.hpp"
#include "wcalc/parallel.hpp"
#include "wcalc/transport.hpp"

namespace wcalc {

AnnulusSurface::AnnulusSurface(MeasureCurve base, double inner_radius, int radial_intervals)
    : base_(std::move(base)), inner_radius_(inner_radius) {
  if (!(inner_radius > 0.0 && inner_radius < 1.0))
    fail(ErrorCode::BadRadius, "inner radius must lie in (0,1)");
  if (radial_intervals < 1)
    fail(ErrorCode::InvalidArgument, "need at least one radial interval");
  if (!base_.has_velocities())
    fail(ErrorCode::MissingVelocities, "annulus needs base-curve velocities");

  radii_.resize(static_cast<size_t>(radial_intervals) + 1);
  for (int a = 0; a <= radial_intervals; ++a)
    radii_[static_cast<size_t>(a)] =
        inner_radius + (1.0 - inner_radius) * a / radial_intervals;
  radii_.back() = 1.0;

  const int nt = base_.samples();
  measures_.reserve(radii_.size() * static_cast<size_t>(nt));
  tangential_.reserve(radii_.size() * static_cast<size_t>(nt));
  radial_.reserve(radii_.size() * static_cast<size_t>(nt));
  for (double s : radii_) {
    for (int k = 0; k < nt; ++k) {
      const DiscreteMeasure& sigma = base_.measure(k);
      std::vector<Vec> atoms;
      atoms.reserve(static_cast<size_t>(sigma.size()));
      for (int i = 0; i < sigma.size(); ++i) atoms.push_back(s * sigma.atom(i));
      measures_.emplace_back(std::move(atoms), sigma.weights());
      tangential_.push_back(s * base_.velocity(k));
      // w(x) = x/s evaluated at the dilated atom s*x is the base atom itself.
      TangentField w;
      w.vectors.reserve(static_cast<size_t>(sigma.size()));
      for (int i = 0; i < sigma.size(); ++i) w.vectors.push_back(sigma.atom(i));
      radial_.push_back(std::move(w));
    }
  }
}

AnnulusSurface make_annulus(const MeasureCurve& curve, double r, int radial_intervals) {
  return AnnulusSurface(curve, r, radial_intervals);
}

namespace {

double trapezoid_weight(const std::vector<double>& grid, int k) {
  const int last = static_cast<int>(grid.size()) - 1;
  if (k == 0) return 0.5 * (grid[1] - grid[0]);
  if (k == last)
    return 0.5 * (grid[static_cast<size_t>(last)] - grid[static_cast<size_t>(last) - 1]);
  return 0.5 * (grid[static_cast<size_t>(k) + 1] - grid[static_cast<size_t>(k) - 1]);
}

}  // namespace

double surface_integral_d(const PseudoOneForm& form, const AnnulusSurface& surface) {
  const int ns = surface.radial_samples();
  const int nt = surface.time_samples();
  std::vector<double> sgrid(static_cast<size_t>(ns));
  for (int a = 0; a < ns; ++a) sgrid[static_cast<size_t>(a)] = surface.radius(a);

  std::vector<double> terms(static_cast<size_t>(ns) * static_cast<size_t>(nt));
  parallel_for(ns, [&](int a) {
    const double ws = trapezoid_weight(sgrid, a);
    for (int k = 0; k < nt; ++k) {
      const double wt = trapezoid_weight(surface.base().times(), k);
      terms[static_cast<size_t>(a) * static_cast<size_t>(nt) + static_cast<size_t>(k)] =
          ws * wt *
          exterior_derivative(form, surface.measure(a, k), surface.tangential(a, k),
                              surface.radial(a, k));
    }
  });
  return pairwise_sum(terms);
}

double boundary_integral(const PseudoOneForm& form, const AnnulusSurface& surface) {
  const int ns = surface.radial_samples();
  const int nt = surface.time_samples();
  std::vector<double> sgrid(static_cast<size_t>(ns));
  for (int a = 0; a < ns; ++a) sgrid[static_cast<size_t>(a)] = surface.radius(a);

  // Radial edges at t = T and t = 0, integrated against w over s.
  std::vector<double> radial_terms(static_cast<size_t>(ns));
  parallel_for(ns, [&](int a) {
    const double ws = trapezoid_weight(sgrid, a);
    const double at_end = evaluate_form(form, surface.measure(a, nt - 1), surface.radial(a, nt - 1));
    const double at_start = evaluate_form(form, surface.measure(a, 0), surface.radial(a, 0));
    radial_terms[static_cast<size_t>(a)] = ws * (at_end - at_start);
  });

  // Time edges at s = 1 and s = r, integrated against v over t.
  std::vector<double> time_terms(static_cast<size_t>(nt));
  parallel_for(nt, [&](int k) {
    const double wt = trapezoid_weight(surface.base().times(), k);
    const double outer = evaluate_form(form, surface.measure(ns - 1, k), surface.tangential(ns - 1, k));
    const double inner = evaluate_form(form, surface.measure(0, k), surface.tangential(0, k));
    time_terms[static_cast<size_t>(k)] = wt * (outer - inner);
  });

  return pairwise_sum(radial_terms) - pairwise_sum(time_terms);
}

double green_residual(const PseudoOneForm& form, const AnnulusSurface& surface) {
  return std::abs(surface_integral_d(form, surface) - boundary_integral(form, surface));
}

RefinementTable green_refinement(const PseudoOneForm& form, const MeasureCurve& curve,
                                 double r, int radial_intervals) {
  if (curve.intervals() % 4 != 0 || radial_intervals % 4 != 0)
    fail(ErrorCode::InvalidArgument, "refinement needs intervals divisible by 4");
  RefinementTable table;
  double scale = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int stride = 1 << level;
    const MeasureCurve coarse = stride == 1 ? curve : subsampled(curve, stride);
    const AnnulusSurface surface(coarse, r, radial_intervals / stride);
    RefinementRow row{};
    row.time_intervals = coarse.intervals();
    row.radial_intervals = radial_intervals / stride;
    row.surface = surface_integral_d(form, surface);
    row.boundary = boundary_integral(form, surface);
    row.residual = std::abs(row.surface - row.boundary);
    scale = std::max({scale, std::abs(row.surface), std::abs(row.boundary)});
    table.rows.push_back(row);
  }
  table.noise_floor = 1e-11 * (1.0 + scale);
  // Observed order from the coarsest consecutive pair still above noise.
  for (size_t p = table.rows.size() - 1; p >= 1; --p) {
    const double fine = table.rows[p - 1].residual;
    const double coarse = table.rows[p].residual;
    if (coarse > table.noise_floor && fine > table.noise_floor) {
      table.observed_order = std::log2(coarse / fine);
      break;
    }
  }
  return table;
}

namespace {

double form_scale_along(const PseudoOneForm& form, const MeasureCurve& curve) {
  double m = 0.0;
  for (int k = 0; k < curve.samples(); ++k)
    m = std::max(m, field_norm(curve.measure(k), form.field_at(curve.measure(k))));
  return m;
}

// Worst |d form(X, Y)| over random unit tangent pairs at measures sampled
// along the curve. Fixed seed keeps results reproducible.
double sample_closedness_defect(const PseudoOneForm& form, const MeasureCurve& curve,
                                int samples) {
  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int k = static_cast<int>(rng() % static_cast<unsigned>(curve.samples()));
    const DiscreteMeasure& mu = curve.measure(k);
    auto random_unit = [&]() {
      TangentField f;
      f.vectors.reserve(static_cast<size_t>(mu.size()));
      for (int i = 0; i < mu.size(); ++i) {
        Vec v(mu.dimension());
        for (int q = 0; q < mu.dimension(); ++q) v(q) = gauss(rng);
        f.vectors.push_back(v);
      }
      const double norm = field_norm(mu, f);
      return norm > 0.0 ? (1.0 / norm) * f : f;
    };
    worst = std::max(worst, std::abs(exterior_derivative(form, mu, random_unit(), random_unit())));
  }
  return worst;
}

// Radial curve t -> D_t# mu on [eps, 1]; trajectories t*x_i have constant
// velocity x_i.
MeasureCurve radial_curve(const DiscreteMeasure& mu, double eps, int n_steps) {
  std::vector<double> times(static_cast<size_t>(n_steps) + 1);
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  TangentField v;
  v.vectors = mu.atoms();
  for (int q = 0; q <= n_steps; ++q) {
    const double t = eps + (1.0 - eps) * q / n_steps;
    times[static_cast<size_t>(q)] = t;
    std::vector<Vec> atoms;
    atoms.reserve(static_cast<size_t>(mu.size()));
    for (int i = 0; i < mu.size(); ++i) atoms.push_back(t * mu.atom(i));
    measures.emplace_back(std::move(atoms), mu.weights());
    velocities.push_back(v);
  }
  return MeasureCurve(std::move(times), std::move(measures), std::move(velocities));
}

}  // namespace

LoopReport loop_integral(const PseudoOneForm& form, const MeasureCurve& curve,
                         const std::vector<double>& r_sequence, bool assume_closed,
                         double w2_tol) {
  if (!curve.has_velocities())
    fail(ErrorCode::MissingVelocities, "loop integral needs curve velocities");
  if (w2_distance(curve.front(), curve.back()) >= w2_tol)
    fail(ErrorCode::NotClosedCurve, "curve endpoints differ in W_2");

  LoopReport report{};
  report.max_speed = curve.max_speed();
  report.closedness_defect = assume_closed ? 0.0 : sample_closedness_defect(form, curve, 32);
  if (!assume_closed) {
    const double threshold = 1e-8 * (1.0 + form_scale_along(form, curve));
    if (report.closedness_defect > threshold)
      fail(ErrorCode::NotClosedForm, "sampled exterior derivative is not zero");
  }

  report.integral = line_integral(form, curve);
  const double duration = curve.duration();
  for (double r : r_sequence) {
    if (!(r > 0.0 && r <= 1.0)) fail(ErrorCode::BadRadius, "loop radius must lie in (0,1]");
    // Inner edge l(r): dilate the curve and integrate against the dilated velocity.
    std::vector<double> values(static_cast<size_t>(curve.samples()));
    double edge_field_norm = 0.0;
    for (int k = 0; k < curve.samples(); ++k) {
      const DiscreteMeasure& sigma = curve.measure(k);
      std::vector<Vec> atoms;
      atoms.reserve(static_cast<size_t>(sigma.size()));
      for (int i = 0; i < sigma.size(); ++i) atoms.push_back(r * sigma.atom(i));
      const DiscreteMeasure dilated(std::move(atoms), sigma.weights());
      values[static_cast<size_t>(k)] =
          evaluate_form(form, dilated, r * curve.velocity(k));
      edge_field_norm = std::max(edge_field_norm, field_norm(dilated, form.field_at(dilated)));
    }
    std::vector<double> terms(static_cast<size_t>(curve.intervals()));
    for (int k = 0; k < curve.intervals(); ++k)
      terms[static_cast<size_t>(k)] =
          0.5 * (curve.time(k + 1) - curve.time(k)) *
          (values[static_cast<size_t>(k)] + values[static_cast<size_t>(k) + 1]);
    LoopEdge edge{};
    edge.radius = r;
    edge.value = pairwise_sum(terms);
    edge.bound = r * duration * edge_field_norm * report.max_speed;
    report.edges.push_back(edge);
  }
  return report;
}

PotentialReport reconstruct_potential_detailed(const PseudoOneForm& form,
                                               const DiscreteMeasure& mu, int n_steps,
                                               bool assume_closed) {
  if (n_steps < 2) fail(ErrorCode::InvalidArgument, "need at least two quadrature steps");
  require_distinct_atoms(mu);

  PotentialReport report{};
  // The dilation ladder: eps halving from 0.2 down to 1/160.
  std::vector<double> epsilons;
  for (int k = 0; k < 6; ++k) epsilons.push_back(0.2 / (1 << k));

  if (!assume_closed) {
    const MeasureCurve probe = radial_curve(mu, epsilons.front(), std::min(n_steps, 64));
    report.closedness_defect = sample_closedness_defect(form, probe, 32);
    const double threshold = 1e-8 * (1.0 + form_scale_along(form, probe));
    if (report.closedness_defect > threshold)
      fail(ErrorCode::NotClosedForm, "sampled exterior derivative is not zero");
  }

  for (double eps : epsilons) {
    PotentialStage stage{};
    stage.epsilon = eps;
    stage.value = line_integral(form, radial_curve(mu, eps, n_steps));
    report.stages.push_back(stage);
  }

  // Least-squares polynomial in eps; the intercept is the eps -> 0 limit.
  const int rows = static_cast<int>(report.stages.size());
  const int degree = std::min(4, rows - 1);
  Mat vandermonde(rows, degree + 1);
  Vec rhs(rows);
  for (int q = 0; q < rows; ++q) {
    double p = 1.0;
    for (int c = 0; c <= degree; ++c) {
      vandermonde(q, c) = p;
      p *= report.stages[static_cast<size_t>(q)].epsilon;
    }
    rhs(q) = report.stages[static_cast<size_t>(q)].value;
  }
  const Vec coeffs = vandermonde.colPivHouseholderQr().solve(rhs);
  report.value = coeffs(0);
  return report;
}

double reconstruct_potential(const PseudoOneForm& form, const DiscreteMeasure& mu,
                             int n_steps, bool assume_closed) {
  return reconstruct_potential_detailed(form, mu, n_steps, assume_closed).value;
}

Functional reconstructed_potential(const PseudoOneForm& form, int n_steps,
                                   bool assume_closed) {
  Functional f;
  f.eval = [form, n_steps, assume_closed](const DiscreteMeasure& mu) {
    return reconstruct_potential(form, mu, n_steps, assume_closed);
  };
  return f;
}

}  // namespace wcalc
