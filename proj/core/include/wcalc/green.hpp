#pragma once

#include <optional>
#include <vector>

#include "wcalc/calculus.hpp"
#include "wcalc/curve.hpp"
#include "wcalc/forms.hpp"

namespace wcalc {

/// Dilation surface S(s,t) = D_s# sigma_t over [r,1] x [t_0,t_K], with the
/// tangential field v_t^s (push-forward of the base velocity, v^s(sx) = s v(x))
/// and the radial field w_t^s(x) = x/s at every grid node.
class AnnulusSurface {
 public:
  AnnulusSurface(MeasureCurve base, double inner_radius, int radial_intervals);

  const MeasureCurve& base() const { return base_; }
  double inner_radius() const { return inner_radius_; }
  int radial_samples() const { return static_cast<int>(radii_.size()); }
  int radial_intervals() const { return radial_samples() - 1; }
  int time_samples() const { return base_.samples(); }
  int time_intervals() const { return base_.intervals(); }

  double radius(int a) const { return radii_[static_cast<size_t>(a)]; }
  double time(int k) const { return base_.time(k); }

  const DiscreteMeasure& measure(int a, int k) const { return measures_[index(a, k)]; }
  const TangentField& tangential(int a, int k) const { return tangential_[index(a, k)]; }
  const TangentField& radial(int a, int k) const { return radial_[index(a, k)]; }

 private:
  size_t index(int a, int k) const {
    return static_cast<size_t>(a) * static_cast<size_t>(time_samples()) + static_cast<size_t>(k);
  }

  MeasureCurve base_;
  double inner_radius_;
  std::vector<double> radii_;
  std::vector<DiscreteMeasure> measures_;
  std::vector<TangentField> tangential_;
  std::vector<TangentField> radial_;
};

AnnulusSurface make_annulus(const MeasureCurve& curve, double r, int radial_intervals);

/// 2D trapezoid quadrature of (s,t) -> d form_{S(s,t)}(v_t^s, w_t^s).
double surface_integral_d(const PseudoOneForm& form, const AnnulusSurface& surface);

/// The four boundary edges with the orientations of the annulus identity:
///   int_r^1 [form(w)]_{t=T} - [form(w)]_{t=0} ds
/// - int_0^T [form(v)]_{s=1} - [form(v)]_{s=r} dt.
double boundary_integral(const PseudoOneForm& form, const AnnulusSurface& surface);

/// |surface_integral_d - boundary_integral|.
double green_residual(const PseudoOneForm& form, const AnnulusSurface& surface);

struct RefinementRow {
  int time_intervals;
  int radial_intervals;
  double surface;
  double boundary;
  double residual;
};

struct RefinementTable {
  std::vector<RefinementRow> rows;       // finest first
  std::optional<double> observed_order;  // empty when residuals sit at noise
  double noise_floor;
  bool at_noise() const { return !observed_order.has_value(); }
};

/// Residuals at the given grid and at stride-2 and stride-4 coarsenings,
/// with the observed order log2(residual ratio) of the two coarsest levels.
RefinementTable green_refinement(const PseudoOneForm& form, const MeasureCurve& curve,
                                 double r, int radial_intervals);

struct LoopEdge {
  double radius;
  double value;  // l(r) = int_0^T form_{S(r,t)}(v_t^r) dt
  double bound;  // r * T * c * max speed, c = sup ||A|| on the inner edge
};

struct LoopReport {
  double integral;  // int_sigma form = l(1)
  std::vector<LoopEdge> edges;
  double closedness_defect;  // worst sampled |d form| during verification
  double max_speed;
};

/// Loop integral of a closed form around a closed curve, with the inner-edge
/// values l(r) for each requested radius. Closedness is sampled at random
/// triples along the path unless asserted by the caller.
LoopReport loop_integral(const PseudoOneForm& form, const MeasureCurve& curve,
                         const std::vector<double>& r_sequence,
                         bool assume_closed = false, double w2_tol = 1e-8);

struct PotentialStage {
  double epsilon;
  double value;  // integral over [epsilon, 1]
};

struct PotentialReport {
  double value;  // extrapolated to epsilon -> 0
  std::vector<PotentialStage> stages;
  double closedness_defect;
};

/// Potential of a closed form: F(mu) = integral along the radial curve
/// t -> D_t# mu. The dilation collapses every atom at t = 0, so the
/// quadrature runs on [eps,1] for a geometric ladder of eps and the values
/// are extrapolated polynomially to eps = 0.
PotentialReport reconstruct_potential_detailed(const PseudoOneForm& form,
                                               const DiscreteMeasure& mu, int n_steps,
                                               bool assume_closed = false);
double reconstruct_potential(const PseudoOneForm& form, const DiscreteMeasure& mu,
                             int n_steps, bool assume_closed = false);

/// The reconstructed potential as a Functional (for gradient checks).
Functional reconstructed_potential(const PseudoOneForm& form, int n_steps,
                                   bool assume_closed = false);

}  // namespace wcalc
