#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wcalc/calculus.hpp"
#include "wcalc/curve.hpp"
#include "wcalc/measure.hpp"

namespace wcalc {

/// Pseudo 1-form: per measure, a representing field A_mu sampled at the atoms
/// plus the D x D regularity matrices B_mu per atom. User-defined forms must
/// supply matrix_at themselves; regularity is a hypothesis, checked by
/// validate_regularity, not derived.
struct PseudoOneForm {
  std::function<TangentField(const DiscreteMeasure&)> field_at;
  std::function<std::vector<Mat>(const DiscreteMeasure&)> matrix_at;  // may be empty
  std::optional<double> regularity_constant;             // c(form)
  std::function<double(double)> modulus;                 // continuity modulus, 0 at 0

  bool has_matrices() const { return static_cast<bool>(matrix_at); }
};

/// Form with a mu-independent field A: field_at samples A, matrix_at samples
/// its Jacobian. Always regular when A has bounded second derivatives.
PseudoOneForm linear_pseudo_one_form(const AnalyticField& a);

/// d of the linear functional mu -> int f dmu, i.e. the field grad f.
PseudoOneForm exact_form(const ScalarField& f);

/// sum_i a_i <A_mu(x_i), X_i>.
double evaluate_form(const PseudoOneForm& form, const DiscreteMeasure& mu,
                     const TangentField& x);

/// sum_i a_i <(B_i - B_i^T) X_i, Y_i>; antisymmetric in (X, Y).
double exterior_derivative(const PseudoOneForm& form, const DiscreteMeasure& mu,
                           const TangentField& x, const TangentField& y);

/// The defining three-term expression X L(Y) - Y L(X) - L([X,Y]) with the
/// directional derivatives taken along (Id + tX)_# mu by central differences.
double exterior_derivative_fd(const PseudoOneForm& form, const DiscreteMeasure& mu,
                              const AnalyticField& x, const AnalyticField& y,
                              double h = 1e-4);

struct LineIntegral {
  double value;            // composite trapezoid on the curve grid
  double half_grid_delta;  // value minus the half-resolution value
};

/// Trapezoid quadrature of t -> form(sigma_t, v_t) over the curve grid.
double line_integral(const PseudoOneForm& form, const MeasureCurve& curve);
LineIntegral line_integral_detailed(const PseudoOneForm& form, const MeasureCurve& curve);

/// Restriction to the uniform n-atom stratum at x in R^{nD}: the stacked
/// field A(x) = (A_mu(x_1), ..., A_mu(x_n)) and the block-diagonal matrix
/// with blocks B_mu(x_k).
std::pair<Vec, Mat> discrete_restriction(const PseudoOneForm& form, int n, const Vec& x);

/// Pull-back along the affine map x -> Mx + b (invertible M):
/// field x -> M^T A_{phi#mu}(Mx + b), matrices M^T B M.
PseudoOneForm pullback_affine(const PseudoOneForm& form, const Mat& m, const Vec& b);

struct RegularityReport {
  double worst_ratio = 0.0;  // transported defect over the allowed bound
  double worst_w2 = 0.0;     // distance of the pair attaining it
  int pairs = 0;
};

/// Samples measure pairs and reports the worst ratio of the transported
/// first-order defect ||A_nu(y) - A_mu(x) - B_mu(x)(y-x)||_gamma against
/// W_2(mu,nu) * min(modulus(W_2), c). Ratios <= 1 mean the pair satisfies
/// the regularity inequality. The second overload reads c and the modulus
/// from the form itself (regularity_constant must be set).
RegularityReport validate_regularity(const PseudoOneForm& form,
                                     const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
                                     double c, const std::function<double(double)>& modulus);
RegularityReport validate_regularity(const PseudoOneForm& form,
                                     const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs);

}  // namespace wcalc
