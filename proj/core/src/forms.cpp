#include "wcalc/forms.hpp"

#include <algorithm>
#include <cmath>

#include "wcalc/errors.hpp"
#include "wcalc/parallel.hpp"
#include "wcalc/transport.hpp"

namespace wcalc {

PseudoOneForm linear_pseudo_one_form(const AnalyticField& a) {
  if (!a.has_jacobian())
    fail(ErrorCode::JacobianUnavailable, "linear form needs a field with a jacobian");
  PseudoOneForm form;
  form.field_at = [a](const DiscreteMeasure& mu) { return sample(a, mu); };
  form.matrix_at = [a](const DiscreteMeasure& mu) {
    std::vector<Mat> b;
    b.reserve(static_cast<size_t>(mu.size()));
    for (int i = 0; i < mu.size(); ++i) b.push_back(a.jacobian(mu.atom(i)));
    return b;
  };
  return form;
}

PseudoOneForm exact_form(const ScalarField& f) {
  return linear_pseudo_one_form(f.gradient_field());
}

double evaluate_form(const PseudoOneForm& form, const DiscreteMeasure& mu,
                     const TangentField& x) {
  if (x.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  const TangentField a = form.field_at(mu);
  return field_inner(mu, a, x);
}

double exterior_derivative(const PseudoOneForm& form, const DiscreteMeasure& mu,
                           const TangentField& x, const TangentField& y) {
  if (x.size() != mu.size() || y.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  if (!form.has_matrices())
    fail(ErrorCode::JacobianUnavailable, "form carries no matrix data");
  require_distinct_atoms(mu);
  const std::vector<Mat> b = form.matrix_at(mu);
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const Mat antisym = b[static_cast<size_t>(i)] - b[static_cast<size_t>(i)].transpose();
    s += mu.weight(i) * (antisym * x[i]).dot(y[i]);
  }
  return s;
}

namespace {

// t -> form((Id + tZ)_# mu)(W), where W is re-sampled at the moved atoms.
double flowed_evaluation(const PseudoOneForm& form, const DiscreteMeasure& mu,
                         const AnalyticField& z, const AnalyticField& w, double t) {
  const DiscreteMeasure moved =
      pushforward([&](const Vec& p) { return (p + t * z(p)).eval(); }, mu);
  return evaluate_form(form, moved, sample(w, moved));
}

}  // namespace

double exterior_derivative_fd(const PseudoOneForm& form, const DiscreteMeasure& mu,
                              const AnalyticField& x, const AnalyticField& y,
                              double h) {
  if (!x.has_jacobian() || !y.has_jacobian())
    fail(ErrorCode::JacobianUnavailable, "bracket needs jacobians for both fields");
  const double x_of_ly =
      (flowed_evaluation(form, mu, x, y, h) - flowed_evaluation(form, mu, x, y, -h)) / (2.0 * h);
  const double y_of_lx =
      (flowed_evaluation(form, mu, y, x, h) - flowed_evaluation(form, mu, y, x, -h)) / (2.0 * h);
  const double bracket_term = evaluate_form(form, mu, sample(lie_bracket(x, y), mu));
  return x_of_ly - y_of_lx - bracket_term;
}

double line_integral(const PseudoOneForm& form, const MeasureCurve& curve) {
  if (!curve.has_velocities())
    fail(ErrorCode::MissingVelocities, "line integral needs curve velocities");
  std::vector<double> terms(static_cast<size_t>(curve.intervals()));
  std::vector<double> values(static_cast<size_t>(curve.samples()));
  for (int k = 0; k < curve.samples(); ++k)
    values[static_cast<size_t>(k)] = evaluate_form(form, curve.measure(k), curve.velocity(k));
  for (int k = 0; k < curve.intervals(); ++k)
    terms[static_cast<size_t>(k)] = 0.5 * (curve.time(k + 1) - curve.time(k)) *
                                    (values[static_cast<size_t>(k)] + values[static_cast<size_t>(k) + 1]);
  return pairwise_sum(terms);
}

LineIntegral line_integral_detailed(const PseudoOneForm& form, const MeasureCurve& curve) {
  LineIntegral r{};
  r.value = line_integral(form, curve);
  if (curve.intervals() % 2 == 0) {
    r.half_grid_delta = r.value - line_integral(form, subsampled(curve, 2));
  } else {
    r.half_grid_delta = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::pair<Vec, Mat> discrete_restriction(const PseudoOneForm& form, int n, const Vec& x) {
  if (n < 1 || x.size() % n != 0)
    fail(ErrorCode::LengthMismatch, "point does not split into n atoms");
  const Eigen::Index d = x.size() / n;
  std::vector<Vec> atoms;
  atoms.reserve(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) atoms.push_back(x.segment(i * d, d));
  const DiscreteMeasure mu(atoms, std::vector<double>(static_cast<size_t>(n), 1.0 / n));
  require_distinct_atoms(mu);
  if (!form.has_matrices())
    fail(ErrorCode::JacobianUnavailable, "form carries no matrix data");

  const TangentField a = form.field_at(mu);
  const std::vector<Mat> b = form.matrix_at(mu);
  Vec stacked(x.size());
  Mat block = Mat::Zero(x.size(), x.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    stacked.segment(i * d, d) = a[static_cast<int>(i)];
    block.block(i * d, i * d, d, d) = b[static_cast<size_t>(i)];
  }
  return {stacked, block};
}

PseudoOneForm pullback_affine(const PseudoOneForm& form, const Mat& m, const Vec& b) {
  PseudoOneForm pulled;
  auto push = [m, b](const DiscreteMeasure& mu) {
    return pushforward([&](const Vec& p) { return (m * p + b).eval(); }, mu);
  };
  pulled.field_at = [form, m, push](const DiscreteMeasure& mu) {
    const TangentField a = form.field_at(push(mu));
    TangentField out;
    out.vectors.reserve(a.vectors.size());
    for (const Vec& v : a.vectors) out.vectors.push_back(m.transpose() * v);
    return out;
  };
  if (form.has_matrices()) {
    pulled.matrix_at = [form, m, push](const DiscreteMeasure& mu) {
      std::vector<Mat> mats = form.matrix_at(push(mu));
      for (Mat& bm : mats) bm = m.transpose() * bm * m;
      return mats;
    };
  }
  pulled.regularity_constant = form.regularity_constant;
  pulled.modulus = form.modulus;
  return pulled;
}

RegularityReport validate_regularity(
    const PseudoOneForm& form,
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs) {
  if (!form.regularity_constant.has_value())
    fail(ErrorCode::InvalidArgument, "form carries no regularity constant");
  return validate_regularity(form, pairs, *form.regularity_constant, form.modulus);
}

RegularityReport validate_regularity(
    const PseudoOneForm& form,
    const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
    double c, const std::function<double(double)>& modulus) {
  if (!form.has_matrices())
    fail(ErrorCode::JacobianUnavailable, "form carries no matrix data");
  RegularityReport report;
  for (const auto& [mu, nu] : pairs) {
    const TransportPlan plan = optimal_plan(mu, nu);
    const double w2 = std::sqrt(std::max(plan.cost(), 0.0));
    if (w2 <= 0.0) continue;
    const TangentField a_mu = form.field_at(mu);
    const TangentField a_nu = form.field_at(nu);
    const std::vector<Mat> b_mu = form.matrix_at(mu);
    double defect_sq = 0.0;
    for (int i = 0; i < mu.size(); ++i)
      for (int j = 0; j < nu.size(); ++j) {
        const double g = plan.gamma()(i, j);
        if (g <= 0.0) continue;
        const Vec residual = a_nu[j] - a_mu[i] -
                             b_mu[static_cast<size_t>(i)] * (nu.atom(j) - mu.atom(i));
        defect_sq += g * residual.squaredNorm();
      }
    const double allowance = modulus ? std::min(modulus(w2), c) : c;
    const double bound = w2 * allowance;
    const double ratio = bound > 0.0 ? std::sqrt(defect_sq) / bound
                                     : std::numeric_limits<double>::infinity();
    ++report.pairs;
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_w2 = w2;
    }
  }
  return report;
}

}  // namespace wcalc
