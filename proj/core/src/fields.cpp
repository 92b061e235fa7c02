#include "wcalc/fields.hpp"

namespace wcalc {

namespace {

Mat fd_jacobian(const AnalyticField::ValueFn& value, const Vec& x, double step) {
  const int d = static_cast<int>(x.size());
  const Vec fx = value(x);
  Mat j(fx.size(), d);
  for (int k = 0; k < d; ++k) {
    const double h = step * (1.0 + std::abs(x(k)));
    Vec xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (value(xp) - value(xm)) / (2.0 * h);
  }
  return j;
}

Vec fd_gradient(const ScalarField::ValueFn& value, const Vec& x, double step) {
  const int d = static_cast<int>(x.size());
  Vec g(d);
  for (int k = 0; k < d; ++k) {
    const double h = step * (1.0 + std::abs(x(k)));
    Vec xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (value(xp) - value(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace

AnalyticField AnalyticField::with_fd_jacobian(ValueFn value, double step) {
  ValueFn copy = value;
  AnalyticField f(std::move(value), [copy, step](const Vec& x) {
    return fd_jacobian(copy, x, step);
  });
  f.fd_jacobian_ = true;
  f.fd_step_ = step;
  return f;
}

AnalyticField AnalyticField::value_only(ValueFn value) {
  return AnalyticField(std::move(value), JacobianFn());
}

AnalyticField AnalyticField::identity(int dimension) {
  return AnalyticField([](const Vec& x) { return x; },
                       [dimension](const Vec&) { return Mat::Identity(dimension, dimension); });
}

AnalyticField AnalyticField::constant(const Vec& c) {
  const int d = static_cast<int>(c.size());
  return AnalyticField([c](const Vec&) { return c; },
                       [d](const Vec&) { return Mat::Zero(d, d); });
}

AnalyticField AnalyticField::affine(const Mat& m, const Vec& b) {
  return AnalyticField([m, b](const Vec& x) { return (m * x + b).eval(); },
                       [m](const Vec&) { return m; });
}

AnalyticField AnalyticField::dilation(int dimension, double s) {
  return AnalyticField([s](const Vec& x) { return (s * x).eval(); },
                       [dimension, s](const Vec&) {
                         return (s * Mat::Identity(dimension, dimension)).eval();
                       });
}

AnalyticField compose(const AnalyticField& a, const AnalyticField& b) {
  if (a.has_jacobian() && b.has_jacobian()) {
    return AnalyticField([a, b](const Vec& x) { return a(b(x)); },
                         [a, b](const Vec& x) {
                           const Vec bx = b(x);
                           return (a.jacobian(bx) * b.jacobian(x)).eval();
                         });
  }
  return AnalyticField::value_only([a, b](const Vec& x) { return a(b(x)); });
}

AnalyticField lie_bracket(const AnalyticField& x, const AnalyticField& y) {
  return AnalyticField(
      [x, y](const Vec& p) { return (y.jacobian(p) * x(p) - x.jacobian(p) * y(p)).eval(); },
      AnalyticField::JacobianFn());
}

ScalarField ScalarField::with_fd_gradient(ValueFn value, double step) {
  ValueFn copy = value;
  return ScalarField(std::move(value), [copy, step](const Vec& x) {
    return fd_gradient(copy, x, step);
  });
}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const Vec&) { return c; },
                     [](const Vec& x) { return Vec::Zero(x.size()).eval(); });
}

AnalyticField ScalarField::gradient_field() const {
  if (has_hessian()) {
    auto self = *this;
    return AnalyticField([self](const Vec& x) { return self.gradient(x); },
                         [self](const Vec& x) { return self.hessian(x); });
  }
  auto self = *this;
  return AnalyticField::with_fd_jacobian([self](const Vec& x) { return self.gradient(x); });
}

ScalarField compose_affine(const ScalarField& f, const Mat& a, const Vec& c) {
  ScalarField::ValueFn value = [f, a, c](const Vec& x) { return f((a * x + c).eval()); };
  ScalarField::GradientFn grad = [f, a, c](const Vec& x) {
    return (a.transpose() * f.gradient((a * x + c).eval())).eval();
  };
  if (f.has_hessian()) {
    return ScalarField(value, grad, [f, a, c](const Vec& x) {
      return (a.transpose() * f.hessian((a * x + c).eval()) * a).eval();
    });
  }
  return ScalarField(value, grad);
}

TangentField TangentField::zero(int count, int dimension) {
  TangentField f;
  f.vectors.assign(static_cast<size_t>(count), Vec::Zero(dimension));
  return f;
}

TangentField operator+(const TangentField& a, const TangentField& b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "tangent field sizes differ");
  TangentField r = a;
  for (int i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

TangentField operator-(const TangentField& a, const TangentField& b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "tangent field sizes differ");
  TangentField r = a;
  for (int i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

TangentField operator*(double s, const TangentField& a) {
  TangentField r = a;
  for (int i = 0; i < r.size(); ++i) r[i] *= s;
  return r;
}

}  // namespace wcalc
