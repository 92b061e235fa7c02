#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "wcalc/errors.hpp"
#include "wcalc/types.hpp"

namespace wcalc {

/// Vector field on R^D together with a Jacobian, analytic or backed by
/// central differences with a scale-aware step h*(1+|x|).
class AnalyticField {
 public:
  using ValueFn = std::function<Vec(const Vec&)>;
  using JacobianFn = std::function<Mat(const Vec&)>;

  AnalyticField(ValueFn value, JacobianFn jacobian)
      : value_(std::move(value)), jacobian_(std::move(jacobian)) {}

  static AnalyticField with_fd_jacobian(ValueFn value, double step = 1e-5);
  static AnalyticField value_only(ValueFn value);

  static AnalyticField identity(int dimension);
  static AnalyticField constant(const Vec& c);
  static AnalyticField affine(const Mat& m, const Vec& b);
  static AnalyticField dilation(int dimension, double s);

  Vec operator()(const Vec& x) const { return value_(x); }

  Mat jacobian(const Vec& x) const {
    if (!jacobian_) fail(ErrorCode::JacobianUnavailable, "field has no jacobian");
    return jacobian_(x);
  }

  bool has_jacobian() const { return static_cast<bool>(jacobian_); }
  bool jacobian_is_fd() const { return fd_jacobian_; }
  double fd_step() const { return fd_step_; }

 private:
  ValueFn value_;
  JacobianFn jacobian_;
  bool fd_jacobian_ = false;
  double fd_step_ = 0.0;
};

/// Composition a(b(x)) with chain-rule Jacobian.
AnalyticField compose(const AnalyticField& a, const AnalyticField& b);

/// Vector-field bracket [X,Y] = (grad Y) X - (grad X) Y.
AnalyticField lie_bracket(const AnalyticField& x, const AnalyticField& y);

/// Scalar function on R^D with gradient and optional Hessian.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  ScalarField(ValueFn value, GradientFn gradient)
      : value_(std::move(value)), gradient_(std::move(gradient)) {}
  ScalarField(ValueFn value, GradientFn gradient, HessianFn hessian)
      : value_(std::move(value)),
        gradient_(std::move(gradient)),
        hessian_(std::move(hessian)) {}

  static ScalarField with_fd_gradient(ValueFn value, double step = 1e-5);
  static ScalarField constant(double c);

  double operator()(const Vec& x) const { return value_(x); }
  Vec gradient(const Vec& x) const { return gradient_(x); }

  Mat hessian(const Vec& x) const {
    if (!hessian_) fail(ErrorCode::JacobianUnavailable, "scalar field has no hessian");
    return hessian_(x);
  }
  bool has_hessian() const { return static_cast<bool>(hessian_); }

  /// Gradient as an AnalyticField (Jacobian = Hessian when available).
  AnalyticField gradient_field() const;

 private:
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// x -> f(Ax + c), with chain-rule gradient (and Hessian when f has one).
ScalarField compose_affine(const ScalarField& f, const Mat& a, const Vec& c);

/// One vector per atom of a paired DiscreteMeasure.
struct TangentField {
  std::vector<Vec> vectors;

  TangentField() = default;
  explicit TangentField(std::vector<Vec> v) : vectors(std::move(v)) {}
  static TangentField zero(int count, int dimension);

  int size() const { return static_cast<int>(vectors.size()); }
  const Vec& operator[](int i) const { return vectors[static_cast<size_t>(i)]; }
  Vec& operator[](int i) { return vectors[static_cast<size_t>(i)]; }
};

TangentField operator+(const TangentField& a, const TangentField& b);
TangentField operator-(const TangentField& a, const TangentField& b);
TangentField operator*(double s, const TangentField& a);

}  // namespace wcalc
