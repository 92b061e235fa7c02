#include "wcalc/library.hpp"

#include <cmath>

#include "wcalc/errors.hpp"

namespace wcalc {

namespace {

bool try_key(const std::string& name, const std::string& prefix, std::string* arg) {
  if (name.rfind(prefix, 0) != 0) return false;
  *arg = name.substr(prefix.size());
  return true;
}

// Pairwise interaction F = 1/2 sum_ij a_i a_j W(x_i - x_j) with even W;
// the Wasserstein gradient at atom i is sum_j a_j grad W(x_i - x_j).
Functional interaction_functional(const ScalarField& w) {
  Functional f;
  f.eval = [w](const DiscreteMeasure& mu) {
    double s = 0.0;
    for (int i = 0; i < mu.size(); ++i)
      for (int j = 0; j < mu.size(); ++j)
        s += mu.weight(i) * mu.weight(j) * w(mu.atom(i) - mu.atom(j));
    return 0.5 * s;
  };
  f.gradient = [w](const DiscreteMeasure& mu) {
    TangentField g;
    g.vectors.reserve(static_cast<size_t>(mu.size()));
    for (int i = 0; i < mu.size(); ++i) {
      Vec gi = Vec::Zero(mu.dimension());
      for (int j = 0; j < mu.size(); ++j)
        gi += mu.weight(j) * w.gradient(mu.atom(i) - mu.atom(j));
      g.vectors.push_back(gi);
    }
    return g;
  };
  return f;
}

Functional linear_functional_of(const ScalarField& f) {
  Functional out;
  out.eval = [f](const DiscreteMeasure& mu) { return linear_functional(f, mu); };
  out.gradient = [f](const DiscreteMeasure& mu) { return sample_gradient(f, mu); };
  return out;
}

}  // namespace

ScalarField scalar_by_name(const std::string& name, int dimension) {
  if (name == "quadratic") {
    return ScalarField([](const Vec& x) { return 0.5 * x.squaredNorm(); },
                       [](const Vec& x) { return x; },
                       [dimension](const Vec&) { return Mat::Identity(dimension, dimension).eval(); });
  }
  if (name == "quartic") {
    return ScalarField(
        [](const Vec& x) { return 0.25 * x.squaredNorm() * x.squaredNorm(); },
        [](const Vec& x) { return (x.squaredNorm() * x).eval(); },
        [dimension](const Vec& x) {
          return (x.squaredNorm() * Mat::Identity(dimension, dimension) +
                  2.0 * x * x.transpose()).eval();
        });
  }
  if (name == "gauss") {
    return ScalarField(
        [](const Vec& x) { return std::exp(-0.5 * x.squaredNorm()); },
        [](const Vec& x) { return (-std::exp(-0.5 * x.squaredNorm()) * x).eval(); },
        [dimension](const Vec& x) {
          const double e = std::exp(-0.5 * x.squaredNorm());
          return (e * (x * x.transpose() - Mat::Identity(dimension, dimension))).eval();
        });
  }
  if (name == "mix") {
    if (dimension < 2) fail(ErrorCode::DimensionMismatch, "'mix' needs dimension >= 2");
    return ScalarField(
        [](const Vec& x) { return x(0) * x(1) + 0.5 * x(0) * x(0) - x(1); },
        [dimension](const Vec& x) {
          Vec g = Vec::Zero(dimension);
          g(0) = x(1) + x(0);
          g(1) = x(0) - 1.0;
          return g;
        },
        [dimension](const Vec&) {
          Mat h = Mat::Zero(dimension, dimension);
          h(0, 0) = 1.0;
          h(0, 1) = h(1, 0) = 1.0;
          return h;
        });
  }
  std::string arg;
  if (try_key(name, "coord:", &arg)) {
    int k = -1;
    try {
      k = std::stoi(arg);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "coord index '" + arg + "' is not an integer");
    }
    if (k < 0 || k >= dimension) fail(ErrorCode::OutOfRange, "coordinate index out of range");
    return ScalarField([k](const Vec& x) { return x(k); },
                       [k, dimension](const Vec&) {
                         Vec g = Vec::Zero(dimension);
                         g(k) = 1.0;
                         return g;
                       },
                       [dimension](const Vec&) { return Mat::Zero(dimension, dimension).eval(); });
  }
  fail(ErrorCode::InvalidArgument, "unknown scalar function '" + name + "'");
}

PseudoOneForm form_by_name(const std::string& name, int dimension) {
  std::string arg;
  if (try_key(name, "gradient:", &arg))
    return exact_form(scalar_by_name(arg, dimension));
  if (name == "rotational") {
    if (dimension < 2) fail(ErrorCode::DimensionMismatch, "'rotational' needs dimension >= 2");
    return linear_pseudo_one_form(AnalyticField(
        [dimension](const Vec& x) {
          Vec a = Vec::Zero(dimension);
          a(0) = -x(1);
          a(1) = x(0);
          return a;
        },
        [dimension](const Vec&) {
          Mat b = Mat::Zero(dimension, dimension);
          b(0, 1) = -1.0;
          b(1, 0) = 1.0;
          return b;
        }));
  }
  if (name == "shear") {
    if (dimension < 2) fail(ErrorCode::DimensionMismatch, "'shear' needs dimension >= 2");
    return linear_pseudo_one_form(AnalyticField(
        [dimension](const Vec& x) {
          Vec a = Vec::Zero(dimension);
          a(0) = x(1);
          return a;
        },
        [dimension](const Vec&) {
          Mat b = Mat::Zero(dimension, dimension);
          b(0, 1) = 1.0;
          return b;
        }));
  }
  if (name == "swirl") {
    if (dimension < 2) fail(ErrorCode::DimensionMismatch, "'swirl' needs dimension >= 2");
    return linear_pseudo_one_form(AnalyticField(
        [dimension](const Vec& x) {
          Vec a = Vec::Zero(dimension);
          const double n2 = x.squaredNorm();
          a(0) = -x(1) * n2;
          a(1) = x(0) * n2;
          return a;
        },
        [dimension](const Vec& x) {
          Mat b = Mat::Zero(dimension, dimension);
          const double n2 = x.squaredNorm();
          Vec rot = Vec::Zero(dimension);
          rot(0) = -x(1);
          rot(1) = x(0);
          b += 2.0 * rot * x.transpose();
          b(0, 1) += -n2;
          b(1, 0) += n2;
          return b;
        }));
  }
  fail(ErrorCode::InvalidArgument, "unknown form '" + name + "'");
}

HamiltonianSystem hamiltonian_by_name(const std::string& name, int dimension) {
  SymplecticContext ctx(dimension);
  if (name == "oscillator")
    return {ctx, linear_functional_of(scalar_by_name("quadratic", dimension))};
  std::string arg;
  if (try_key(name, "linear:", &arg))
    return {ctx, linear_functional_of(scalar_by_name(arg, dimension))};
  if (try_key(name, "interaction:", &arg)) {
    if (arg == "spring")
      return {ctx, interaction_functional(scalar_by_name("quadratic", dimension))};
    if (arg == "gauss")
      return {ctx, interaction_functional(scalar_by_name("gauss", dimension))};
    fail(ErrorCode::InvalidArgument, "unknown interaction kernel '" + arg + "'");
  }
  fail(ErrorCode::InvalidArgument, "unknown hamiltonian '" + name + "'");
}

std::vector<std::string> builtin_form_names() {
  return {"gradient:<f>", "rotational", "shear", "swirl"};
}

std::vector<std::string> builtin_hamiltonian_names() {
  return {"oscillator", "linear:<f>", "interaction:spring", "interaction:gauss"};
}

}  // namespace wcalc
