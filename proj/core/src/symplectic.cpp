#include "wcalc/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "wcalc/errors.hpp"

namespace wcalc {

SymplecticContext::SymplecticContext(int dimension) {
  if (dimension < 2 || dimension % 2 != 0)
    fail(ErrorCode::OddDimension, "symplectic structure needs even dimension >= 2");
  half_dim_ = dimension / 2;
  j_ = Mat::Zero(dimension, dimension);
  j_.block(0, half_dim_, half_dim_, half_dim_) = -Mat::Identity(half_dim_, half_dim_);
  j_.block(half_dim_, 0, half_dim_, half_dim_) = Mat::Identity(half_dim_, half_dim_);
}

AnalyticField ham_field(const ScalarField& f, int dimension) {
  const SymplecticContext ctx(dimension);
  const Mat j = ctx.j();
  if (f.has_hessian()) {
    return AnalyticField([f, j](const Vec& x) { return (-(j * f.gradient(x))).eval(); },
                         [f, j](const Vec& x) { return (-(j * f.hessian(x))).eval(); });
  }
  return AnalyticField::with_fd_jacobian(
      [f, j](const Vec& x) { return (-(j * f.gradient(x))).eval(); });
}

double omega_pairing(const DiscreteMeasure& mu, const TangentField& x,
                     const TangentField& y) {
  if (x.size() != mu.size() || y.size() != mu.size())
    fail(ErrorCode::LengthMismatch, "tangent field not aligned with measure");
  const SymplecticContext ctx(mu.dimension());
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) s += mu.weight(i) * ctx.omega(x[i], y[i]);
  return s;
}

double symplectic_form(const DiscreteMeasure& mu, const ScalarField& f,
                       const ScalarField& g) {
  const AnalyticField xf = ham_field(f, mu.dimension());
  const AnalyticField xg = ham_field(g, mu.dimension());
  return omega_pairing(mu, sample(xf, mu), sample(xg, mu));
}

double poisson_bracket_linear(const ScalarField& f, const ScalarField& g,
                              const DiscreteMeasure& mu) {
  return symplectic_form(mu, f, g);
}

TangentField hamiltonian_vector_field(const HamiltonianSystem& system,
                                      const DiscreteMeasure& mu) {
  if (mu.dimension() != system.context.dimension())
    fail(ErrorCode::DimensionMismatch, "measure dimension does not match the context");
  const TangentField grad = wasserstein_gradient(system.hamiltonian, mu, system.fd_step);
  TangentField x;
  x.vectors.reserve(static_cast<size_t>(mu.size()));
  for (int i = 0; i < mu.size(); ++i) x.vectors.push_back(system.context.minus_j(grad[i]));
  return x;
}

FlowScheme flow_scheme_from_name(const std::string& name) {
  if (name == "rk4") return FlowScheme::Rk4;
  if (name == "implicit-midpoint") return FlowScheme::ImplicitMidpoint;
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + name + "'");
}

namespace {

using State = std::vector<Vec>;

State force(const HamiltonianSystem& system, const State& atoms,
            const std::vector<double>& weights) {
  const DiscreteMeasure mu(atoms, weights);
  const TangentField x = hamiltonian_vector_field(system, mu);
  return x.vectors;
}

State axpy(const State& x, double s, const State& d) {
  State r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += s * d[i];
  return r;
}

void check_collision(const State& atoms, double tol_factor, double t) {
  double extent = 1.0;
  for (const Vec& x : atoms) extent = std::max(extent, 1.0 + x.norm());
  const double tol = tol_factor * extent;
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if ((atoms[i] - atoms[j]).norm() <= tol)
        fail_at(ErrorCode::AtomCollision, "atoms collided during flow", t);
}

State rk4_step(const HamiltonianSystem& system, const State& x,
               const std::vector<double>& w, double dt) {
  const State k1 = force(system, x, w);
  const State k2 = force(system, axpy(x, dt / 2.0, k1), w);
  const State k3 = force(system, axpy(x, dt / 2.0, k2), w);
  const State k4 = force(system, axpy(x, dt, k3), w);
  State out = x;
  for (size_t i = 0; i < out.size(); ++i)
    out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

State midpoint_step(const HamiltonianSystem& system, const State& x,
                    const std::vector<double>& w, double dt, double t) {
  // Fixed point for the midpoint z = x + dt/2 X_F(z); converges for dt well
  // below the force Lipschitz scale.
  State z = axpy(x, dt / 2.0, force(system, x, w));
  for (int it = 0; it < 100; ++it) {
    const State next = axpy(x, dt / 2.0, force(system, z, w));
    double delta = 0.0, scale = 1.0;
    for (size_t i = 0; i < z.size(); ++i) {
      delta = std::max(delta, (next[i] - z[i]).lpNorm<Eigen::Infinity>());
      scale = std::max(scale, next[i].lpNorm<Eigen::Infinity>());
    }
    z = next;
    if (delta <= 1e-15 * scale) {
      State out = z;
      for (size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * z[i] - x[i];
      return out;
    }
  }
  fail_at(ErrorCode::StepRejected, "implicit midpoint did not converge", t);
}

}  // namespace

MeasureCurve hamiltonian_flow(const HamiltonianSystem& system, const DiscreteMeasure& mu0,
                              double t_final, double dt, FlowScheme scheme,
                              const FlowOptions& options) {
  if (!(t_final > 0.0) || !(dt > 0.0))
    fail(ErrorCode::InvalidArgument, "flow needs positive T and dt");
  if (options.store_stride < 1)
    fail(ErrorCode::InvalidArgument, "store stride must be >= 1");
  require_distinct_atoms(mu0);

  const std::vector<double>& w = mu0.weights();
  State x = mu0.atoms();

  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  auto store = [&](double t, const State& state) {
    const DiscreteMeasure mu(state, w);
    velocities.push_back(hamiltonian_vector_field(system, mu));
    measures.push_back(mu);
    times.push_back(t);
  };
  store(0.0, x);

  double t = 0.0;
  long step = 0;
  while (t < t_final - 1e-15 * t_final) {
    const double h = std::min(dt, t_final - t);
    x = scheme == FlowScheme::Rk4 ? rk4_step(system, x, w, h)
                                  : midpoint_step(system, x, w, h, t);
    t = std::min(t + h, t_final);
    ++step;
    if (x.size() > 1) check_collision(x, options.collision_tol, t);
    if (step % options.store_stride == 0 || t >= t_final - 1e-15 * t_final)
      store(t, x);
  }
  return MeasureCurve(std::move(times), std::move(measures), std::move(velocities));
}

}  // namespace wcalc
