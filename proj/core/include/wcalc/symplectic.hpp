#pragma once

#include "wcalc/calculus.hpp"
#include "wcalc/curve.hpp"
#include "wcalc/measure.hpp"

namespace wcalc {

/// Canonical structure on R^{2d}: J = [[0, -I], [I, 0]] and the pairing
/// omega(u, v) = <Ju, v>.
class SymplecticContext {
 public:
  explicit SymplecticContext(int dimension);

  int dimension() const { return 2 * half_dim_; }
  int half_dim() const { return half_dim_; }
  const Mat& j() const { return j_; }

  double omega(const Vec& u, const Vec& v) const { return (j_ * u).dot(v); }
  Vec minus_j(const Vec& u) const { return -(j_ * u); }

 private:
  int half_dim_;
  Mat j_;
};

/// Hamiltonian field of a scalar function: x -> -J grad f(x), with Jacobian
/// -J Hess f when f carries a Hessian.
AnalyticField ham_field(const ScalarField& f, int dimension);

/// sum_i a_i omega(X_i, Y_i); antisymmetric, bounded by ||X|| ||Y||.
double omega_pairing(const DiscreteMeasure& mu, const TangentField& x,
                     const TangentField& y);

/// Omega_mu on Hamiltonian directions: int omega(X_f, X_g) dmu.
///
/// Note: pairing the *projected* fields instead (omega(pi(X_f), pi(X_g)))
/// defines a different 2-form off the distinct-atom stratum, since it drops
/// the divergence components of X_f, X_g; that variant is not provided. On
/// the distinct-atom stratum the projection is the identity and the two
/// agree.
double symplectic_form(const DiscreteMeasure& mu, const ScalarField& f,
                       const ScalarField& g);

/// {F_f, F_g}(mu) = int {f, g} dmu = int omega(X_f, X_g) dmu. Same value as
/// symplectic_form; kept as the named Poisson entry point.
double poisson_bracket_linear(const ScalarField& f, const ScalarField& g,
                              const DiscreteMeasure& mu);

struct HamiltonianSystem {
  SymplecticContext context;
  Functional hamiltonian;
  double fd_step = 1e-5;  // used when the Hamiltonian has no analytic gradient
};

/// X_F(mu) = -J grad_mu F atomwise (projection is the identity on the
/// distinct-atom stratum; coincident atoms are an error, not a projection).
TangentField hamiltonian_vector_field(const HamiltonianSystem& system,
                                      const DiscreteMeasure& mu);

enum class FlowScheme { Rk4, ImplicitMidpoint };

FlowScheme flow_scheme_from_name(const std::string& name);

struct FlowOptions {
  double collision_tol = 1e-10;  // times the running extent
  int store_stride = 1;          // keep every k-th step in the output curve
};

/// Integrates the particle system xdot_i = X_F(mu_t)(x_i) from 0 to T.
/// Stored samples carry X_F as their velocity. Aborts with AtomCollision
/// when atoms approach within collision_tol * extent.
MeasureCurve hamiltonian_flow(const HamiltonianSystem& system, const DiscreteMeasure& mu0,
                              double t_final, double dt, FlowScheme scheme,
                              const FlowOptions& options = {});

}  // namespace wcalc
