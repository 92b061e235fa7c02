#pragma once

#include <string>
#include <vector>

#include "wcalc/fields.hpp"
#include "wcalc/forms.hpp"
#include "wcalc/symplectic.hpp"

namespace wcalc {

/// Named scalar functions (all with analytic gradient and Hessian):
///   quadratic  |x|^2 / 2
///   quartic    |x|^4 / 4
///   gauss      exp(-|x|^2 / 2)
///   coord:k    x_k (0-based)
///   mix        x_0 x_1 + x_0^2 / 2 - x_1 (first two coordinates)
ScalarField scalar_by_name(const std::string& name, int dimension);

/// Named pseudo 1-forms:
///   gradient:<f>  d of mu -> int f dmu (closed)
///   rotational    A = (-x_1, x_0), zero on the remaining coordinates
///   shear         A = (x_1, 0, ...)
///   swirl         A = |x|^2 (-x_1, x_0), nonlinear in x
PseudoOneForm form_by_name(const std::string& name, int dimension);

/// Named Hamiltonians on measures over R^{2d}:
///   oscillator       int |x|^2 / 2 dmu
///   linear:<f>       int f dmu
///   interaction:<W>  1/2 int int W(x - y) dmu dmu,  W in {spring, gauss}
HamiltonianSystem hamiltonian_by_name(const std::string& name, int dimension);

std::vector<std::string> builtin_form_names();
std::vector<std::string> builtin_hamiltonian_names();

}  // namespace wcalc
