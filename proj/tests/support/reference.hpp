#pragma once

#include "quartsolve/quartic_forms.hpp"

/// High-precision minimizer of f(x) = ρ(x) − ⟨c,x⟩ over the full space,
/// used as the yardstick for transfer inequalities and rate envelopes.
/// The polish stage is plain damped Newton on f, so its accuracy does not
/// depend on the solvers under test being correct.
namespace qtest {

struct ReferenceSolution {
  quartsolve::Vector x_star;
  double f_star = 0.0;
  quartsolve::Vector y_star;    // x*/⟨c,x*⟩, the slice representative
  double sqrt_rho_star = 0.0;   // √ρ(y*)
  double grad_residual = 0.0;   // ‖∇f(x*)‖ after polish
};

ReferenceSolution reference_minimizer(const quartsolve::QuarticForm& form,
                                      const quartsolve::Vector& c);

}  // namespace qtest
