#pragma once

#include <memory>

#include "cy/calculus.hpp"
#include "cy/synthetic.hpp"

namespace cy {

/// Problem data for (omega + da)^n = A e^f omega^n with da = dJd(phi).
/// omega must be closed and J-taming; A normalizes the right-hand side.
struct MAProblem {
  TorusGrid grid;
  ACSField J;
  FormField omega;
  ScalarField f;
  double A = 1.0;
  std::shared_ptr<const DiffEngine> eng;
  FormField omega_top;    // omega^n, cached
  double omega_total = 0.0;  // integral of omega^n

  double d_omega_defect() const;
  double normalization_defect() const;
};

MAProblem make_problem(const TorusGrid& g, ACSField J, FormField omega, ScalarField f,
                       Scheme scheme = Scheme::spectral);
/// flat standard background (J_std, omega_std)
MAProblem make_standard_problem(const TorusGrid& g, ScalarField f,
                                Scheme scheme = Scheme::spectral);

/// omega(phi) = omega + dJd(phi)
FormField omega_phi(const ScalarField& phi, const MAProblem& prob);

struct FOpResult {
  ScalarField value;
  bool nontaming = false;  // warning only; Newton line search may probe outside
  double margin = 0.0;
};

/// F(phi) = omega(phi)^n / omega^n via the top-form wedge ratio (valid for
/// non-integrable J); flags the taming margin alongside.
FOpResult F_op(const ScalarField& phi, const MAProblem& prob);

/// Determinant fast path for constant J: det of the Hermitian matrix of
/// omega(phi). Cross-checks the wedge route.
ScalarField F_det_route(const ScalarField& phi, const MAProblem& prob);

/// F_j(phi): j-th type component; sum over j recovers F exactly.
ScalarField F_component(const ScalarField& phi, int j, const MAProblem& prob);

/// min over grid points of the smallest eigenvalue of H(phi)(., J.);
/// positive iff omega(phi) tames J.
double taming_margin(const ScalarField& phi, const MAProblem& prob);

/// Matrix-free linearization u -> n omega(phi)^{n-1} ^ dJd(u) / omega^n.
/// Immutable after construction; safe to apply concurrently.
class LinearizedOperator {
 public:
  LinearizedOperator() = default;
  LinearizedOperator(const MAProblem& prob, FormField coeff_top_minus_one, double margin);
  ScalarField apply(const ScalarField& u) const;
  const MAProblem& problem() const { return *prob_; }
  double margin() const { return margin_; }

 private:
  const MAProblem* prob_ = nullptr;
  FormField coeff_;  // omega(phi)^{n-1} snapshot (trivial for n=1)
  double margin_ = 0.0;
};

/// Throws NotElliptic when the taming margin is nonpositive.
LinearizedOperator linearize(const ScalarField& phi, const MAProblem& prob);

/// Random band-limited potential rescaled (halved) until the taming margin
/// exceeds `target_margin`; for fuzzing states inside the cone.
ScalarField random_taming_potential(Rng& rng, const MAProblem& prob, double amp0 = 0.002,
                                    double target_margin = 0.1);

}  // namespace cy
