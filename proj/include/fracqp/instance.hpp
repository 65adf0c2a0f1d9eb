#ifndef FRACQP_INSTANCE_HPP
#define FRACQP_INSTANCE_HPP

#include <string>
#include <vector>

#include "fracqp/forms.hpp"
#include "fracqp/qp.hpp"

namespace fracqp {

/// min_{x in {-1,1}^n} (x^T A x + alpha) / (x^T B x + beta),
/// with A, B given in spectral form and x^T B x + beta > 0 on the cube.
struct ProblemInstance {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  EigenForm A;
  EigenForm B;

  double numerator(const SignVector& x) const { return A.quad(x) + alpha; }
  double denominator(const SignVector& x) const { return B.quad(x) + beta; }
  double ratio(const SignVector& x) const {
    return numerator(x) / denominator(x);
  }
};

enum class PositivityCert {
  PsdBeta,     // all B eigenvalues >= 0 and beta > 0
  Enumerated,  // exhaustive check over the hypercube
};

struct ValidatedInstance {
  ProblemInstance inst;
  PositivityCert cert = PositivityCert::PsdBeta;
  double denom_lower_bound = 0.0;  // certified: min_x x^T B x + beta >= this
};

// Checks dimensions, eigenform invariants and denominator positivity.
// Positivity is certified by the PSD+beta sufficient condition or, failing
// that, by enumeration when n <= opts.brute_limit; otherwise throws
// ValidationError("... uncertifiable").
ValidatedInstance validate_instance(const ProblemInstance& raw,
                                    const QpOptions& opts = {});

struct NormalizedInstance {
  ValidatedInstance vi;
  // Shift applied to reach the nonnegative-root normal form:
  // A <- A + gamma B, alpha <- alpha + gamma beta. The original optimal
  // value is delta_star_shifted - gamma.
  double gamma = 0.0;
};

// Ensures f(0) = min_x x^T A x + alpha >= 0 (equivalently delta* >= 0),
// shifting the numerator by gamma * denominator if needed.
NormalizedInstance ensure_nonnegative_root(const ValidatedInstance& vi,
                                           const QpOptions& opts = {});

HomogenizedForms homogenize(const ProblemInstance& inst);

}  // namespace fracqp

#endif
