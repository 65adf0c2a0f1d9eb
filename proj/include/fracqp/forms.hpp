#ifndef FRACQP_FORMS_HPP
#define FRACQP_FORMS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace fracqp {

using SignVector = std::vector<std::int8_t>;  // entries are +1 / -1

/// Low-rank symmetric matrix in spectral form: sum_j lambda_j v_j v_j^T
/// with orthonormal v_j. Vectors must be unit length and pairwise
/// orthogonal within kOrthoTol; eigenvalues must be nonzero.
struct EigenPair {
  double eigenvalue = 0.0;
  std::vector<double> vector;
};

struct EigenForm {
  int dim = 0;
  std::vector<EigenPair> pairs;

  static constexpr double kOrthoTol = 1e-10;

  // x^T M x for M = sum lambda_j v_j v_j^T.
  double quad(std::span<const double> x) const;
  double quad(const SignVector& x) const;

  // Throws ValidationError if dimensions, unit norms, orthogonality or
  // nonzero-eigenvalue requirements are violated.
  void check(const char* label) const;
};

/// Weighted sum of rank-1 terms plus a constant:
///   value(x) = sum_j weight_j (w_j^T x)^2 + constant.
/// No orthogonality requirement on the vectors.
struct GramTerm {
  double weight = 0.0;
  std::vector<double> vector;
};

struct GramForm {
  int dim = 0;
  std::vector<GramTerm> terms;
  double constant = 0.0;

  double value(std::span<const double> x) const;
  double value(const SignVector& x) const;

  // abs-scale of representable values, used for tolerance scaling:
  // sum |w_j| * ||v_j||^2 * n + |constant|.
  double value_scale() const;
};

struct DiagonalSummary {
  std::vector<double> entries;  // d_i = sum_j weight_j * v_{j,i}^2
  int positive = 0;
  int negative = 0;
};

/// Homogenized numerator/denominator: a_tilde.value(x) = x^T A x + alpha
/// on the hypercube (the constant plays the role of (alpha/n) I_n).
struct HomogenizedForms {
  GramForm a_tilde;
  GramForm b_tilde;
};

GramForm as_gram(const EigenForm& f, double constant);

// Parametric merge: x^T (A - delta B) x + (alpha - delta beta).
// Zero-weight terms (eigenvalue scaled to 0) are dropped.
GramForm merge_parametric(const EigenForm& A, double alpha, const EigenForm& B,
                          double beta, double delta);

DiagonalSummary diagonal(const GramForm& q);

HomogenizedForms homogenize(const EigenForm& A, double alpha,
                            const EigenForm& B, double beta);

// Re-diagonalizes a gram form within the span of its term vectors.
// Eigenvalues with |lambda| <= zero_tol * scale are discarded.
EigenForm eigen_from_gram(const GramForm& g, double zero_tol = 1e-12);

double dot(std::span<const double> a, std::span<const double> b);
double dot_sign(std::span<const double> a, const SignVector& x);

}  // namespace fracqp

#endif
