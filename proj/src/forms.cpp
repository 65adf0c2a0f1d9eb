#include "fracqp/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracqp/errors.hpp"

namespace fracqp {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot_sign(std::span<const double> a, const SignVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += x[i] > 0 ? a[i] : -a[i];
  return s;
}

double EigenForm::quad(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& p : pairs) {
    const double t = dot(p.vector, x);
    s += p.eigenvalue * t * t;
  }
  return s;
}

double EigenForm::quad(const SignVector& x) const {
  double s = 0.0;
  for (const auto& p : pairs) {
    const double t = dot_sign(p.vector, x);
    s += p.eigenvalue * t * t;
  }
  return s;
}

void EigenForm::check(const char* label) const {
  const std::string who(label);
  if (dim <= 0) throw ValidationError(who + ": dimension must be positive");
  if (static_cast<int>(pairs.size()) > dim)
    throw ValidationError(who + ": more eigenpairs than dimensions");
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    if (pairs[j].eigenvalue == 0.0)
      throw ValidationError(who + ": eigenvalue " + std::to_string(j) +
                            " is zero");
    if (static_cast<int>(pairs[j].vector.size()) != dim)
      throw ValidationError(who + ": eigenvector " + std::to_string(j) +
                            " has wrong length");
    const double nrm = dot(pairs[j].vector, pairs[j].vector);
    if (std::abs(nrm - 1.0) > kOrthoTol)
      throw ValidationError(who + ": eigenvector " + std::to_string(j) +
                            " is not unit length (|v|^2=" + std::to_string(nrm) +
                            ")");
    for (std::size_t i = 0; i < j; ++i) {
      const double ip = dot(pairs[i].vector, pairs[j].vector);
      if (std::abs(ip) > kOrthoTol)
        throw ValidationError(who + ": eigenvectors " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              " are not orthogonal (<v_i,v_j>=" +
                              std::to_string(ip) + ")");
    }
  }
}

double GramForm::value(std::span<const double> x) const {
  double s = constant;
  for (const auto& t : terms) {
    const double p = dot(t.vector, x);
    s += t.weight * p * p;
  }
  return s;
}

double GramForm::value(const SignVector& x) const {
  double s = constant;
  for (const auto& t : terms) {
    const double p = dot_sign(t.vector, x);
    s += t.weight * p * p;
  }
  return s;
}

double GramForm::value_scale() const {
  double s = std::abs(constant);
  for (const auto& t : terms)
    s += std::abs(t.weight) * dot(t.vector, t.vector) * dim;
  return s;
}

GramForm as_gram(const EigenForm& f, double constant) {
  GramForm g;
  g.dim = f.dim;
  g.constant = constant;
  g.terms.reserve(f.pairs.size());
  for (const auto& p : f.pairs) g.terms.push_back({p.eigenvalue, p.vector});
  return g;
}

GramForm merge_parametric(const EigenForm& A, double alpha, const EigenForm& B,
                          double beta, double delta) {
  if (A.dim != B.dim)
    throw ValidationError("merge_parametric: dimension mismatch");
  GramForm g;
  g.dim = A.dim;
  g.constant = alpha - delta * beta;
  g.terms.reserve(A.pairs.size() + B.pairs.size());
  for (const auto& p : A.pairs) g.terms.push_back({p.eigenvalue, p.vector});
  for (const auto& p : B.pairs) {
    const double w = -delta * p.eigenvalue;
    if (w != 0.0) g.terms.push_back({w, p.vector});
  }
  return g;
}

DiagonalSummary diagonal(const GramForm& q) {
  DiagonalSummary d;
  d.entries.assign(q.dim, 0.0);
  for (const auto& t : q.terms)
    for (int i = 0; i < q.dim; ++i)
      d.entries[i] += t.weight * t.vector[i] * t.vector[i];
  for (double e : d.entries) {
    if (e > 0.0) ++d.positive;
    if (e < 0.0) ++d.negative;
  }
  return d;
}

HomogenizedForms homogenize(const EigenForm& A, double alpha,
                            const EigenForm& B, double beta) {
  return {as_gram(A, alpha), as_gram(B, beta)};
}

namespace {

// Cyclic Jacobi eigendecomposition of a small symmetric matrix (row-major).
void jacobi_eigen(std::vector<double>& m, int k, std::vector<double>& evals,
                  std::vector<double>& evecs) {
  evecs.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) evecs[static_cast<std::size_t>(i) * k + i] = 1.0;
  auto at = [&](std::vector<double>& a, int r, int c) -> double& {
    return a[static_cast<std::size_t>(r) * k + c];
  };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += std::abs(at(m, p, q));
    if (off < 1e-15 * (1.0 + off)) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = at(m, p, q);
        if (apq == 0.0) continue;
        const double theta = (at(m, q, q) - at(m, p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < k; ++i) {
          const double mip = at(m, i, p), miq = at(m, i, q);
          at(m, i, p) = c * mip - s * miq;
          at(m, i, q) = s * mip + c * miq;
        }
        for (int i = 0; i < k; ++i) {
          const double mpi = at(m, p, i), mqi = at(m, q, i);
          at(m, p, i) = c * mpi - s * mqi;
          at(m, q, i) = s * mpi + c * mqi;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = at(evecs, i, p), viq = at(evecs, i, q);
          at(evecs, i, p) = c * vip - s * viq;
          at(evecs, i, q) = s * vip + c * viq;
        }
      }
    }
  }
  evals.resize(k);
  for (int i = 0; i < k; ++i) evals[i] = m[static_cast<std::size_t>(i) * k + i];
}

}  // namespace

EigenForm eigen_from_gram(const GramForm& g, double zero_tol) {
  const int n = g.dim;
  // Orthonormal basis of span{term vectors} by modified Gram-Schmidt.
  std::vector<std::vector<double>> basis;
  for (const auto& t : g.terms) {
    std::vector<double> v = t.vector;
    for (const auto& b : basis) {
      const double c = dot(b, v);
      for (int i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    const double nrm = std::sqrt(dot(v, v));
    const double orig = std::sqrt(dot(t.vector, t.vector));
    if (nrm > 1e-10 * (1.0 + orig)) {
      for (int i = 0; i < n; ++i) v[i] /= nrm;
      basis.push_back(std::move(v));
    }
  }
  const int k = static_cast<int>(basis.size());
  EigenForm out;
  out.dim = n;
  if (k == 0) return out;

  // Projected matrix S = sum_j w_j (Q^T v_j)(Q^T v_j)^T.
  std::vector<double> s(static_cast<std::size_t>(k) * k, 0.0);
  double scale = 0.0;
  for (const auto& t : g.terms) {
    std::vector<double> c(k);
    for (int i = 0; i < k; ++i) c[i] = dot(basis[i], t.vector);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        s[static_cast<std::size_t>(i) * k + j] += t.weight * c[i] * c[j];
    scale += std::abs(t.weight) * dot(t.vector, t.vector);
  }

  std::vector<double> evals, evecs;
  jacobi_eigen(s, k, evals, evecs);
  for (int j = 0; j < k; ++j) {
    if (std::abs(evals[j]) <= zero_tol * (1.0 + scale)) continue;
    EigenPair p;
    p.eigenvalue = evals[j];
    p.vector.assign(n, 0.0);
    for (int i = 0; i < k; ++i) {
      const double c = evecs[static_cast<std::size_t>(i) * k + j];
      for (int t = 0; t < n; ++t) p.vector[t] += c * basis[i][t];
    }
    out.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace fracqp
