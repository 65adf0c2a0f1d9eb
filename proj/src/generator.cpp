#include "fracqp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fracqp/errors.hpp"

namespace fracqp {

const char* family_name(Family f) {
  switch (f) {
    case Family::NsdPsd: return "nsd_psd";
    case Family::SparsePositive: return "sparse_positive";
    case Family::DiagSign: return "diag_sign";
    case Family::AdversarialPieces: return "adversarial_pieces";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "nsd_psd") return Family::NsdPsd;
  if (s == "sparse_positive") return Family::SparsePositive;
  if (s == "diag_sign") return Family::DiagSign;
  if (s == "adversarial_pieces") return Family::AdversarialPieces;
  return std::nullopt;
}

namespace {

// Distributions are hand-rolled on top of the engine's raw bits; the
// std::*_distribution classes are implementation-defined and would break
// cross-platform reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double u01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do { u1 = u01(); } while (u1 <= 0.0);
    const double u2 = u01();
    const double m = std::sqrt(-2.0 * std::log(u1));
    cached_ = m * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return m * std::cos(2.0 * M_PI * u2);
  }
  int index(int n) {  // uniform in [0, n)
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t reject = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v;
    do { v = eng_(); } while (v >= reject);
    return static_cast<int>(v % range);
  }
  bool coin() { return (eng_() >> 63) != 0; }

private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

std::vector<double> gaussian_vector(Rng& rng, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

// Appends unit vectors orthogonal to everything in `ortho`, redrawing on
// near-dependence.
void append_orthonormal(Rng& rng, int n, int count,
                        std::vector<std::vector<double>>& ortho,
                        std::vector<std::vector<double>>* out) {
  for (int added = 0; added < count;) {
    std::vector<double> v = gaussian_vector(rng, n);
    for (const auto& b : ortho) {
      const double c = dot(b, v);
      for (int i = 0; i < n; ++i) v[i] -= c * b[i];
    }
    const double nrm = std::sqrt(dot(v, v));
    if (nrm < 1e-6 * std::sqrt(static_cast<double>(n))) continue;
    for (int i = 0; i < n; ++i) v[i] /= nrm;
    ortho.push_back(v);
    if (out) out->push_back(std::move(v));
    ++added;
  }
}

EigenForm orthonormal_form(Rng& rng, int n, int count, double sign) {
  std::vector<std::vector<double>> ortho, vecs;
  append_orthonormal(rng, n, count, ortho, &vecs);
  EigenForm f;
  f.dim = n;
  for (auto& v : vecs)
    f.pairs.push_back({sign * rng.log_uniform(0.1, 10.0), std::move(v)});
  return f;
}

double exact_numerator_min(const EigenForm& a, const QpOptions& opts) {
  return solve_qp(as_gram(a, 0.0), Engine::Auto, opts).min_value;
}

ProblemInstance make_nsd_psd(Rng& rng, const FamilySpec& spec,
                             const QpOptions& opts) {
  ProblemInstance inst;
  inst.n = spec.n;
  inst.A = orthonormal_form(rng, spec.n, spec.r_a, -1.0);
  inst.B = orthonormal_form(rng, spec.n, spec.r_b, +1.0);
  inst.beta = rng.uniform(0.5, 2.0);
  const double m0 = exact_numerator_min(inst.A, opts);
  inst.alpha = -m0 + rng.u01() * (1.0 + 0.1 * std::abs(m0));
  return inst;
}

ProblemInstance make_sparse_positive(Rng& rng, const FamilySpec& spec,
                                     const QpOptions& opts) {
  const int n = spec.n;
  const int s = spec.support;
  if (s < 1 || s > positive_support_bound(n, opts))
    throw ValidationError(
        "generate: sparse_positive support must be in [1, kappa*log2(n)+c]");
  if (spec.r_a < 1) throw ValidationError("generate: r_a must be >= 1");

  // Fisher-Yates prefix for the support of the positive eigenvector.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < s; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);

  std::vector<double> sparse(n, 0.0);
  for (int i = 0; i < s; ++i) {
    double v = 0.0;
    do { v = rng.normal(); } while (std::abs(v) < 1e-3);
    sparse[idx[i]] = v;
  }
  const double nrm = std::sqrt(dot(sparse, sparse));
  for (double& v : sparse) v /= nrm;

  ProblemInstance inst;
  inst.n = n;
  inst.A.dim = n;
  inst.A.pairs.push_back({rng.log_uniform(0.1, 10.0), sparse});
  std::vector<std::vector<double>> ortho{sparse}, negs;
  append_orthonormal(rng, n, spec.r_a - 1, ortho, &negs);
  for (auto& v : negs)
    inst.A.pairs.push_back({-rng.log_uniform(0.1, 10.0), std::move(v)});
  inst.B = orthonormal_form(rng, n, spec.r_b, +1.0);
  inst.beta = rng.uniform(0.5, 2.0);
  const double m0 = exact_numerator_min(inst.A, opts);
  inst.alpha = -m0 + rng.u01() * (1.0 + 0.1 * std::abs(m0));
  return inst;
}

ProblemInstance make_diag_sign(Rng& rng, const FamilySpec& spec,
                               const QpOptions& opts) {
  const int n = spec.n;
  if (spec.r_a < 2)
    throw ValidationError("generate: diag_sign needs r_a >= 2 for an "
                          "indefinite spectrum");
  if (n < 2) throw ValidationError("generate: diag_sign needs n >= 2");
  if (n > opts.brute_limit)
    throw ValidationError("generate: diag_sign needs n within the brute-force "
                          "limit (the family exercises the brute fallback)");

  // Two sign patterns with equal |entries| stay orthogonal under a shared
  // random sign flip, so diag = (lambda_pos + lambda_neg)/m entrywise.
  const int m = n - (n % 2);
  std::vector<double> u(n, 0.0), v(n, 0.0);
  const double inv = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i) {
    const double eps = rng.coin() ? 1.0 : -1.0;
    u[i] = eps * inv;
    v[i] = (i % 2 ? -eps : eps) * inv;
  }
  const double lneg = -rng.log_uniform(0.1, 10.0);
  const double lpos = std::abs(lneg) * rng.uniform(0.3, 0.9);

  ProblemInstance inst;
  inst.n = n;
  inst.A.dim = n;
  inst.A.pairs.push_back({lpos, u});
  inst.A.pairs.push_back({lneg, v});
  std::vector<std::vector<double>> ortho{u, v}, negs;
  append_orthonormal(rng, n, spec.r_a - 2, ortho, &negs);
  for (auto& w : negs)
    inst.A.pairs.push_back({-rng.log_uniform(0.1, 10.0), std::move(w)});
  inst.B = orthonormal_form(rng, n, spec.r_b, +1.0);
  inst.beta = rng.uniform(0.5, 2.0);
  const double m0 =
      solve_qp(as_gram(inst.A, 0.0), Engine::Brute, opts).min_value;
  inst.alpha = -m0 + rng.u01() * (1.0 + 0.1 * std::abs(m0));
  return inst;
}

ProblemInstance make_adversarial(Rng& rng, const FamilySpec& spec,
                                 const QpOptions& opts) {
  const int n = spec.n;
  // Heavy-tailed entries spread the achievable (x^T A x, x^T B x) pairs, so
  // the lower envelope of f collects many breakpoints.
  auto spread_vector = [&](double decades) {
    std::vector<double> v(n);
    for (double& x : v)
      x = (rng.coin() ? 1.0 : -1.0) * std::pow(10.0, rng.uniform(-decades, 0.0));
    const double nrm = std::sqrt(dot(v, v));
    for (double& x : v) x /= nrm;
    return v;
  };
  ProblemInstance inst;
  inst.n = n;
  inst.A.dim = n;
  inst.A.pairs.push_back({-rng.log_uniform(0.5, 2.0), spread_vector(2.0)});
  {
    std::vector<std::vector<double>> ortho{inst.A.pairs[0].vector}, negs;
    append_orthonormal(rng, n, spec.r_a - 1, ortho, &negs);
    for (auto& w : negs)
      inst.A.pairs.push_back({-rng.log_uniform(0.1, 1.0), std::move(w)});
  }
  inst.B.dim = n;
  inst.B.pairs.push_back({rng.log_uniform(0.5, 2.0), spread_vector(2.0)});
  {
    std::vector<std::vector<double>> ortho{inst.B.pairs[0].vector}, poss;
    append_orthonormal(rng, n, spec.r_b - 1, ortho, &poss);
    for (auto& w : poss)
      inst.B.pairs.push_back({rng.log_uniform(0.1, 1.0), std::move(w)});
  }
  inst.beta = rng.uniform(0.5, 2.0);
  const double m0 = exact_numerator_min(inst.A, opts);
  inst.alpha = -m0 + rng.uniform(0.1, 1.0) * (1.0 + 0.25 * std::abs(m0));
  return inst;
}

}  // namespace

NormalizedInstance generate(const FamilySpec& spec, const QpOptions& opts) {
  if (spec.n < 1) throw ValidationError("generate: n must be positive");
  if (spec.r_a < 1 || spec.r_b < 1)
    throw ValidationError("generate: ranks must be >= 1");
  if (spec.r_a > spec.n || spec.r_b > spec.n)
    throw ValidationError("generate: rank exceeds dimension");

  Rng rng(spec.seed ^ (static_cast<std::uint64_t>(spec.n) << 32) ^
          static_cast<std::uint64_t>(spec.family));
  ProblemInstance inst;
  switch (spec.family) {
    case Family::NsdPsd: inst = make_nsd_psd(rng, spec, opts); break;
    case Family::SparsePositive:
      inst = make_sparse_positive(rng, spec, opts);
      break;
    case Family::DiagSign: inst = make_diag_sign(rng, spec, opts); break;
    case Family::AdversarialPieces:
      inst = make_adversarial(rng, spec, opts);
      break;
  }
  return ensure_nonnegative_root(validate_instance(inst, opts), opts);
}

}  // namespace fracqp
