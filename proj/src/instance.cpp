#include "fracqp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracqp/errors.hpp"

namespace fracqp {

namespace {

std::string witness_string(const SignVector& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << (i ? "," : "") << (x[i] > 0 ? "1" : "-1");
  os << ")";
  return os.str();
}

}  // namespace

ValidatedInstance validate_instance(const ProblemInstance& raw,
                                    const QpOptions& opts) {
  if (raw.n <= 0) throw ValidationError("instance: n must be positive");
  if (raw.A.dim != raw.n || raw.B.dim != raw.n)
    throw ValidationError("instance: A/B dimension mismatch with n");
  raw.A.check("A");
  raw.B.check("B");

  ValidatedInstance out;
  out.inst = raw;

  const bool b_psd = std::all_of(
      raw.B.pairs.begin(), raw.B.pairs.end(),
      [](const EigenPair& p) { return p.eigenvalue >= 0.0; });
  if (b_psd && raw.beta > 0.0) {
    out.cert = PositivityCert::PsdBeta;
    out.denom_lower_bound = raw.beta;
    return out;
  }

  if (raw.n > opts.brute_limit)
    throw ValidationError(
        "instance: denominator positivity uncertifiable (B not PSD with "
        "positive beta, and n=" +
        std::to_string(raw.n) + " exceeds the brute-force limit " +
        std::to_string(opts.brute_limit) + ")");

  QpSolution denom_min = solve_qp_brute(as_gram(raw.B, raw.beta), nullptr, opts);
  if (denom_min.min_value <= 0.0)
    throw ValidationError(
        "instance: denominator nonpositive at witness x=" +
        witness_string(denom_min.argmin) + " (value " +
        std::to_string(denom_min.min_value) + ")");
  out.cert = PositivityCert::Enumerated;
  out.denom_lower_bound = denom_min.min_value;
  return out;
}

NormalizedInstance ensure_nonnegative_root(const ValidatedInstance& vi,
                                           const QpOptions& opts) {
  const ProblemInstance& inst = vi.inst;
  NormalizedInstance out;
  out.vi = vi;
  out.gamma = 0.0;

  const double f0 =
      solve_qp(as_gram(inst.A, inst.alpha), Engine::Auto, opts).min_value;
  if (f0 >= 0.0) return out;

  const bool b_psd = std::all_of(
      inst.B.pairs.begin(), inst.B.pairs.end(),
      [](const EigenPair& p) { return p.eigenvalue >= 0.0; });

  double gamma;
  if (b_psd && inst.beta > 0.0) {
    // min_x x^T B x >= 0, so gamma * beta cancels the deficit.
    gamma = -f0 / inst.beta;
  } else if (inst.n <= opts.brute_limit) {
    // Exact: shift by the negative part of the optimal ratio.
    double best = std::numeric_limits<double>::infinity();
    SignVector x(inst.n, +1);
    const std::uint64_t total = std::uint64_t{1} << inst.n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (int i = 0; i < inst.n; ++i) x[i] = (mask >> i) & 1u ? -1 : +1;
      best = std::min(best, inst.ratio(x));
    }
    gamma = std::max(0.0, -best);
  } else {
    throw ValidationError(
        "ensure_nonnegative_root: cannot certify a shift (B indefinite and "
        "n over the brute-force limit)");
  }

  GramForm shifted = as_gram(inst.A, 0.0);
  for (const auto& p : inst.B.pairs)
    shifted.terms.push_back({gamma * p.eigenvalue, p.vector});
  ProblemInstance shifted_inst = inst;
  shifted_inst.A = eigen_from_gram(shifted);
  shifted_inst.alpha = inst.alpha + gamma * inst.beta;

  out.vi = validate_instance(shifted_inst, opts);
  out.gamma = gamma;
  return out;
}

HomogenizedForms homogenize(const ProblemInstance& inst) {
  return homogenize(inst.A, inst.alpha, inst.B, inst.beta);
}

}  // namespace fracqp
