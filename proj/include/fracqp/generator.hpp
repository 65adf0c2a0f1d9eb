#ifndef FRACQP_GENERATOR_HPP
#define FRACQP_GENERATOR_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "fracqp/instance.hpp"

namespace fracqp {

enum class Family {
  NsdPsd,             // A NSD, B PSD: zonotope-dispatchable at any delta >= 0
  SparsePositive,     // one positive A-eigenvector on a small support
  DiagSign,           // diag(A) <= 0 but A indefinite: brute-fallback family
  AdversarialPieces,  // heavy-tailed rank-1 data: many breakpoints in f
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct FamilySpec {
  Family family = Family::NsdPsd;
  int n = 0;
  int r_a = 1;
  int r_b = 1;
  int support = 0;  // sparse_positive only
  std::uint64_t seed = 0;
};

// Deterministic in the seed. Every output is validated, satisfies the
// family's sign hypotheses by construction, and is already in the
// nonnegative-root normal form (gamma = 0).
NormalizedInstance generate(const FamilySpec& spec, const QpOptions& opts = {});

}  // namespace fracqp

#endif
