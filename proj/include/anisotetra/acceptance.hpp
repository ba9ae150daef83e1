#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "anisotetra/lattice.hpp"

namespace anisotetra {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  /// Multiplies every sample count; 1 runs the suite at full size.
  double scale = 1.0;
};

inline constexpr int kCriteria = 10;

/// True iff the stencil is the twelve-term expansion of
/// f^4[x_0, Delta^(2,1,1) x_0] = k^4 / 2 * (f(x_211) - 2 f(x_111) + ...).
bool matches_reference_expansion(const std::vector<StencilTerm>& stencil);

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs criteria 1..10 in order, reporting each one as it finishes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  standard position  (1.2 s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace anisotetra
