#pragma once

// Independent checkers for planner outputs. Everything here re-derives its
// expectation from the decomposition and the declared policy/capabilities
// without calling into the planner's rendering helpers, so a planner bug
// cannot hide behind shared code. Checkers return human-readable failure
// messages; an empty vector means the property holds.

#include <string>
#include <vector>

#include "decot/ir.hpp"
#include "decot/planner.hpp"

namespace decot::testsupport {

/// Brute-force sort-and-cut re-implementation of the fused drop rule:
/// effective weight ascending, ties latest span start first, then largest
/// unit id. Returns the expected truncated ids in drop order.
std::vector<std::string> oracle_truncation_ids(const ir::DecompositionResult& result,
                                               const planner::WeightPolicy& policy,
                                               const planner::BackendCapabilities& caps);

/// Fused plans: unit_weights keys and truncated ids partition the unit-id set.
std::vector<std::string> check_fused_accounting(const ir::DecompositionResult& result,
                                                const ir::PromptPlan& plan);

/// No negative unit's normalized text occurs in any positive prompt text.
std::vector<std::string> check_negative_isolation(const ir::DecompositionResult& result,
                                                  const ir::PromptPlan& plan);

/// Every rendered prompt (fused, or per stage) fits the word budget.
std::vector<std::string> check_budget(const ir::PromptPlan& plan, int max_words);

/// Staged plans: contiguous 1-based indices, base-first roles, and stage
/// unit_id sets that partition exactly the positive units.
std::vector<std::string> check_staged_shape(const ir::DecompositionResult& result,
                                            const ir::PromptPlan& plan);

}  // namespace decot::testsupport
