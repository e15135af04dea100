#pragma once

// Compiles a decomposition result into a prompt plan. A plan is either a
// single fused prompt with per-unit emphasis weights and a negative section,
// or a staged sequence: a base stage for core objects and background, then
// refinement stages for spatial composition and environment detail. The
// choice is adaptive on the target backend's declared capabilities.

#include <map>
#include <string>

#include "decot/ir.hpp"

namespace decot::planner {

struct BackendCapabilities {
  bool supports_staged_refinement = false;
  int max_prompt_words = 256;  // whitespace-delimited word budget per prompt
  bool supports_weight_syntax = false;

  bool operator==(const BackendCapabilities&) const = default;
};

inline constexpr int kMinPromptWords = 16;

/// Per-category emphasis multipliers composed with unit weights. The
/// composed value is clamped to [0.25, 2.0] and rounded to 2 decimals.
struct WeightPolicy {
  std::map<ir::UnitCategory, double> category_multipliers;

  static WeightPolicy defaults();
  double multiplier(ir::UnitCategory category) const;

  bool operator==(const WeightPolicy&) const = default;
};

/// Dispatch: staged when `adaptive` and the backend supports refinement,
/// fused otherwise. `adaptive = false` forces the fused path regardless of
/// capabilities (the no-adaptive ablation).
ir::PromptPlan plan(const ir::DecompositionResult& result,
                    const BackendCapabilities& caps, const WeightPolicy& policy,
                    bool adaptive);

/// Single optimized prompt. Positive units are ordered by category priority
/// (core objects, spatial, background, environment, then positive
/// constraints) and source position, rendered with `(text:w)` emphasis when
/// the backend supports it, and dropped lowest-effective-weight-first (ties:
/// latest source position first) until the rendered prompt fits the word
/// budget. Negative units form the negative prompt with leading "no "/
/// "without " stripped. Throws EmptyPlan when no positive units exist.
ir::PromptPlan fuse(const ir::DecompositionResult& result,
                    const WeightPolicy& policy, const BackendCapabilities& caps);

/// Staged sequence: stage 1 (base) carries core objects and background,
/// stage 2 spatial composition, stage 3 environment plus positive
/// constraints. A unit's stage_hint (1..3) overrides its default stage.
/// Empty stages are omitted and indices renumbered from 1; the first stage
/// is the base, all later stages refine. Every stage shares the full
/// negative prompt. Stage prompts are rendered by the fuse rules restricted
/// to the stage's units under the same word budget; stage unit_ids always
/// list the full assigned set.
ir::PromptPlan stage(const ir::DecompositionResult& result,
                     const BackendCapabilities& caps, const WeightPolicy& policy);

/// clamp(unit.weight * category multiplier) rounded to 2 decimals.
double effective_weight(const ir::SemanticUnit& unit, const WeightPolicy& policy);

/// Whitespace-delimited word count.
int word_count(const std::string& text);

/// Strips one leading "no " or "without " marker (case-insensitive).
std::string strip_negation_prefix(const std::string& text);

}  // namespace decot::planner
