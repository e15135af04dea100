#pragma once

// Semantic enhancement pass: clarifies vague units with more specific detail.
// Three modes: Off (identity), Lexicon (deterministic attribute expansion
// from a phrase table), and Llm (per-unit rewrite through an LLM backend,
// capped by an expansion ratio). Only core object, background, and
// environment units are eligible; spatial relations and constraints pass
// through verbatim so geometry and negations are never corrupted. The pass
// preserves unit count, order, ids, categories, polarities, weights, and
// source spans, which keeps plan partitioning stable and makes the pass a
// pure toggle for ablations.

#include <string>

#include "decot/backends.hpp"
#include "decot/ir.hpp"
#include "decot/lexicon.hpp"

namespace decot::enhancer {

enum class EnhancementMode { Off, Lexicon, Llm };

std::string_view to_string(EnhancementMode v);
std::optional<EnhancementMode> enhancement_mode_from_string(std::string_view s);

struct EnhancementPolicy {
  EnhancementMode mode = EnhancementMode::Off;
  double max_expansion_ratio = 4.0;  // cap on enhanced length / original length

  bool operator==(const EnhancementPolicy&) const = default;
};

struct EnhanceOutcome {
  ir::DecompositionResult result;
  std::size_t enhanced_count = 0;
  std::size_t overflow_count = 0;  // LLM rewrites dropped for exceeding the cap
};

/// Prompt sent per unit in Llm mode; the mock backend keys on its
/// "Fragment:" marker.
std::string build_enhancement_prompt(const std::string& unit_text);

/// Off returns the input unchanged. Lexicon merges attribute rows of every
/// matching phrase into eligible units. Llm rewrites eligible unit texts; a
/// rewrite longer than max_expansion_ratio x original is dropped (the unit
/// stays unenhanced) and counted. Modified units get provenance Enhanced and
/// keep every other field. Throws InvalidArgument when mode is Llm without a
/// backend, and ConfigError when max_expansion_ratio <= 1.
EnhanceOutcome enhance(const ir::DecompositionResult& result,
                       const EnhancementPolicy& policy,
                       const lex::ExpansionLexicon& expansion,
                       backends::LlmBackend* llm = nullptr,
                       backends::Cache* cache = nullptr,
                       const backends::RetryPolicy& retry = {});

}  // namespace decot::enhancer
