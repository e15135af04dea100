#pragma once

// Turns an instruction into a decomposition result, either through an LLM
// under a configurable prompting strategy or through the deterministic
// rule-based clause parser used offline and as a fallback.
//
// The LLM exchange uses a line-oriented structured block:
//
//   ```units
//   CoreObject | + | 1.0 | a cat wearing a red hat | 0:23
//   ```
//
// One unit per line: category | polarity | weight | text | span, where span
// is `start:end` character offsets into the instruction or `-` when unknown
// (the parser then locates the text in the instruction). Malformed lines are
// skipped and counted; lines whose parsed values break IR invariants reject
// the whole result.

#include <optional>
#include <string>
#include <vector>

#include "decot/backends.hpp"
#include "decot/ir.hpp"
#include "decot/lexicon.hpp"

namespace decot::decomposer {

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

struct Exemplar {
  std::string instruction;
  std::string output;  // structured unit block demonstrating the expected reply

  bool operator==(const Exemplar&) const = default;
};

struct DecompositionTemplate {
  std::string system_text;
  std::vector<Exemplar> exemplars;
  std::optional<std::string> cot_directive;
  std::string output_grammar_note;  // always rendered

  static DecompositionTemplate builtin();
  /// Sectioned text file: [system], repeated [exemplar] (with `instruction:`
  /// line followed by `output:` and block lines), [cot], [grammar].
  static DecompositionTemplate load(const std::string& path);

  bool operator==(const DecompositionTemplate&) const = default;
};

/// Marker the built-in CoT directive carries; the mock LLM keys its reasoning
/// preamble off this phrase.
inline constexpr std::string_view kCotMarker = "step by step";

/// Renders the full prompt. The instruction text is embedded verbatim; few-
/// shot strategies embed every exemplar and the CoT strategy additionally
/// embeds the directive. Throws MissingExemplars when a few-shot strategy is
/// configured with an empty exemplar list.
std::string build_decomposition_prompt(const ir::Instruction& instruction,
                                       ir::PromptingStrategy strategy,
                                       const DecompositionTemplate& tmpl);

// ---------------------------------------------------------------------------
// Structured block format
// ---------------------------------------------------------------------------

/// Formats the units of a result as the fenced structured block.
std::string format_units(const ir::DecompositionResult& result);

struct ParseOutcome {
  ir::DecompositionResult result;
  std::size_t skipped_lines = 0;  // malformed lines inside the block
};

/// Parses the first fenced unit block in `raw`. Unit ids are assigned u1..un
/// in block order; units without an explicit span get the first
/// case-insensitive occurrence of their text in the instruction. Throws
/// ParseError when no valid unit line exists and ValidationError when parsed
/// units violate IR invariants.
ParseOutcome parse_llm_units(const std::string& raw, const ir::Instruction& instruction);

// ---------------------------------------------------------------------------
// Decomposers
// ---------------------------------------------------------------------------

/// Deterministic clause parser: splits on sentence punctuation, commas, and
/// the conjunctions "and"/"while"/"with"; fragments shorter than two words
/// merge into their neighbour. Each clause is classified by the highest-
/// priority lexicon hit (negation -> negative constraint, then spatial,
/// scene, environment) and defaults to a core object. Pure function of
/// (instruction text, lexicon). Throws EmptyInstruction on whitespace-only
/// input.
ir::DecompositionResult rule_decompose(const ir::Instruction& instruction,
                                       const lex::Lexicon& lexicon);

/// Exposed for tests: clause segmentation with spans into the original text.
struct ClauseSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  bool operator==(const ClauseSpan&) const = default;
};
std::vector<ClauseSpan> split_clauses(const std::string& text);

struct LlmContext {
  backends::LlmBackend& llm;
  const DecompositionTemplate& tmpl;
  backends::Cache* cache = nullptr;
  backends::RetryPolicy retry{};
};

/// build prompt -> complete (cached, retried) -> parse. Records the strategy
/// on the result; populates cot_trace only for the CoT strategy when the
/// response carries a reasoning section before the block; fills llm_meta with
/// the model id and whitespace-token counts.
ir::DecompositionResult llm_decompose(const ir::Instruction& instruction,
                                      ir::PromptingStrategy strategy,
                                      const LlmContext& ctx);

}  // namespace decot::decomposer
