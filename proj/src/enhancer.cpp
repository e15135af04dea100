#include "decot/enhancer.hpp"

#include <algorithm>

#include "decot/errors.hpp"

namespace decot::enhancer {

namespace {

using ir::Provenance;
using ir::SemanticUnit;
using ir::UnitCategory;

bool eligible(const SemanticUnit& unit) {
  return unit.polarity == ir::Polarity::Positive &&
         (unit.category == UnitCategory::CoreObject ||
          unit.category == UnitCategory::Background ||
          unit.category == UnitCategory::Environment);
}

}  // namespace

std::string_view to_string(EnhancementMode v) {
  switch (v) {
    case EnhancementMode::Off: return "off";
    case EnhancementMode::Lexicon: return "lexicon";
    case EnhancementMode::Llm: return "llm";
  }
  return "?";
}

std::optional<EnhancementMode> enhancement_mode_from_string(std::string_view s) {
  std::string key = lex::to_lower(std::string(s));
  if (key == "off") return EnhancementMode::Off;
  if (key == "lexicon") return EnhancementMode::Lexicon;
  if (key == "llm") return EnhancementMode::Llm;
  return std::nullopt;
}

std::string build_enhancement_prompt(const std::string& unit_text) {
  return "Rewrite the fragment below into a more specific, more detailed "
         "description of the same content. Reply with the rewritten fragment "
         "only.\nFragment: " +
         unit_text;
}

EnhanceOutcome enhance(const ir::DecompositionResult& result,
                       const EnhancementPolicy& policy,
                       const lex::ExpansionLexicon& expansion,
                       backends::LlmBackend* llm, backends::Cache* cache,
                       const backends::RetryPolicy& retry) {
  if (policy.max_expansion_ratio <= 1.0) {
    throw ConfigError("max_expansion_ratio must be greater than 1");
  }
  EnhanceOutcome outcome;
  outcome.result = result;
  if (policy.mode == EnhancementMode::Off) return outcome;
  if (policy.mode == EnhancementMode::Llm && llm == nullptr) {
    throw InvalidArgument("llm enhancement mode requires a backend");
  }

  for (SemanticUnit& unit : outcome.result.units) {
    if (!eligible(unit)) continue;

    if (policy.mode == EnhancementMode::Lexicon) {
      auto rules = expansion.match(unit.text);
      if (rules.empty()) continue;
      for (const lex::ExpansionRule* rule : rules) {
        for (const auto& [key, value] : rule->attributes) unit.attributes[key] = value;
      }
      unit.provenance = Provenance::Enhanced;
      ++outcome.enhanced_count;
      continue;
    }

    // Llm mode
    std::string prompt = build_enhancement_prompt(unit.text);
    std::string rewritten = lex::trim(backends::llm_complete(*llm, prompt, cache, retry));
    if (rewritten.empty()) continue;
    double ratio = static_cast<double>(rewritten.size()) /
                   static_cast<double>(std::max<std::size_t>(1, unit.text.size()));
    if (ratio > policy.max_expansion_ratio) {
      ++outcome.overflow_count;  // rewrite dropped, unit kept unenhanced
      continue;
    }
    unit.text = rewritten;
    unit.provenance = Provenance::Enhanced;
    ++outcome.enhanced_count;
  }
  return outcome;
}

}  // namespace decot::enhancer
