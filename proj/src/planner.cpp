#include "decot/planner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "decot/errors.hpp"
#include "decot/lexicon.hpp"

namespace decot::planner {

namespace {

using ir::Polarity;
using ir::SemanticUnit;
using ir::UnitCategory;

int category_priority(UnitCategory category) {
  switch (category) {
    case UnitCategory::CoreObject: return 0;
    case UnitCategory::SpatialComposition: return 1;
    case UnitCategory::Background: return 2;
    case UnitCategory::Environment: return 3;
    case UnitCategory::Constraint: return 4;  // positive constraints render last
  }
  return 5;
}

std::size_t span_start(const SemanticUnit& unit) {
  return unit.source_span ? unit.source_span->start
                          : std::numeric_limits<std::size_t>::max();
}

std::size_t span_end(const SemanticUnit& unit) {
  return unit.source_span ? unit.source_span->end
                          : std::numeric_limits<std::size_t>::max();
}

/// Source order: span position, then unit id for spanless (enhanced) units.
bool source_before(const SemanticUnit& a, const SemanticUnit& b) {
  if (span_start(a) != span_start(b)) return span_start(a) < span_start(b);
  if (span_end(a) != span_end(b)) return span_end(a) < span_end(b);
  return a.unit_id < b.unit_id;
}

bool render_before(const SemanticUnit& a, const SemanticUnit& b) {
  int pa = category_priority(a.category);
  int pb = category_priority(b.category);
  if (pa != pb) return pa < pb;
  return source_before(a, b);
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", w);
  return buf;
}

std::string render_unit(const SemanticUnit& unit, const WeightPolicy& policy,
                        const BackendCapabilities& caps) {
  if (!caps.supports_weight_syntax) return unit.text;
  return "(" + unit.text + ":" + format_weight(effective_weight(unit, policy)) + ")";
}

struct RenderedPrompt {
  std::string text;
  std::vector<std::string> kept_ids;     // render order
  std::vector<std::string> dropped_ids;  // drop order
};

/// Renders `units` (already in render order) under the word budget, dropping
/// whole units lowest-effective-weight-first, ties broken latest-source-first.
RenderedPrompt render_under_budget(std::vector<const SemanticUnit*> units,
                                   const WeightPolicy& policy,
                                   const BackendCapabilities& caps) {
  RenderedPrompt out;
  std::vector<int> words(units.size());
  int total = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    words[i] = word_count(render_unit(*units[i], policy, caps));
    total += words[i];
  }
  std::vector<bool> kept(units.size(), true);
  while (total > caps.max_prompt_words) {
    std::size_t victim = units.size();
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (!kept[i]) continue;
      if (victim == units.size()) {
        victim = i;
        continue;
      }
      double wi = effective_weight(*units[i], policy);
      double wv = effective_weight(*units[victim], policy);
      if (wi != wv) {
        if (wi < wv) victim = i;
        continue;
      }
      if (span_start(*units[i]) != span_start(*units[victim])) {
        if (span_start(*units[i]) > span_start(*units[victim])) victim = i;
        continue;
      }
      if (units[i]->unit_id > units[victim]->unit_id) victim = i;
    }
    if (victim == units.size()) break;  // nothing left to drop
    kept[victim] = false;
    total -= words[victim];
    out.dropped_ids.push_back(units[victim]->unit_id);
  }
  std::string text;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!kept[i]) continue;
    if (!text.empty()) text += ", ";
    text += render_unit(*units[i], policy, caps);
    out.kept_ids.push_back(units[i]->unit_id);
  }
  out.text = std::move(text);
  return out;
}

std::string render_negative(const std::vector<const SemanticUnit*>& negatives) {
  std::vector<const SemanticUnit*> ordered = negatives;
  std::sort(ordered.begin(), ordered.end(),
            [](const SemanticUnit* a, const SemanticUnit* b) { return source_before(*a, *b); });
  std::string text;
  for (const SemanticUnit* unit : ordered) {
    std::string stripped = strip_negation_prefix(unit->text);
    if (stripped.empty()) continue;
    if (!text.empty()) text += ", ";
    text += stripped;
  }
  return text;
}

void split_polarity(const ir::DecompositionResult& result,
                    std::vector<const SemanticUnit*>& positives,
                    std::vector<const SemanticUnit*>& negatives) {
  for (const auto& unit : result.units) {
    (unit.polarity == Polarity::Positive ? positives : negatives).push_back(&unit);
  }
}

void check_caps(const BackendCapabilities& caps) {
  if (caps.max_prompt_words < kMinPromptWords) {
    throw InvalidArgument("max_prompt_words must be at least " +
                          std::to_string(kMinPromptWords));
  }
}

}  // namespace

WeightPolicy WeightPolicy::defaults() {
  WeightPolicy policy;
  policy.category_multipliers = {
      {UnitCategory::CoreObject, 1.3},
      {UnitCategory::SpatialComposition, 1.2},
      {UnitCategory::Background, 1.0},
      {UnitCategory::Environment, 1.0},
      {UnitCategory::Constraint, 1.0},
  };
  return policy;
}

double WeightPolicy::multiplier(UnitCategory category) const {
  auto it = category_multipliers.find(category);
  return it == category_multipliers.end() ? 1.0 : it->second;
}

double effective_weight(const SemanticUnit& unit, const WeightPolicy& policy) {
  double composed = unit.weight * policy.multiplier(unit.category);
  composed = std::clamp(composed, ir::kMinWeight, ir::kMaxWeight);
  return ir::round2_half_up(composed);
}

int word_count(const std::string& text) {
  int count = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::string strip_negation_prefix(const std::string& text) {
  std::string trimmed = lex::trim(text);
  std::string lowered = lex::to_lower(trimmed);
  for (const char* prefix : {"no ", "without "}) {
    std::size_t n = std::string(prefix).size();
    if (lowered.size() > n && lowered.compare(0, n, prefix) == 0) {
      return lex::trim(trimmed.substr(n));
    }
  }
  return trimmed;
}

ir::PromptPlan fuse(const ir::DecompositionResult& result,
                    const WeightPolicy& policy, const BackendCapabilities& caps) {
  check_caps(caps);
  std::vector<const SemanticUnit*> positives, negatives;
  split_polarity(result, positives, negatives);
  if (positives.empty()) {
    throw EmptyPlan("no positive units to render for instruction '" +
                    result.instruction_id + "'");
  }
  std::sort(positives.begin(), positives.end(),
            [](const SemanticUnit* a, const SemanticUnit* b) { return render_before(*a, *b); });

  RenderedPrompt rendered = render_under_budget(positives, policy, caps);

  ir::FusedPlan plan;
  plan.prompt_text = rendered.text;
  plan.negative_prompt_text = render_negative(negatives);
  plan.truncated_unit_ids = rendered.dropped_ids;
  for (const auto& unit : result.units) {
    bool truncated = std::find(rendered.dropped_ids.begin(), rendered.dropped_ids.end(),
                               unit.unit_id) != rendered.dropped_ids.end();
    if (!truncated) plan.unit_weights[unit.unit_id] = effective_weight(unit, policy);
  }
  return ir::PromptPlan{std::move(plan)};
}

ir::PromptPlan stage(const ir::DecompositionResult& result,
                     const BackendCapabilities& caps, const WeightPolicy& policy) {
  check_caps(caps);
  if (!caps.supports_staged_refinement) {
    throw InvalidArgument("backend does not support staged refinement");
  }
  std::vector<const SemanticUnit*> positives, negatives;
  split_polarity(result, positives, negatives);
  if (positives.empty()) {
    throw EmptyPlan("no positive units to render for instruction '" +
                    result.instruction_id + "'");
  }

  auto default_bucket = [](UnitCategory category) {
    switch (category) {
      case UnitCategory::CoreObject:
      case UnitCategory::Background: return 1;
      case UnitCategory::SpatialComposition: return 2;
      case UnitCategory::Environment:
      case UnitCategory::Constraint: return 3;
    }
    return 1;
  };

  std::vector<std::vector<const SemanticUnit*>> buckets(4);  // 1..3 used
  for (const SemanticUnit* unit : positives) {
    int bucket = default_bucket(unit->category);
    if (unit->stage_hint && *unit->stage_hint >= 1 && *unit->stage_hint <= 3) {
      bucket = *unit->stage_hint;
    }
    buckets[static_cast<std::size_t>(bucket)].push_back(unit);
  }

  std::string negative = render_negative(negatives);
  ir::StagedPlan plan;
  for (int bucket = 1; bucket <= 3; ++bucket) {
    auto& members = buckets[static_cast<std::size_t>(bucket)];
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(),
              [](const SemanticUnit* a, const SemanticUnit* b) { return render_before(*a, *b); });
    RenderedPrompt rendered = render_under_budget(members, policy, caps);
    ir::PlanStage stage;
    stage.index = static_cast<int>(plan.stages.size()) + 1;
    stage.role = plan.stages.empty() ? ir::StageRole::Base : ir::StageRole::Refine;
    stage.prompt_text = rendered.text;
    stage.negative_prompt_text = negative;
    for (const SemanticUnit* unit : members) stage.unit_ids.push_back(unit->unit_id);
    plan.stages.push_back(std::move(stage));
  }
  return ir::PromptPlan{std::move(plan)};
}

ir::PromptPlan plan(const ir::DecompositionResult& result,
                    const BackendCapabilities& caps, const WeightPolicy& policy,
                    bool adaptive) {
  if (adaptive && caps.supports_staged_refinement) {
    return stage(result, caps, policy);
  }
  return fuse(result, policy, caps);
}

}  // namespace decot::planner
