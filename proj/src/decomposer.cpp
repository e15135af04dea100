#include "decot/decomposer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "decot/errors.hpp"
#include "decot/planner.hpp"

namespace decot::decomposer {

namespace {

using ir::Polarity;
using ir::Provenance;
using ir::PromptingStrategy;
using ir::SemanticUnit;
using ir::UnitCategory;

constexpr std::string_view kFenceOpen = "```units";
constexpr std::string_view kFenceClose = "```";

std::string block_category_name(UnitCategory category) {
  switch (category) {
    case UnitCategory::CoreObject: return "CoreObject";
    case UnitCategory::Background: return "Background";
    case UnitCategory::SpatialComposition: return "SpatialComposition";
    case UnitCategory::Environment: return "Environment";
    case UnitCategory::Constraint: return "Constraint";
  }
  return "?";
}

std::string format_double(double v) { return nlohmann::json(v).dump(); }

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string lower_find_haystack(const std::string& s) { return lex::to_lower(s); }

bool parse_size(const std::string& s, std::size_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  out = static_cast<std::size_t>(v);
  return true;
}

bool parse_weight(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Templates
// ---------------------------------------------------------------------------

DecompositionTemplate DecompositionTemplate::builtin() {
  DecompositionTemplate tmpl;
  tmpl.system_text =
      "You decompose text-to-image instructions into categorized semantic units "
      "before any image is generated. Identify core objects and their attributes, "
      "background details, spatial relationships and composition, environmental "
      "elements such as lighting, texture and style, and explicit constraints or "
      "exclusions. When a phrase is vague, clarify it with the most specific "
      "description the surrounding context supports.";
  tmpl.output_grammar_note =
      "Reply with a fenced block labelled `units`. Inside the block write one unit "
      "per line as: category | polarity | weight | text | span. Category is one of "
      "CoreObject, Background, SpatialComposition, Environment, Constraint. "
      "Polarity is + or -. Weight is a decimal between 0.25 and 2.0. Span is "
      "start:end character offsets into the instruction, or - when unknown.";
  tmpl.cot_directive =
      "Think step by step before answering: list the distinct elements of the "
      "instruction, resolve ambiguous phrasing, then write the final unit block.";
  tmpl.exemplars = {
      {"a cat wearing a red hat sits to the left of the vase in a sunny garden",
       "```units\n"
       "CoreObject | + | 1.0 | a cat wearing a red hat | 0:23\n"
       "SpatialComposition | + | 1.0 | the cat sits to the left of the vase | 24:52\n"
       "Background | + | 1.0 | in a sunny garden | 53:70\n"
       "```"},
      {"a wooden cabin in a snowy forest, soft lighting, no people",
       "```units\n"
       "Background | + | 1.0 | a wooden cabin in a snowy forest | 0:32\n"
       "Environment | + | 1.0 | soft lighting | 34:47\n"
       "Constraint | - | 1.0 | no people | 49:58\n"
       "```"},
      {"a large building at night",
       "```units\n"
       "CoreObject | + | 1.3 | a towering skyscraper with glass facades and a modern design | 0:16\n"
       "Environment | + | 1.0 | at night | 17:25\n"
       "```"},
  };
  return tmpl;
}

DecompositionTemplate DecompositionTemplate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();

  DecompositionTemplate tmpl;
  tmpl.output_grammar_note = builtin().output_grammar_note;  // default when no [grammar]

  std::string section;
  std::vector<std::string> body;
  auto flush = [&]() {
    while (!body.empty() && lex::trim(body.back()).empty()) body.pop_back();
    std::string text;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i > 0) text += "\n";
      text += body[i];
    }
    if (section == "system") {
      tmpl.system_text = text;
    } else if (section == "cot") {
      tmpl.cot_directive = text;
    } else if (section == "grammar") {
      tmpl.output_grammar_note = text;
    } else if (section == "exemplar") {
      Exemplar ex;
      std::vector<std::string> lines = split_lines(text);
      std::size_t i = 0;
      for (; i < lines.size(); ++i) {
        std::string line = lex::trim(lines[i]);
        if (line.rfind("instruction:", 0) == 0) {
          ex.instruction = lex::trim(line.substr(std::string("instruction:").size()));
        } else if (line == "output:") {
          ++i;
          break;
        }
      }
      std::string output;
      for (; i < lines.size(); ++i) {
        if (!output.empty()) output += "\n";
        output += lines[i];
      }
      ex.output = output;
      if (ex.instruction.empty() || ex.output.empty()) {
        throw FormatError("template exemplar needs 'instruction:' and 'output:' entries");
      }
      tmpl.exemplars.push_back(std::move(ex));
    } else if (!section.empty()) {
      throw FormatError("template: unknown section [" + section + "]");
    }
    body.clear();
  };

  std::string line;
  while (std::getline(buffer, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = lex::trim(line);
    if (trimmed.size() >= 2 && trimmed.front() == '[' && trimmed.back() == ']') {
      flush();
      section = lex::to_lower(trimmed.substr(1, trimmed.size() - 2));
      continue;
    }
    body.push_back(line);
  }
  flush();
  if (tmpl.system_text.empty()) throw FormatError("template: missing [system] section");
  return tmpl;
}

std::string build_decomposition_prompt(const ir::Instruction& instruction,
                                       PromptingStrategy strategy,
                                       const DecompositionTemplate& tmpl) {
  bool few_shot = strategy != PromptingStrategy::ZeroShot;
  if (few_shot && tmpl.exemplars.empty()) {
    throw MissingExemplars("strategy '" + std::string(ir::to_string(strategy)) +
                           "' requires a non-empty exemplar set");
  }
  std::vector<std::string> parts;
  parts.push_back(tmpl.system_text);
  parts.push_back(tmpl.output_grammar_note);
  if (few_shot) {
    for (const Exemplar& ex : tmpl.exemplars) {
      parts.push_back("Example instruction: " + ex.instruction +
                      "\nExample decomposition:\n" + ex.output);
    }
  }
  if (strategy == PromptingStrategy::FewShotCoT && tmpl.cot_directive) {
    parts.push_back(*tmpl.cot_directive);
  }
  parts.push_back("Instruction: " + instruction.text);

  std::string prompt;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) prompt += "\n\n";
    prompt += parts[i];
  }
  prompt += "\n";
  return prompt;
}

// ---------------------------------------------------------------------------
// Structured block format
// ---------------------------------------------------------------------------

std::string format_units(const ir::DecompositionResult& result) {
  std::string out{kFenceOpen};
  out += "\n";
  for (const SemanticUnit& unit : result.units) {
    out += block_category_name(unit.category);
    out += " | ";
    out += unit.polarity == Polarity::Positive ? "+" : "-";
    out += " | ";
    out += format_double(unit.weight);
    out += " | ";
    out += unit.text;
    out += " | ";
    if (unit.source_span) {
      out += std::to_string(unit.source_span->start) + ":" +
             std::to_string(unit.source_span->end);
    } else {
      out += "-";
    }
    out += "\n";
  }
  out += kFenceClose;
  return out;
}

ParseOutcome parse_llm_units(const std::string& raw, const ir::Instruction& instruction) {
  std::vector<std::string> lines = split_lines(raw);
  std::size_t open = lines.size();
  std::size_t close = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lex::trim(lines[i]) == kFenceOpen) {
      open = i;
      break;
    }
  }
  if (open < lines.size()) {
    for (std::size_t i = open + 1; i < lines.size(); ++i) {
      if (lex::trim(lines[i]) == kFenceClose) {
        close = i;
        break;
      }
    }
  }
  if (open >= lines.size() || close >= lines.size()) {
    throw ParseError("no fenced unit block found in response");
  }

  ParseOutcome outcome;
  std::vector<SemanticUnit> units;
  for (std::size_t i = open + 1; i < close; ++i) {
    std::string line = lex::trim(lines[i]);
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t bar = line.find('|', pos);
      fields.push_back(lex::trim(bar == std::string::npos ? line.substr(pos)
                                                          : line.substr(pos, bar - pos)));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    if (fields.size() != 4 && fields.size() != 5) {
      ++outcome.skipped_lines;
      continue;
    }
    auto category = ir::category_from_string(fields[0]);
    auto polarity = ir::polarity_from_string(fields[1]);
    double weight = 0.0;
    bool weight_ok = parse_weight(fields[2], weight);
    const std::string& text = fields[3];
    if (!category || !polarity || !weight_ok || text.empty()) {
      ++outcome.skipped_lines;
      continue;
    }

    SemanticUnit unit;
    unit.category = *category;
    unit.polarity = *polarity;
    unit.weight = weight;
    unit.text = text;
    unit.provenance = Provenance::Raw;

    bool span_ok = true;
    if (fields.size() == 5 && fields[4] != "-" && !fields[4].empty()) {
      std::size_t colon = fields[4].find(':');
      std::size_t start = 0, end = 0;
      if (colon == std::string::npos || !parse_size(fields[4].substr(0, colon), start) ||
          !parse_size(fields[4].substr(colon + 1), end)) {
        span_ok = false;
      } else {
        unit.source_span = ir::SourceSpan{start, end};
      }
    }
    if (!span_ok) {
      ++outcome.skipped_lines;
      continue;
    }
    if (!unit.source_span) {
      // Locate the unit text in the instruction, case-insensitively.
      std::string haystack = lower_find_haystack(instruction.text);
      std::string needle = lex::to_lower(text);
      std::size_t found = haystack.find(needle);
      if (found != std::string::npos) {
        unit.source_span = ir::SourceSpan{found, found + needle.size()};
      }
    }
    units.push_back(std::move(unit));
  }

  if (units.empty()) {
    throw ParseError("no valid unit lines in block (skipped " +
                     std::to_string(outcome.skipped_lines) + ")");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    units[i].unit_id = "u" + std::to_string(i + 1);
  }
  outcome.result.instruction_id = instruction.id;
  outcome.result.units = std::move(units);
  outcome.result.coverage_fraction =
      ir::recompute_coverage(outcome.result.units, instruction.text.size());

  ir::ValidationReport report = ir::validate(outcome.result, instruction);
  if (!report.empty()) {
    throw ValidationError("parsed units violate IR invariants:\n" + report.to_text());
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Rule-based decomposition
// ---------------------------------------------------------------------------

std::vector<ClauseSpan> split_clauses(const std::string& text) {
  struct Segment {
    std::size_t start, end;
  };
  static const std::string kConjunctions[] = {"and", "while", "with"};

  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };

  // Collect raw segments between separators.
  std::vector<Segment> segments;
  std::size_t seg_start = 0;
  std::size_t i = 0;
  const std::string lowered = lex::to_lower(text);
  while (i < text.size()) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?' || c == ',') {
      segments.push_back({seg_start, i});
      ++i;
      seg_start = i;
      continue;
    }
    bool at_word_start = is_word_char(c) && (i == 0 || !is_word_char(text[i - 1]));
    if (at_word_start) {
      bool matched = false;
      for (const std::string& conj : kConjunctions) {
        if (lowered.compare(i, conj.size(), conj) == 0) {
          std::size_t after = i + conj.size();
          if (after >= text.size() || !is_word_char(text[after])) {
            segments.push_back({seg_start, i});
            i = after;
            seg_start = i;
            matched = true;
            break;
          }
        }
      }
      if (matched) continue;
    }
    ++i;
  }
  segments.push_back({seg_start, text.size()});

  auto trimmed_clause = [&](std::size_t start, std::size_t end) -> ClauseSpan {
    while (start < end && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
    while (end > start && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return {start, end, text.substr(start, end - start)};
  };

  std::vector<ClauseSpan> candidates;
  for (const Segment& seg : segments) {
    ClauseSpan clause = trimmed_clause(seg.start, seg.end);
    if (!clause.text.empty()) candidates.push_back(std::move(clause));
  }

  // Fragments shorter than two words merge into their neighbour.
  std::vector<ClauseSpan> clauses;
  std::optional<ClauseSpan> pending;
  for (const ClauseSpan& candidate : candidates) {
    ClauseSpan current = candidate;
    if (pending) {
      current = trimmed_clause(pending->start, current.end);
      pending.reset();
    }
    if (planner::word_count(current.text) >= 2) {
      clauses.push_back(std::move(current));
    } else if (!clauses.empty()) {
      clauses.back() = trimmed_clause(clauses.back().start, current.end);
    } else {
      pending = std::move(current);
    }
  }
  if (pending) clauses.push_back(std::move(*pending));
  return clauses;
}

ir::DecompositionResult rule_decompose(const ir::Instruction& instruction,
                                       const lex::Lexicon& lexicon) {
  if (lex::trim(instruction.text).empty()) {
    throw EmptyInstruction("instruction '" + instruction.id + "' is empty");
  }
  std::vector<ClauseSpan> clauses = split_clauses(instruction.text);
  if (clauses.empty()) {
    // Separator-only text still yields one clause covering the trimmed body.
    std::size_t b = instruction.text.find_first_not_of(" \t\r\n");
    std::size_t e = instruction.text.find_last_not_of(" \t\r\n") + 1;
    clauses.push_back({b, e, instruction.text.substr(b, e - b)});
  }

  ir::DecompositionResult result;
  result.instruction_id = instruction.id;
  result.strategy = PromptingStrategy::ZeroShot;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    SemanticUnit unit;
    unit.unit_id = "u" + std::to_string(i + 1);
    unit.text = clauses[i].text;
    unit.source_span = ir::SourceSpan{clauses[i].start, clauses[i].end};
    auto cls = lexicon.classify(clauses[i].text);
    if (!cls) {
      unit.category = UnitCategory::CoreObject;
    } else {
      switch (*cls) {
        case lex::TermClass::Negation:
          unit.category = UnitCategory::Constraint;
          unit.polarity = Polarity::Negative;
          break;
        case lex::TermClass::Spatial:
          unit.category = UnitCategory::SpatialComposition;
          break;
        case lex::TermClass::Scene:
          unit.category = UnitCategory::Background;
          break;
        case lex::TermClass::Environment:
          unit.category = UnitCategory::Environment;
          break;
      }
    }
    result.units.push_back(std::move(unit));
  }
  result.coverage_fraction = ir::recompute_coverage(result.units, instruction.text.size());
  return result;
}

// ---------------------------------------------------------------------------
// LLM decomposition
// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> extract_reasoning(const std::string& raw) {
  std::size_t fence = raw.find(kFenceOpen);
  if (fence == std::string::npos) return std::nullopt;
  std::string head = lex::trim(raw.substr(0, fence));
  if (head.empty()) return std::nullopt;
  return head;
}

}  // namespace

ir::DecompositionResult llm_decompose(const ir::Instruction& instruction,
                                      PromptingStrategy strategy, const LlmContext& ctx) {
  std::string prompt = build_decomposition_prompt(instruction, strategy, ctx.tmpl);
  std::string raw = backends::llm_complete(ctx.llm, prompt, ctx.cache, ctx.retry);

  ParseOutcome outcome = parse_llm_units(raw, instruction);
  ir::DecompositionResult result = std::move(outcome.result);
  result.strategy = strategy;
  if (strategy == PromptingStrategy::FewShotCoT) {
    result.cot_trace = extract_reasoning(raw);
  }
  ir::LlmMeta meta;
  meta.model_id = ctx.llm.model_id();
  meta.prompt_tokens = planner::word_count(prompt);
  meta.completion_tokens = planner::word_count(raw);
  result.llm_meta = std::move(meta);
  return result;
}

}  // namespace decot::decomposer
