#include "decot/ir.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace decot::ir {

namespace {

using nlohmann::json;

std::string normalize_token(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s,
                           const std::array<std::pair<std::string_view, Enum>, N>& table) {
  std::string key = normalize_token(s);
  for (const auto& [name, value] : table) {
    if (key == normalize_token(name)) return value;
  }
  return std::nullopt;
}

const json& require_field(const json& j, const char* key, const char* context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string(context) + ": missing field '" + key + "'");
  }
  return *it;
}

void require_record(const json& j, const char* type, const char* context) {
  if (!j.is_object()) throw FormatError(std::string(context) + ": not an object");
  const json& v = require_field(j, "schema_version", context);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw FormatError(std::string(context) + ": unsupported schema_version");
  }
  const json& t = require_field(j, "type", context);
  if (!t.is_string() || t.get<std::string>() != type) {
    throw FormatError(std::string(context) + ": expected type '" + type + "'");
  }
}

std::string get_string(const json& j, const char* key, const char* context) {
  const json& v = require_field(j, key, context);
  if (!v.is_string()) throw FormatError(std::string(context) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const char* context) {
  const json& v = require_field(j, key, context);
  if (!v.is_number()) throw FormatError(std::string(context) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

json parse_json(const std::string& text, const char* context) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FormatError(std::string(context) + ": invalid JSON");
  return j;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rounding and evaluation records
// ---------------------------------------------------------------------------

double round2_half_up(double v) {
  return std::floor(v * 100.0 + 0.5 + 1e-9) / 100.0;
}

EvaluationRecord make_evaluation_record(std::string instruction_id,
                                        const std::array<double, 9>& scores) {
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] < kMinScore - 1e-9 || scores[i] > kMaxScore + 1e-9) {
      throw InvalidArgument("score for dimension '" +
                            std::string(to_string(kAllDimensions[i])) +
                            "' outside [1.0, 5.0]");
    }
    sum += scores[i];
  }
  EvaluationRecord record;
  record.instruction_id = std::move(instruction_id);
  record.scores = scores;
  record.average = round2_half_up(sum / 9.0);
  return record;
}

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

std::string_view to_string(Complexity v) {
  switch (v) {
    case Complexity::Simple: return "simple";
    case Complexity::Medium: return "medium";
    case Complexity::Complex: return "complex";
  }
  return "?";
}

std::string_view to_string(UnitCategory v) {
  switch (v) {
    case UnitCategory::CoreObject: return "core_object";
    case UnitCategory::Background: return "background";
    case UnitCategory::SpatialComposition: return "spatial_composition";
    case UnitCategory::Environment: return "environment";
    case UnitCategory::Constraint: return "constraint";
  }
  return "?";
}

std::string_view to_string(Polarity v) {
  return v == Polarity::Positive ? "positive" : "negative";
}

std::string_view to_string(Provenance v) {
  return v == Provenance::Raw ? "raw" : "enhanced";
}

std::string_view to_string(PromptingStrategy v) {
  switch (v) {
    case PromptingStrategy::ZeroShot: return "zero_shot";
    case PromptingStrategy::FewShot: return "few_shot";
    case PromptingStrategy::FewShotCoT: return "few_shot_cot";
  }
  return "?";
}

std::string_view to_string(StageRole v) {
  return v == StageRole::Base ? "base" : "refine";
}

std::string_view to_string(ImageKind v) {
  switch (v) {
    case ImageKind::File: return "file";
    case ImageKind::Url: return "url";
    case ImageKind::MockDescriptor: return "mock_descriptor";
  }
  return "?";
}

std::string_view to_string(Dimension v) {
  switch (v) {
    case Dimension::Obj: return "obj";
    case Dimension::Backg: return "backg";
    case Dimension::Color: return "color";
    case Dimension::Texture: return "texture";
    case Dimension::Light: return "light";
    case Dimension::Text: return "text";
    case Dimension::Comp: return "comp";
    case Dimension::Pose: return "pose";
    case Dimension::FX: return "fx";
  }
  return "?";
}

std::optional<Complexity> complexity_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, Complexity>, 3> table{{
      {"simple", Complexity::Simple},
      {"medium", Complexity::Medium},
      {"complex", Complexity::Complex},
  }};
  return lookup(s, table);
}

std::optional<UnitCategory> category_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, UnitCategory>, 5> table{{
      {"core_object", UnitCategory::CoreObject},
      {"background", UnitCategory::Background},
      {"spatial_composition", UnitCategory::SpatialComposition},
      {"environment", UnitCategory::Environment},
      {"constraint", UnitCategory::Constraint},
  }};
  return lookup(s, table);
}

std::optional<Polarity> polarity_from_string(std::string_view s) {
  std::string key;
  for (char c : s) {
    if (c == ' ' || c == '\t') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "+" || key == "positive" || key == "pos") return Polarity::Positive;
  if (key == "-" || key == "negative" || key == "neg") return Polarity::Negative;
  return std::nullopt;
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, Provenance>, 2> table{{
      {"raw", Provenance::Raw},
      {"enhanced", Provenance::Enhanced},
  }};
  return lookup(s, table);
}

std::optional<PromptingStrategy> strategy_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, PromptingStrategy>, 3> table{{
      {"zero_shot", PromptingStrategy::ZeroShot},
      {"few_shot", PromptingStrategy::FewShot},
      {"few_shot_cot", PromptingStrategy::FewShotCoT},
  }};
  return lookup(s, table);
}

std::optional<StageRole> stage_role_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, StageRole>, 2> table{{
      {"base", StageRole::Base},
      {"refine", StageRole::Refine},
  }};
  return lookup(s, table);
}

std::optional<ImageKind> image_kind_from_string(std::string_view s) {
  static const std::array<std::pair<std::string_view, ImageKind>, 3> table{{
      {"file", ImageKind::File},
      {"url", ImageKind::Url},
      {"mock_descriptor", ImageKind::MockDescriptor},
  }};
  return lookup(s, table);
}

std::optional<Dimension> dimension_from_string(std::string_view s) {
  for (Dimension d : kAllDimensions) {
    if (normalize_token(s) == normalize_token(to_string(d))) return d;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Clause-set codec
// ---------------------------------------------------------------------------

std::string encode_clauses(const std::vector<Clause>& clauses) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out += "; ";
    out += clauses[i].subject;
    if (!clauses[i].attributes.empty()) {
      out += " [";
      bool first = true;
      for (const auto& [k, v] : clauses[i].attributes) {
        if (!first) out += ", ";
        out += k + "=" + v;
        first = false;
      }
      out += "]";
    }
  }
  return out;
}

std::vector<Clause> decode_clauses(const std::string& text) {
  std::vector<Clause> clauses;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t sep = text.find(';', pos);
    std::string part = trim(sep == std::string::npos ? text.substr(pos)
                                                     : text.substr(pos, sep - pos));
    if (!part.empty()) {
      Clause clause;
      std::size_t open = part.rfind('[');
      if (open != std::string::npos && part.back() == ']') {
        clause.subject = trim(part.substr(0, open));
        std::string attrs = part.substr(open + 1, part.size() - open - 2);
        std::size_t apos = 0;
        while (apos <= attrs.size()) {
          std::size_t comma = attrs.find(',', apos);
          std::string pair = trim(comma == std::string::npos
                                      ? attrs.substr(apos)
                                      : attrs.substr(apos, comma - apos));
          if (!pair.empty()) {
            std::size_t eq = pair.find('=');
            if (eq == std::string::npos) {
              throw FormatError("clause attribute without '=': " + pair);
            }
            clause.attributes[trim(pair.substr(0, eq))] = trim(pair.substr(eq + 1));
          }
          if (comma == std::string::npos) break;
          apos = comma + 1;
        }
      } else {
        clause.subject = part;
      }
      if (clause.subject.empty()) throw FormatError("clause with empty subject");
      clauses.push_back(std::move(clause));
    }
    if (sep == std::string::npos) break;
    pos = sep + 1;
  }
  return clauses;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.code;
    if (!v.unit_id.empty()) out << " [" << v.unit_id << "]";
    out << ": " << v.message << "\n";
  }
  return out.str();
}

double recompute_coverage(const std::vector<SemanticUnit>& units,
                          std::size_t instruction_length) {
  if (instruction_length == 0) return 0.0;
  std::vector<SourceSpan> spans;
  for (const auto& unit : units) {
    if (unit.source_span) spans.push_back(*unit.source_span);
  }
  std::sort(spans.begin(), spans.end());
  std::size_t covered = 0;
  std::size_t cursor = 0;
  for (const auto& span : spans) {
    std::size_t start = std::max(cursor, span.start);
    std::size_t end = std::min(span.end, instruction_length);
    if (end > start) covered += end - start;
    cursor = std::max(cursor, end);
  }
  return static_cast<double>(covered) / static_cast<double>(instruction_length);
}

ValidationReport validate(const DecompositionResult& result,
                          const Instruction& instruction) {
  ValidationReport report;
  auto add = [&report](std::string code, std::string unit_id, std::string message) {
    report.violations.push_back({std::move(code), std::move(unit_id), std::move(message)});
  };

  const std::size_t len = instruction.text.size();
  if (trim(instruction.text).empty()) {
    add("empty_instruction", "", "instruction text is empty after trimming");
  } else if (result.units.empty()) {
    add("no_units", "", "non-empty instruction decomposed to zero units");
  }

  std::map<std::string, int> id_counts;
  for (const auto& unit : result.units) ++id_counts[unit.unit_id];
  for (const auto& [id, count] : id_counts) {
    if (count > 1) add("duplicate_unit_id", id, "unit_id appears " + std::to_string(count) + " times");
  }

  for (const auto& unit : result.units) {
    if (trim(unit.text).empty()) {
      add("empty_unit_text", unit.unit_id, "unit text is empty");
    }
    if (unit.weight < kMinWeight - 1e-9 || unit.weight > kMaxWeight + 1e-9) {
      std::ostringstream msg;
      msg << "weight " << unit.weight << " outside [" << kMinWeight << ", " << kMaxWeight << "]";
      add("weight_range", unit.unit_id, msg.str());
    }
    if (unit.polarity == Polarity::Negative && unit.category != UnitCategory::Constraint) {
      add("polarity_category", unit.unit_id,
          "negative polarity on category '" + std::string(to_string(unit.category)) + "'");
    }
    if (unit.source_span) {
      const auto& span = *unit.source_span;
      if (span.start >= span.end || span.end > len) {
        std::ostringstream msg;
        msg << "span [" << span.start << ", " << span.end << ") invalid for length " << len;
        add("span_bounds", unit.unit_id, msg.str());
      }
    } else if (unit.provenance != Provenance::Enhanced) {
      add("missing_span", unit.unit_id, "raw unit without a source span");
    }
    if (unit.stage_hint && *unit.stage_hint < 1) {
      add("stage_hint_range", unit.unit_id, "stage hint must be positive");
    }
  }

  double recomputed = recompute_coverage(result.units, len);
  if (std::abs(recomputed - result.coverage_fraction) > 1e-9) {
    std::ostringstream msg;
    msg << "stored " << result.coverage_fraction << ", recomputed " << recomputed;
    add("coverage_mismatch", "", msg.str());
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON codec
// ---------------------------------------------------------------------------

using nlohmann::json;

json to_json(const Instruction& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "instruction";
  j["id"] = v.id;
  j["text"] = v.text;
  if (v.complexity) j["complexity"] = std::string(to_string(*v.complexity));
  if (v.source) j["source"] = *v.source;
  return j;
}

Instruction instruction_from_json(const json& j) {
  require_record(j, "instruction", "instruction");
  Instruction v;
  v.id = get_string(j, "id", "instruction");
  v.text = get_string(j, "text", "instruction");
  if (j.contains("complexity")) {
    auto c = complexity_from_string(j.at("complexity").get<std::string>());
    if (!c) throw FormatError("instruction: unknown complexity level");
    v.complexity = *c;
  }
  if (j.contains("source")) v.source = j.at("source").get<std::string>();
  return v;
}

json to_json(const SemanticUnit& v) {
  json j;
  j["unit_id"] = v.unit_id;
  j["category"] = std::string(to_string(v.category));
  j["text"] = v.text;
  j["attributes"] = v.attributes;
  j["weight"] = v.weight;
  j["polarity"] = std::string(to_string(v.polarity));
  j["provenance"] = std::string(to_string(v.provenance));
  if (v.source_span) j["source_span"] = json::array({v.source_span->start, v.source_span->end});
  if (v.stage_hint) j["stage_hint"] = *v.stage_hint;
  return j;
}

SemanticUnit unit_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("unit: not an object");
  SemanticUnit v;
  v.unit_id = get_string(j, "unit_id", "unit");
  auto category = category_from_string(get_string(j, "category", "unit"));
  if (!category) throw FormatError("unit: unknown category");
  v.category = *category;
  v.text = get_string(j, "text", "unit");
  if (j.contains("attributes")) {
    if (!j.at("attributes").is_object()) throw FormatError("unit: attributes must be an object");
    for (const auto& [k, val] : j.at("attributes").items()) {
      v.attributes[k] = val.get<std::string>();
    }
  }
  v.weight = get_number(j, "weight", "unit");
  auto polarity = polarity_from_string(get_string(j, "polarity", "unit"));
  if (!polarity) throw FormatError("unit: unknown polarity");
  v.polarity = *polarity;
  auto provenance = provenance_from_string(get_string(j, "provenance", "unit"));
  if (!provenance) throw FormatError("unit: unknown provenance");
  v.provenance = *provenance;
  if (j.contains("source_span")) {
    const json& span = j.at("source_span");
    if (!span.is_array() || span.size() != 2) throw FormatError("unit: source_span must be [start, end]");
    v.source_span = SourceSpan{span[0].get<std::size_t>(), span[1].get<std::size_t>()};
  }
  if (j.contains("stage_hint")) v.stage_hint = j.at("stage_hint").get<int>();
  return v;
}

json to_json(const DecompositionResult& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "decomposition_result";
  j["instruction_id"] = v.instruction_id;
  json units = json::array();
  for (const auto& unit : v.units) units.push_back(to_json(unit));
  j["units"] = std::move(units);
  if (v.cot_trace) j["cot_trace"] = *v.cot_trace;
  j["strategy"] = std::string(to_string(v.strategy));
  j["coverage_fraction"] = v.coverage_fraction;
  if (v.llm_meta) {
    j["llm_meta"] = json{{"model_id", v.llm_meta->model_id},
                         {"prompt_tokens", v.llm_meta->prompt_tokens},
                         {"completion_tokens", v.llm_meta->completion_tokens}};
  }
  return j;
}

DecompositionResult decomposition_from_json(const json& j) {
  require_record(j, "decomposition_result", "decomposition");
  DecompositionResult v;
  v.instruction_id = get_string(j, "instruction_id", "decomposition");
  const json& units = require_field(j, "units", "decomposition");
  if (!units.is_array()) throw FormatError("decomposition: units must be an array");
  for (const auto& u : units) v.units.push_back(unit_from_json(u));
  if (j.contains("cot_trace")) v.cot_trace = j.at("cot_trace").get<std::string>();
  auto strategy = strategy_from_string(get_string(j, "strategy", "decomposition"));
  if (!strategy) throw FormatError("decomposition: unknown strategy");
  v.strategy = *strategy;
  v.coverage_fraction = get_number(j, "coverage_fraction", "decomposition");
  if (j.contains("llm_meta")) {
    const json& m = j.at("llm_meta");
    LlmMeta meta;
    meta.model_id = get_string(m, "model_id", "llm_meta");
    meta.prompt_tokens = m.value("prompt_tokens", std::int64_t{0});
    meta.completion_tokens = m.value("completion_tokens", std::int64_t{0});
    v.llm_meta = std::move(meta);
  }
  return v;
}

json to_json(const PromptPlan& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "prompt_plan";
  if (v.is_fused()) {
    const FusedPlan& plan = v.fused();
    j["variant"] = "fused";
    j["prompt_text"] = plan.prompt_text;
    j["negative_prompt_text"] = plan.negative_prompt_text;
    j["unit_weights"] = plan.unit_weights;
    j["truncated_unit_ids"] = plan.truncated_unit_ids;
  } else {
    const StagedPlan& plan = v.staged();
    j["variant"] = "staged";
    json stages = json::array();
    for (const auto& stage : plan.stages) {
      stages.push_back(json{{"index", stage.index},
                            {"role", std::string(to_string(stage.role))},
                            {"prompt_text", stage.prompt_text},
                            {"negative_prompt_text", stage.negative_prompt_text},
                            {"unit_ids", stage.unit_ids}});
    }
    j["stages"] = std::move(stages);
  }
  return j;
}

PromptPlan plan_from_json(const json& j) {
  require_record(j, "prompt_plan", "plan");
  std::string variant = get_string(j, "variant", "plan");
  PromptPlan v;
  if (variant == "fused") {
    FusedPlan plan;
    plan.prompt_text = get_string(j, "prompt_text", "plan");
    plan.negative_prompt_text = get_string(j, "negative_prompt_text", "plan");
    const json& weights = require_field(j, "unit_weights", "plan");
    if (!weights.is_object()) throw FormatError("plan: unit_weights must be an object");
    for (const auto& [k, val] : weights.items()) plan.unit_weights[k] = val.get<double>();
    const json& truncated = require_field(j, "truncated_unit_ids", "plan");
    if (!truncated.is_array()) throw FormatError("plan: truncated_unit_ids must be an array");
    for (const auto& id : truncated) plan.truncated_unit_ids.push_back(id.get<std::string>());
    v.value = std::move(plan);
  } else if (variant == "staged") {
    StagedPlan plan;
    const json& stages = require_field(j, "stages", "plan");
    if (!stages.is_array()) throw FormatError("plan: stages must be an array");
    for (const auto& s : stages) {
      PlanStage stage;
      stage.index = static_cast<int>(get_number(s, "index", "stage"));
      auto role = stage_role_from_string(get_string(s, "role", "stage"));
      if (!role) throw FormatError("stage: unknown role");
      stage.role = *role;
      stage.prompt_text = get_string(s, "prompt_text", "stage");
      stage.negative_prompt_text = get_string(s, "negative_prompt_text", "stage");
      const json& ids = require_field(s, "unit_ids", "stage");
      if (!ids.is_array()) throw FormatError("stage: unit_ids must be an array");
      for (const auto& id : ids) stage.unit_ids.push_back(id.get<std::string>());
      plan.stages.push_back(std::move(stage));
    }
    v.value = std::move(plan);
  } else {
    throw FormatError("plan: unknown variant '" + variant + "'");
  }
  return v;
}

json to_json(const ImageRef& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "image_ref";
  j["kind"] = std::string(to_string(v.kind));
  j["value"] = v.value;
  return j;
}

ImageRef image_ref_from_json(const json& j) {
  require_record(j, "image_ref", "image_ref");
  ImageRef v;
  auto kind = image_kind_from_string(get_string(j, "kind", "image_ref"));
  if (!kind) throw FormatError("image_ref: unknown kind");
  v.kind = *kind;
  v.value = get_string(j, "value", "image_ref");
  if (v.kind == ImageKind::MockDescriptor) {
    decode_clauses(v.value);  // must parse as a clause set
  } else if (trim(v.value).empty()) {
    throw FormatError("image_ref: empty location for non-mock kind");
  }
  return v;
}

json to_json(const GenerationTrace& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "generation_trace";
  j["plan"] = to_json(v.plan);
  json outputs = json::array();
  for (const auto& output : v.outputs) outputs.push_back(to_json(output));
  j["outputs"] = std::move(outputs);
  j["final"] = to_json(v.final);
  j["timings_ms"] = v.timings_ms;
  return j;
}

GenerationTrace trace_from_json(const json& j) {
  require_record(j, "generation_trace", "trace");
  GenerationTrace v;
  v.plan = plan_from_json(require_field(j, "plan", "trace"));
  const json& outputs = require_field(j, "outputs", "trace");
  if (!outputs.is_array()) throw FormatError("trace: outputs must be an array");
  for (const auto& o : outputs) v.outputs.push_back(image_ref_from_json(o));
  v.final = image_ref_from_json(require_field(j, "final", "trace"));
  if (j.contains("timings_ms")) {
    for (const auto& t : j.at("timings_ms")) v.timings_ms.push_back(t.get<std::int64_t>());
  }
  if (v.outputs.empty() || !(v.final == v.outputs.back())) {
    throw FormatError("trace: final must equal the last output");
  }
  return v;
}

json to_json(const EvaluationRecord& v) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "evaluation_record";
  j["instruction_id"] = v.instruction_id;
  json scores;
  for (Dimension d : kAllDimensions) {
    scores[std::string(to_string(d))] = v.score(d);
  }
  j["scores"] = std::move(scores);
  j["average"] = v.average;
  return j;
}

EvaluationRecord evaluation_from_json(const json& j) {
  require_record(j, "evaluation_record", "evaluation");
  std::string id = get_string(j, "instruction_id", "evaluation");
  const json& scores = require_field(j, "scores", "evaluation");
  std::array<double, 9> values{};
  for (Dimension d : kAllDimensions) {
    const std::string key{to_string(d)};
    if (!scores.contains(key)) throw FormatError("evaluation: missing dimension '" + key + "'");
    values[static_cast<std::size_t>(d)] = scores.at(key).get<double>();
  }
  EvaluationRecord v = make_evaluation_record(std::move(id), values);
  double stored = get_number(j, "average", "evaluation");
  if (std::abs(stored - v.average) > 1e-9) {
    throw FormatError("evaluation: stored average inconsistent with scores");
  }
  return v;
}

std::string encode(const Instruction& v) { return to_json(v).dump(); }
std::string encode(const DecompositionResult& v) { return to_json(v).dump(); }
std::string encode(const PromptPlan& v) { return to_json(v).dump(); }
std::string encode(const ImageRef& v) { return to_json(v).dump(); }
std::string encode(const GenerationTrace& v) { return to_json(v).dump(); }
std::string encode(const EvaluationRecord& v) { return to_json(v).dump(); }

Instruction decode_instruction(const std::string& text) {
  return instruction_from_json(parse_json(text, "instruction"));
}
DecompositionResult decode_decomposition(const std::string& text) {
  return decomposition_from_json(parse_json(text, "decomposition"));
}
PromptPlan decode_plan(const std::string& text) {
  return plan_from_json(parse_json(text, "plan"));
}
ImageRef decode_image_ref(const std::string& text) {
  return image_ref_from_json(parse_json(text, "image_ref"));
}
GenerationTrace decode_trace(const std::string& text) {
  return trace_from_json(parse_json(text, "trace"));
}
EvaluationRecord decode_evaluation(const std::string& text) {
  return evaluation_from_json(parse_json(text, "evaluation"));
}

}  // namespace decot::ir
