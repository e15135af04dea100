#pragma once

// Core data model for the instruction -> semantic-unit -> prompt-plan pipeline:
// instructions, categorized semantic units, decomposition results, prompt plans
// (fused or staged), generation traces, image handles, and nine-dimension
// evaluation records. All values are plain immutable-by-convention structs;
// invariants are checked by validate() and by the decoders, never by
// constructors, so malformed values can be built in order to be reported.
//
// Every type has a canonical JSON encoding: one self-describing record per
// value with stable snake_case field names and a schema_version field. The
// encoder sorts object keys, so equal values always serialize to identical
// bytes.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decot/errors.hpp"

#include "json.hpp"

namespace decot::ir {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Instructions
// ---------------------------------------------------------------------------

enum class Complexity { Simple, Medium, Complex };

struct Instruction {
  std::string id;
  std::string text;
  std::optional<Complexity> complexity;
  std::optional<std::string> source;

  bool operator==(const Instruction&) const = default;
};

// ---------------------------------------------------------------------------
// Semantic units
// ---------------------------------------------------------------------------

enum class UnitCategory {
  CoreObject,
  Background,
  SpatialComposition,
  Environment,
  Constraint,
};

inline constexpr std::array<UnitCategory, 5> kAllCategories{
    UnitCategory::CoreObject,    UnitCategory::Background,
    UnitCategory::SpatialComposition, UnitCategory::Environment,
    UnitCategory::Constraint,
};

enum class Polarity { Positive, Negative };
enum class Provenance { Raw, Enhanced };

/// Half-open [start, end) character range into the instruction text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const SourceSpan&) const = default;
};

/// Weight bounds for a unit and for any effective (policy-composed) weight.
inline constexpr double kMinWeight = 0.25;
inline constexpr double kMaxWeight = 2.0;
inline constexpr double kDefaultWeight = 1.0;

struct SemanticUnit {
  std::string unit_id;
  UnitCategory category = UnitCategory::CoreObject;
  std::string text;
  std::map<std::string, std::string> attributes;
  double weight = kDefaultWeight;
  Polarity polarity = Polarity::Positive;
  Provenance provenance = Provenance::Raw;
  std::optional<SourceSpan> source_span;
  std::optional<int> stage_hint;

  bool operator==(const SemanticUnit&) const = default;
};

// ---------------------------------------------------------------------------
// Decomposition results
// ---------------------------------------------------------------------------

enum class PromptingStrategy { ZeroShot, FewShot, FewShotCoT };

struct LlmMeta {
  std::string model_id;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const LlmMeta&) const = default;
};

struct DecompositionResult {
  std::string instruction_id;
  std::vector<SemanticUnit> units;
  std::optional<std::string> cot_trace;
  PromptingStrategy strategy = PromptingStrategy::ZeroShot;
  double coverage_fraction = 0.0;
  std::optional<LlmMeta> llm_meta;

  bool operator==(const DecompositionResult&) const = default;
};

// ---------------------------------------------------------------------------
// Prompt plans
// ---------------------------------------------------------------------------

enum class StageRole { Base, Refine };

struct FusedPlan {
  std::string prompt_text;
  std::string negative_prompt_text;
  std::map<std::string, double> unit_weights;  // unit_id -> effective weight
  std::vector<std::string> truncated_unit_ids;

  bool operator==(const FusedPlan&) const = default;
};

struct PlanStage {
  int index = 1;
  StageRole role = StageRole::Base;
  std::string prompt_text;
  std::string negative_prompt_text;
  std::vector<std::string> unit_ids;

  bool operator==(const PlanStage&) const = default;
};

struct StagedPlan {
  std::vector<PlanStage> stages;

  bool operator==(const StagedPlan&) const = default;
};

struct PromptPlan {
  std::variant<FusedPlan, StagedPlan> value;

  bool is_fused() const { return std::holds_alternative<FusedPlan>(value); }
  bool is_staged() const { return std::holds_alternative<StagedPlan>(value); }
  const FusedPlan& fused() const { return std::get<FusedPlan>(value); }
  const StagedPlan& staged() const { return std::get<StagedPlan>(value); }

  bool operator==(const PromptPlan&) const = default;
};

// ---------------------------------------------------------------------------
// Image handles and mock descriptors
// ---------------------------------------------------------------------------

enum class ImageKind { File, Url, MockDescriptor };

/// One subject plus optional key/value attributes inside a mock descriptor.
struct Clause {
  std::string subject;
  std::map<std::string, std::string> attributes;

  bool operator==(const Clause&) const = default;
};

/// Handle to a generated image. No pixel data is ever stored; `value` is a
/// path, a URL, or (for MockDescriptor) a textual clause set produced by
/// encode_clauses().
struct ImageRef {
  ImageKind kind = ImageKind::MockDescriptor;
  std::string value;

  bool operator==(const ImageRef&) const = default;
};

/// Clause-set codec for MockDescriptor values. Format: clauses joined by
/// "; ", each either `subject` or `subject [k=v, k2=v2]`.
std::string encode_clauses(const std::vector<Clause>& clauses);
std::vector<Clause> decode_clauses(const std::string& text);  // throws FormatError

// ---------------------------------------------------------------------------
// Generation traces
// ---------------------------------------------------------------------------

struct GenerationTrace {
  PromptPlan plan;
  std::vector<ImageRef> outputs;  // one per stage; length 1 for fused plans
  ImageRef final;                 // always equals outputs.back()
  std::vector<std::int64_t> timings_ms;

  bool operator==(const GenerationTrace&) const = default;
};

// ---------------------------------------------------------------------------
// Evaluation records
// ---------------------------------------------------------------------------

enum class Dimension { Obj, Backg, Color, Texture, Light, Text, Comp, Pose, FX };

inline constexpr std::array<Dimension, 9> kAllDimensions{
    Dimension::Obj,  Dimension::Backg, Dimension::Color,
    Dimension::Texture, Dimension::Light, Dimension::Text,
    Dimension::Comp, Dimension::Pose,  Dimension::FX,
};

inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 5.0;

struct EvaluationRecord {
  std::string instruction_id;
  std::array<double, 9> scores{};  // indexed by Dimension
  double average = 0.0;

  double score(Dimension d) const { return scores[static_cast<std::size_t>(d)]; }
  void set_score(Dimension d, double v) { scores[static_cast<std::size_t>(d)] = v; }

  bool operator==(const EvaluationRecord&) const = default;
};

/// Builds a record and computes `average` as the half-up 2-decimal mean of the
/// nine scores. Throws InvalidArgument on out-of-range scores.
EvaluationRecord make_evaluation_record(std::string instruction_id,
                                        const std::array<double, 9>& scores);

/// Rounds to 2 decimals, ties away from zero for non-negative input. A 1e-9
/// nudge absorbs binary representation error for values that are exact
/// hundredth-plus-half boundaries in decimal.
double round2_half_up(double v);

// ---------------------------------------------------------------------------
// Enum names (canonical serialization tokens)
// ---------------------------------------------------------------------------

std::string_view to_string(Complexity v);
std::string_view to_string(UnitCategory v);
std::string_view to_string(Polarity v);
std::string_view to_string(Provenance v);
std::string_view to_string(PromptingStrategy v);
std::string_view to_string(StageRole v);
std::string_view to_string(ImageKind v);
std::string_view to_string(Dimension v);

/// Tolerant parsers: case-insensitive, '_'/'-'/' ' ignored. Return nullopt on
/// unknown tokens.
std::optional<Complexity> complexity_from_string(std::string_view s);
std::optional<UnitCategory> category_from_string(std::string_view s);
std::optional<Polarity> polarity_from_string(std::string_view s);
std::optional<Provenance> provenance_from_string(std::string_view s);
std::optional<PromptingStrategy> strategy_from_string(std::string_view s);
std::optional<StageRole> stage_role_from_string(std::string_view s);
std::optional<ImageKind> image_kind_from_string(std::string_view s);
std::optional<Dimension> dimension_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string code;     // e.g. "weight_range", "polarity_category"
  std::string unit_id;  // empty for result-level violations
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  std::string to_text() const;
};

/// Reports every violated unit/result invariant; empty report iff all hold.
ValidationReport validate(const DecompositionResult& result,
                          const Instruction& instruction);

/// Fraction of instruction characters covered by the union of source spans.
double recompute_coverage(const std::vector<SemanticUnit>& units,
                          std::size_t instruction_length);

// ---------------------------------------------------------------------------
// Canonical JSON codec
// ---------------------------------------------------------------------------

nlohmann::json to_json(const Instruction& v);
nlohmann::json to_json(const SemanticUnit& v);
nlohmann::json to_json(const DecompositionResult& v);
nlohmann::json to_json(const PromptPlan& v);
nlohmann::json to_json(const ImageRef& v);
nlohmann::json to_json(const GenerationTrace& v);
nlohmann::json to_json(const EvaluationRecord& v);

Instruction instruction_from_json(const nlohmann::json& j);
SemanticUnit unit_from_json(const nlohmann::json& j);
DecompositionResult decomposition_from_json(const nlohmann::json& j);
PromptPlan plan_from_json(const nlohmann::json& j);
ImageRef image_ref_from_json(const nlohmann::json& j);
GenerationTrace trace_from_json(const nlohmann::json& j);
EvaluationRecord evaluation_from_json(const nlohmann::json& j);

std::string encode(const Instruction& v);
std::string encode(const DecompositionResult& v);
std::string encode(const PromptPlan& v);
std::string encode(const ImageRef& v);
std::string encode(const GenerationTrace& v);
std::string encode(const EvaluationRecord& v);

Instruction decode_instruction(const std::string& text);
DecompositionResult decode_decomposition(const std::string& text);
PromptPlan decode_plan(const std::string& text);
ImageRef decode_image_ref(const std::string& text);
GenerationTrace decode_trace(const std::string& text);
EvaluationRecord decode_evaluation(const std::string& text);

}  // namespace decot::ir
