#pragma once

// Aggregation and comparison machinery: dimension/average tables over
// evaluation records, complexity classification and bucketing, and ablation
// runs that execute the full pipeline once per configuration and report one
// row per label.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "decot/ir.hpp"
#include "decot/lexicon.hpp"
#include "decot/pipeline.hpp"

namespace decot::eval {

struct AggregateRow {
  std::string label;
  std::array<double, 9> dimension_means{};  // indexed by ir::Dimension, 2-decimal
  double overall = 0.0;                     // mean of the nine dimension means
  std::size_t record_count = 0;
  std::size_t failure_count = 0;

  double mean(ir::Dimension d) const {
    return dimension_means[static_cast<std::size_t>(d)];
  }

  bool operator==(const AggregateRow&) const = default;
};

struct AggregateReport {
  std::vector<AggregateRow> rows;
};

/// Per-dimension means and their overall mean, both half-up to 2 decimals.
/// Throws EmptyInput on an empty record list.
AggregateRow aggregate(const std::vector<ir::EvaluationRecord>& records,
                       const std::string& label);

/// Unit-count proxy for instruction complexity: the rule decomposition yields
/// n units; n <= 3 is simple, 4..7 medium, >= 8 complex. An explicit
/// complexity field on the instruction overrides classification. Throws
/// EmptyInstruction.
ir::Complexity classify_complexity(const ir::Instruction& instruction,
                                   const lex::Lexicon& lexicon);

/// Mean of record averages per complexity level; levels with no instructions
/// are omitted. Throws OrphanRecord for a record whose instruction is not in
/// the corpus.
std::map<ir::Complexity, double> bucket_by_complexity(
    const std::vector<ir::Instruction>& corpus,
    const std::map<std::string, ir::EvaluationRecord>& records,
    const lex::Lexicon& lexicon);

struct AblationOutcome {
  AggregateReport report;
  std::map<std::string, std::vector<pipeline::RunRecord>> records_by_label;
};

/// Runs the full pipeline once per configuration over the corpus and
/// aggregates per label; configs must carry distinct labels. A config's row
/// reports its per-instruction failure count. The runner factory supplies
/// backends and environment per configuration.
AblationOutcome compare_ablations(
    const std::vector<pipeline::RunConfig>& configs,
    const std::vector<ir::Instruction>& corpus,
    const std::function<pipeline::Runner(const pipeline::RunConfig&)>& make_runner);

/// The four standard ablation rows over a base config: raw-prompt baseline,
/// decomposition without enhancement, without adaptive staging, and the full
/// pipeline. With `include_strategy_rows`, three prompting-strategy rows are
/// appended.
std::vector<pipeline::RunConfig> standard_ablation_configs(
    const pipeline::RunConfig& base, bool include_strategy_rows);

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

/// Aligned plain-text table: one row per method, nine dimension columns plus
/// the overall mean and record counts.
std::string render_aggregate_table(const AggregateReport& report);

struct ComplexityRow {
  std::string label;
  std::map<ir::Complexity, double> means;
};

/// Aligned plain-text table: one row per method, one column per complexity
/// level present in any row.
std::string render_complexity_table(const std::vector<ComplexityRow>& rows);

/// Machine-readable row record (schema-versioned JSON, one object per line).
std::string encode_aggregate_row(const AggregateRow& row);
AggregateRow decode_aggregate_row(const std::string& text);

}  // namespace decot::eval
