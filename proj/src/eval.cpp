#include "decot/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "decot/decomposer.hpp"
#include "decot/errors.hpp"

namespace decot::eval {

namespace {

using ir::Complexity;
using ir::Dimension;

std::string format2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

AggregateRow aggregate(const std::vector<ir::EvaluationRecord>& records,
                       const std::string& label) {
  if (records.empty()) throw EmptyInput("no records to aggregate for '" + label + "'");

  AggregateRow row;
  row.label = label;
  row.record_count = records.size();
  double overall_sum = 0.0;
  for (Dimension d : ir::kAllDimensions) {
    double sum = 0.0;
    for (const auto& record : records) sum += record.score(d);
    double mean = ir::round2_half_up(sum / static_cast<double>(records.size()));
    row.dimension_means[static_cast<std::size_t>(d)] = mean;
    overall_sum += mean;
  }
  row.overall = ir::round2_half_up(overall_sum / 9.0);
  return row;
}

Complexity classify_complexity(const ir::Instruction& instruction,
                               const lex::Lexicon& lexicon) {
  if (lex::trim(instruction.text).empty()) {
    throw EmptyInstruction("instruction '" + instruction.id + "' is empty");
  }
  if (instruction.complexity) return *instruction.complexity;
  std::size_t n = decomposer::rule_decompose(instruction, lexicon).units.size();
  if (n <= 3) return Complexity::Simple;
  if (n <= 7) return Complexity::Medium;
  return Complexity::Complex;
}

std::map<Complexity, double> bucket_by_complexity(
    const std::vector<ir::Instruction>& corpus,
    const std::map<std::string, ir::EvaluationRecord>& records,
    const lex::Lexicon& lexicon) {
  std::map<std::string, const ir::Instruction*> by_id;
  for (const auto& instruction : corpus) by_id[instruction.id] = &instruction;

  std::map<Complexity, std::pair<double, std::size_t>> sums;
  for (const auto& [id, record] : records) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw OrphanRecord("record for unknown instruction '" + id + "'");
    }
    Complexity level = classify_complexity(*it->second, lexicon);
    auto& [sum, count] = sums[level];
    sum += record.average;
    ++count;
  }
  std::map<Complexity, double> means;
  for (const auto& [level, acc] : sums) {
    means[level] = ir::round2_half_up(acc.first / static_cast<double>(acc.second));
  }
  return means;
}

AblationOutcome compare_ablations(
    const std::vector<pipeline::RunConfig>& configs,
    const std::vector<ir::Instruction>& corpus,
    const std::function<pipeline::Runner(const pipeline::RunConfig&)>& make_runner) {
  std::set<std::string> labels;
  for (const auto& config : configs) {
    if (!labels.insert(config.label).second) {
      throw InvalidArgument("duplicate ablation label '" + config.label + "'");
    }
  }

  AblationOutcome outcome;
  for (const auto& config : configs) {
    pipeline::Runner runner = make_runner(config);
    std::vector<pipeline::RunRecord> records = runner.run(corpus);

    std::vector<ir::EvaluationRecord> evaluations;
    std::size_t failures = 0;
    for (const auto& record : records) {
      if (record.evaluation) {
        evaluations.push_back(*record.evaluation);
      } else {
        ++failures;
      }
    }
    AggregateRow row;
    if (evaluations.empty()) {
      row.label = config.label;
    } else {
      row = aggregate(evaluations, config.label);
    }
    row.failure_count = failures;
    outcome.report.rows.push_back(std::move(row));
    outcome.records_by_label[config.label] = std::move(records);
  }
  return outcome;
}

std::vector<pipeline::RunConfig> standard_ablation_configs(
    const pipeline::RunConfig& base, bool include_strategy_rows) {
  std::vector<pipeline::RunConfig> configs;

  pipeline::RunConfig baseline = base;
  baseline.label = "baseline";
  baseline.baseline = true;
  configs.push_back(baseline);

  pipeline::RunConfig no_enhancement = base;
  no_enhancement.label = "no-enhancement";
  no_enhancement.baseline = false;
  no_enhancement.enhancement.mode = enhancer::EnhancementMode::Off;
  configs.push_back(no_enhancement);

  pipeline::RunConfig no_adaptive = base;
  no_adaptive.label = "no-adaptive";
  no_adaptive.baseline = false;
  no_adaptive.adaptive = false;
  configs.push_back(no_adaptive);

  pipeline::RunConfig full = base;
  full.label = "full";
  full.baseline = false;
  configs.push_back(full);

  if (include_strategy_rows) {
    const std::pair<const char*, ir::PromptingStrategy> rows[] = {
        {"zero-shot", ir::PromptingStrategy::ZeroShot},
        {"few-shot", ir::PromptingStrategy::FewShot},
        {"few-shot-cot", ir::PromptingStrategy::FewShotCoT},
    };
    for (const auto& [name, strategy] : rows) {
      pipeline::RunConfig config = base;
      config.label = std::string("strategy-") + name;
      config.baseline = false;
      config.strategy = strategy;
      configs.push_back(config);
    }
  }
  return configs;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

const char* kDimensionHeaders[] = {"Obj.", "Backg.", "Color", "Texture", "Light",
                                   "Text", "Comp.",  "Pose",  "FX"};

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_aggregate_table(const AggregateReport& report) {
  std::size_t label_width = std::string("method").size();
  for (const auto& row : report.rows) label_width = std::max(label_width, row.label.size());

  std::ostringstream out;
  out << pad("method", label_width + 2);
  for (const char* header : kDimensionHeaders) out << pad(header, 9);
  out << pad("Avg.", 9) << pad("n", 6) << "fail\n";
  for (const auto& row : report.rows) {
    out << pad(row.label, label_width + 2);
    for (Dimension d : ir::kAllDimensions) out << pad(format2(row.mean(d)), 9);
    out << pad(format2(row.overall), 9) << pad(std::to_string(row.record_count), 6)
        << row.failure_count << "\n";
  }
  return out.str();
}

std::string render_complexity_table(const std::vector<ComplexityRow>& rows) {
  std::vector<Complexity> levels;
  for (Complexity level : {Complexity::Simple, Complexity::Medium, Complexity::Complex}) {
    for (const auto& row : rows) {
      if (row.means.count(level)) {
        levels.push_back(level);
        break;
      }
    }
  }
  std::size_t label_width = std::string("method").size();
  for (const auto& row : rows) label_width = std::max(label_width, row.label.size());

  std::ostringstream out;
  out << pad("method", label_width + 2);
  for (Complexity level : levels) out << pad(std::string(ir::to_string(level)), 9);
  out << "\n";
  for (const auto& row : rows) {
    out << pad(row.label, label_width + 2);
    for (Complexity level : levels) {
      auto it = row.means.find(level);
      out << pad(it == row.means.end() ? "-" : format2(it->second), 9);
    }
    out << "\n";
  }
  return out.str();
}

std::string encode_aggregate_row(const AggregateRow& row) {
  nlohmann::json j;
  j["schema_version"] = ir::kSchemaVersion;
  j["type"] = "aggregate_row";
  j["label"] = row.label;
  nlohmann::json dims;
  for (Dimension d : ir::kAllDimensions) {
    dims[std::string(ir::to_string(d))] = row.mean(d);
  }
  j["dimension_means"] = std::move(dims);
  j["overall"] = row.overall;
  j["record_count"] = row.record_count;
  j["failure_count"] = row.failure_count;
  return j.dump();
}

AggregateRow decode_aggregate_row(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("aggregate row: invalid JSON");
  if (j.value("type", "") != "aggregate_row") throw FormatError("aggregate row: wrong type tag");
  AggregateRow row;
  row.label = j.at("label").get<std::string>();
  for (Dimension d : ir::kAllDimensions) {
    row.dimension_means[static_cast<std::size_t>(d)] =
        j.at("dimension_means").at(std::string(ir::to_string(d))).get<double>();
  }
  row.overall = j.at("overall").get<double>();
  row.record_count = j.value("record_count", std::size_t{0});
  row.failure_count = j.value("failure_count", std::size_t{0});
  return row;
}

}  // namespace decot::eval
