#include "decot/pipeline.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "decot/errors.hpp"

namespace decot::pipeline {

namespace {

using nlohmann::json;

std::string truncate_words(const std::string& text, int max_words) {
  std::istringstream in(text);
  std::string word, out;
  int count = 0;
  while (count < max_words && in >> word) {
    if (count > 0) out += ' ';
    out += word;
    ++count;
  }
  return out;
}

}  // namespace

std::function<std::int64_t()> steady_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

std::function<std::int64_t()> fixed_clock_ms() {
  return [] { return std::int64_t{0}; };
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

std::string encode(const RunRecord& record) {
  json j;
  j["schema_version"] = ir::kSchemaVersion;
  j["type"] = "run_record";
  j["instruction_id"] = record.instruction_id;
  j["label"] = record.label;
  if (record.decomposition) j["decomposition"] = ir::to_json(*record.decomposition);
  if (record.plan) j["plan"] = ir::to_json(*record.plan);
  if (record.trace) j["trace"] = ir::to_json(*record.trace);
  if (record.evaluation) j["evaluation"] = ir::to_json(*record.evaluation);
  if (record.error) j["error"] = *record.error;
  j["total_ms"] = record.total_ms;
  return j.dump();
}

RunRecord decode_run_record(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("run record: invalid JSON");
  if (j.value("type", "") != "run_record") throw FormatError("run record: wrong type tag");
  RunRecord record;
  record.instruction_id = j.at("instruction_id").get<std::string>();
  record.label = j.at("label").get<std::string>();
  if (j.contains("decomposition")) {
    record.decomposition = ir::decomposition_from_json(j.at("decomposition"));
  }
  if (j.contains("plan")) record.plan = ir::plan_from_json(j.at("plan"));
  if (j.contains("trace")) record.trace = ir::trace_from_json(j.at("trace"));
  if (j.contains("evaluation")) record.evaluation = ir::evaluation_from_json(j.at("evaluation"));
  if (j.contains("error")) record.error = j.at("error").get<std::string>();
  record.total_ms = j.value("total_ms", std::int64_t{0});
  if (record.evaluation.has_value() == record.error.has_value()) {
    throw FormatError("run record: exactly one of evaluation/error must be set");
  }
  return record;
}

// ---------------------------------------------------------------------------
// Corpus ingestion
// ---------------------------------------------------------------------------

std::vector<ir::Instruction> ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());

  std::vector<ir::Instruction> corpus;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lex::trim(line).empty()) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw FormatError("corpus line " + std::to_string(line_no) + ": invalid JSON record");
    }
    if (!j.contains("id") || !j.at("id").is_string() || !j.contains("prompt") ||
        !j.at("prompt").is_string()) {
      throw FormatError("corpus line " + std::to_string(line_no) +
                        ": record needs string fields 'id' and 'prompt'");
    }
    ir::Instruction instruction;
    instruction.id = j.at("id").get<std::string>();
    instruction.text = j.at("prompt").get<std::string>();
    if (lex::trim(instruction.text).empty()) {
      throw FormatError("corpus line " + std::to_string(line_no) + ": empty prompt");
    }
    if (j.contains("complexity")) {
      auto level = ir::complexity_from_string(j.at("complexity").get<std::string>());
      if (!level) {
        throw FormatError("corpus line " + std::to_string(line_no) + ": unknown complexity");
      }
      instruction.complexity = *level;
    }
    if (j.contains("source")) instruction.source = j.at("source").get<std::string>();
    if (!ids.insert(instruction.id).second) {
      throw DuplicateId("duplicate instruction id '" + instruction.id + "' at corpus line " +
                        std::to_string(line_no));
    }
    corpus.push_back(std::move(instruction));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Plan execution
// ---------------------------------------------------------------------------

ir::GenerationTrace execute_plan(const ir::PromptPlan& plan, backends::T2iBackend& t2i,
                                 const std::function<std::int64_t()>& now_ms) {
  ir::GenerationTrace trace;
  trace.plan = plan;
  if (plan.is_fused()) {
    const ir::FusedPlan& fused = plan.fused();
    std::int64_t t0 = now_ms();
    trace.outputs.push_back(t2i.generate(fused.prompt_text, fused.negative_prompt_text));
    trace.timings_ms.push_back(now_ms() - t0);
  } else {
    const ir::StagedPlan& staged = plan.staged();
    for (const ir::PlanStage& stage : staged.stages) {
      std::int64_t t0 = now_ms();
      if (trace.outputs.empty()) {
        trace.outputs.push_back(t2i.generate(stage.prompt_text, stage.negative_prompt_text));
      } else {
        trace.outputs.push_back(
            t2i.refine(trace.outputs.back(), stage.prompt_text, stage.negative_prompt_text));
      }
      trace.timings_ms.push_back(now_ms() - t0);
    }
  }
  trace.final = trace.outputs.back();
  return trace;
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

Runner::Runner(PipelineEnv env, BackendSet backends, RunConfig config)
    : env_(std::move(env)), backends_(std::move(backends)), config_(std::move(config)) {
  if (!backends_.now_ms) backends_.now_ms = steady_clock_ms();
  if (!config_.cache_dir.empty()) {
    cache_ = std::make_unique<backends::Cache>(config_.cache_dir);
  }
}

ir::DecompositionResult Runner::decompose(const ir::Instruction& instruction) const {
  if (config_.llm_backend_id == "rule") {
    return decomposer::rule_decompose(instruction, env_.lexicon);
  }
  decomposer::LlmContext ctx{*backends_.llm, env_.tmpl, cache_.get(), env_.retry};
  return decomposer::llm_decompose(instruction, config_.strategy, ctx);
}

ir::DecompositionResult Runner::enhance(const ir::DecompositionResult& result) const {
  return enhancer::enhance(result, config_.enhancement, env_.expansion,
                           backends_.llm.get(), cache_.get(), env_.retry)
      .result;
}

ir::PromptPlan Runner::plan(const ir::DecompositionResult& result) const {
  return planner::plan(result, backends_.t2i->capabilities(), env_.weights, config_.adaptive);
}

ir::GenerationTrace Runner::generate(const ir::PromptPlan& plan) const {
  return execute_plan(plan, *backends_.t2i, backends_.now_ms);
}

ir::EvaluationRecord Runner::judge(const ir::GenerationTrace& trace,
                                   const ir::DecompositionResult& result,
                                   const ir::Instruction& instruction) const {
  std::string rubric = backends::render_judge_rubric(result, instruction);
  return backends_.judge->score(trace.final, instruction, rubric);
}

RunRecord Runner::process(const ir::Instruction& instruction) const {
  std::int64_t t0 = backends_.now_ms();
  RunRecord record;
  record.instruction_id = instruction.id;
  record.label = config_.label;

  if (config_.baseline) {
    // Direct prompting: the raw instruction, truncated to the backend budget,
    // is the whole plan. The rule decomposition is judged against so baseline
    // rows are comparable to pipeline rows.
    record.decomposition = decomposer::rule_decompose(instruction, env_.lexicon);
    ir::FusedPlan fused;
    fused.prompt_text =
        truncate_words(instruction.text, backends_.t2i->capabilities().max_prompt_words);
    record.plan = ir::PromptPlan{std::move(fused)};
  } else {
    record.decomposition = enhance(decompose(instruction));
    record.plan = plan(*record.decomposition);
  }
  record.trace = generate(*record.plan);
  record.evaluation = judge(*record.trace, *record.decomposition, instruction);
  record.total_ms = backends_.now_ms() - t0;
  return record;
}

std::vector<RunRecord> Runner::run(const std::vector<ir::Instruction>& corpus,
                                   std::ostream* out, std::ostream* progress) const {
  const std::size_t n = corpus.size();
  const std::size_t window =
      static_cast<std::size_t>(std::max(1, config_.parallelism));

  auto task = [this](const ir::Instruction& instruction) -> RunRecord {
    try {
      return process(instruction);
    } catch (const std::exception& e) {
      RunRecord record;
      record.instruction_id = instruction.id;
      record.label = config_.label;
      record.error = e.what();
      return record;
    }
  };

  std::vector<RunRecord> records;
  records.reserve(n);
  std::deque<std::future<RunRecord>> in_flight;
  std::size_t next = 0;
  while (records.size() < n) {
    while (in_flight.size() < window && next < n) {
      in_flight.push_back(
          std::async(std::launch::async, task, std::cref(corpus[next])));
      ++next;
    }
    RunRecord record = in_flight.front().get();
    in_flight.pop_front();
    if (out) {
      *out << encode(record) << '\n';
      out->flush();
    }
    if (progress) {
      *progress << "[" << records.size() + 1 << "/" << n << "] " << record.instruction_id;
      if (record.error) {
        *progress << " ERROR: " << *record.error << "\n";
      } else {
        *progress << " ok avg=" << record.evaluation->average << "\n";
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace decot::pipeline
