#pragma once

// End-to-end run machinery: corpus ingestion, per-instruction pipeline
// execution (decompose -> enhance -> plan -> generate -> judge), and
// append-only run files. One line-delimited record per instruction is written
// in corpus order as soon as it (and every earlier record) completes, so an
// interrupted run always leaves a prefix of complete records. A
// per-instruction failure produces an error record without aborting the run.

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "decot/backends.hpp"
#include "decot/decomposer.hpp"
#include "decot/enhancer.hpp"
#include "decot/ir.hpp"
#include "decot/planner.hpp"

namespace decot::pipeline {

struct RunConfig {
  std::string label = "run";
  enhancer::EnhancementPolicy enhancement{};
  bool adaptive = true;
  ir::PromptingStrategy strategy = ir::PromptingStrategy::FewShotCoT;
  std::string llm_backend_id = "mock";    // mock | rule | http
  std::string t2i_backend_id = "mock-staged";
  std::string judge_backend_id = "mock";
  int parallelism = 1;
  std::uint64_t seed = 0;
  std::filesystem::path cache_dir;  // empty disables the response cache
  /// Raw-instruction baseline: no decomposition; the instruction text,
  /// truncated to the backend word budget, becomes a single fused prompt.
  /// The rule decomposition is still recorded and judged against.
  bool baseline = false;
};

struct BackendSet {
  std::shared_ptr<backends::LlmBackend> llm;
  std::shared_ptr<backends::T2iBackend> t2i;
  std::shared_ptr<backends::JudgeBackend> judge;
  /// Millisecond clock for stage timings; mock profiles use a constant
  /// source so run files are byte-identical across repeats.
  std::function<std::int64_t()> now_ms;
};

/// Steady-clock milliseconds (default for HTTP profiles).
std::function<std::int64_t()> steady_clock_ms();
/// Constant zero (mock profiles).
std::function<std::int64_t()> fixed_clock_ms();

struct PipelineEnv {
  lex::Lexicon lexicon = lex::Lexicon::builtin();
  lex::ExpansionLexicon expansion = lex::ExpansionLexicon::builtin();
  decomposer::DecompositionTemplate tmpl = decomposer::DecompositionTemplate::builtin();
  planner::WeightPolicy weights = planner::WeightPolicy::defaults();
  backends::RetryPolicy retry{};
};

struct RunRecord {
  std::string instruction_id;
  std::string label;
  std::optional<ir::DecompositionResult> decomposition;
  std::optional<ir::PromptPlan> plan;
  std::optional<ir::GenerationTrace> trace;
  std::optional<ir::EvaluationRecord> evaluation;  // exactly one of
  std::optional<std::string> error;                // these two is set
  std::int64_t total_ms = 0;

  bool operator==(const RunRecord&) const = default;
};

std::string encode(const RunRecord& record);
RunRecord decode_run_record(const std::string& text);

/// Loads a line-delimited corpus: one record per line with `id` and `prompt`
/// fields and an optional `complexity`/`source`. Blank lines are skipped.
/// Throws FormatError (with the line number) and DuplicateId.
std::vector<ir::Instruction> ingest_corpus(const std::filesystem::path& path);

/// Executes a plan against a T2I backend: one generate for fused plans, a
/// generate plus refinements for staged plans; records per-stage timings.
ir::GenerationTrace execute_plan(const ir::PromptPlan& plan, backends::T2iBackend& t2i,
                                 const std::function<std::int64_t()>& now_ms);

class Runner {
 public:
  Runner(PipelineEnv env, BackendSet backends, RunConfig config);

  const RunConfig& config() const { return config_; }

  ir::DecompositionResult decompose(const ir::Instruction& instruction) const;
  ir::DecompositionResult enhance(const ir::DecompositionResult& result) const;
  ir::PromptPlan plan(const ir::DecompositionResult& result) const;
  ir::GenerationTrace generate(const ir::PromptPlan& plan) const;
  ir::EvaluationRecord judge(const ir::GenerationTrace& trace,
                             const ir::DecompositionResult& result,
                             const ir::Instruction& instruction) const;

  /// Full chain for one instruction; throws on failure.
  RunRecord process(const ir::Instruction& instruction) const;

  /// Runs the corpus with up to config.parallelism instructions in flight.
  /// Records are emitted in corpus order; failures become error records. When
  /// `out` is set, each record is appended as one line and flushed.
  std::vector<RunRecord> run(const std::vector<ir::Instruction>& corpus,
                             std::ostream* out = nullptr,
                             std::ostream* progress = nullptr) const;

 private:
  PipelineEnv env_;
  BackendSet backends_;
  RunConfig config_;
  std::unique_ptr<backends::Cache> cache_;
};

}  // namespace decot::pipeline
