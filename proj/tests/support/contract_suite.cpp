#include "support/contract_suite.hpp"

#include <cmath>

#include "decot/decomposer.hpp"
#include "decot/errors.hpp"

namespace decot::testsupport {

std::string FlakyLlm::complete(const std::string& prompt) {
  if (remaining_.fetch_sub(1) > 0) {
    throw BackendFailure("injected transient failure");
  }
  return inner_->complete(prompt);
}

namespace {

void check(std::vector<std::string>& failures, bool ok, const std::string& message) {
  if (!ok) failures.push_back(message);
}

bool valid_image(const ir::ImageRef& image) {
  if (image.kind == ir::ImageKind::MockDescriptor) {
    try {
      return !ir::decode_clauses(image.value).empty();
    } catch (const std::exception&) {
      return false;
    }
  }
  return !image.value.empty();
}

}  // namespace

std::vector<std::string> run_contract_suite(const BackendTriple& triple,
                                            const std::filesystem::path& scratch_dir) {
  std::vector<std::string> failures;
  backends::RetryPolicy fast_retry{2, 1};

  // LLM: non-empty completion, identified model.
  check(failures, !triple.llm->model_id().empty(), "llm model_id is empty");
  std::string reply = triple.llm->complete("hello world");
  check(failures, !reply.empty(), "llm completion is empty");

  // Cache contract: identical (model, prompt) served from warm cache with
  // zero further backend attempts, byte-identical.
  {
    auto counting = std::make_shared<CountingLlm>(triple.llm);
    backends::Cache cache(scratch_dir / "contract_cache");
    std::string first = backends::llm_complete(*counting, "cache probe", &cache, fast_retry);
    std::string second = backends::llm_complete(*counting, "cache probe", &cache, fast_retry);
    check(failures, first == second, "cached completion differs from original");
    check(failures, counting->calls() == 1,
          "warm cache still hit the backend (" + std::to_string(counting->calls()) +
              " calls)");
  }

  // T2I: valid refs, empty-prompt rejection, capability floor.
  auto caps = triple.t2i->capabilities();
  check(failures, caps.max_prompt_words >= 16, "max_prompt_words below the floor");
  ir::ImageRef image = triple.t2i->generate("a red apple, a blue bird", "");
  check(failures, valid_image(image), "generate returned an invalid image ref");
  try {
    triple.t2i->generate("   ", "");
    failures.push_back("empty prompt was not rejected");
  } catch (const EmptyPrompt&) {
  }
  if (caps.supports_staged_refinement) {
    ir::ImageRef refined = triple.t2i->refine(image, "a marble statue", "");
    check(failures, valid_image(refined), "refine returned an invalid image ref");
    ir::ImageRef unchanged = triple.t2i->refine(image, "", "");
    check(failures, unchanged == image, "refine with empty prompt changed the image");
  } else {
    try {
      triple.t2i->refine(image, "a marble statue", "");
      failures.push_back("refine without staged support was not rejected");
    } catch (const InvalidArgument&) {
    }
  }

  // Judge: record satisfies all evaluation invariants.
  {
    ir::Instruction instruction;
    instruction.id = "contract";
    instruction.text = "a red apple, soft lighting, no dogs in the background";
    auto result = decomposer::rule_decompose(instruction, lex::Lexicon::builtin());
    std::string rubric = backends::render_judge_rubric(result, instruction);
    ir::EvaluationRecord record = triple.judge->score(image, instruction, rubric);
    check(failures, record.instruction_id == instruction.id,
          "judge record carries the wrong instruction id");
    double sum = 0.0;
    for (ir::Dimension d : ir::kAllDimensions) {
      double s = record.score(d);
      check(failures, s >= 1.0 && s <= 5.0,
            "judge score out of range for " + std::string(ir::to_string(d)));
      sum += s;
    }
    check(failures, std::abs(record.average - ir::round2_half_up(sum / 9.0)) < 1e-9,
          "judge average inconsistent with scores");
    check(failures, !triple.judge->judge_id().empty(), "judge_id is empty");
  }
  return failures;
}

}  // namespace decot::testsupport
