#pragma once

// Uniform client abstractions for the three external roles: LLM completion,
// text-to-image generation/refinement, and judge scoring. Each role has an
// HTTP implementation (http_backends.hpp) and a deterministic mock
// implementation defined here; both satisfy the same interface contract.
//
// The mock world replaces a generated image with a descriptor: an ordered
// clause set parsed from the prompt. Refinement unions clause sets, and the
// mock judge scores each dimension by the fraction of its units whose clause
// appears in the final descriptor (1 + 4 * coverage; unpopulated dimensions
// score a neutral 3.0). All mock operations are pure functions of their
// inputs, which makes end-to-end runs reproducible offline.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "decot/ir.hpp"
#include "decot/lexicon.hpp"
#include "decot/planner.hpp"

namespace decot::backends {

// ---------------------------------------------------------------------------
// Interfaces
// ---------------------------------------------------------------------------

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string model_id() const = 0;
};

class T2iBackend {
 public:
  virtual ~T2iBackend() = default;
  virtual ir::ImageRef generate(const std::string& prompt, const std::string& negative) = 0;
  /// Only callable when capabilities().supports_staged_refinement.
  virtual ir::ImageRef refine(const ir::ImageRef& image, const std::string& prompt,
                              const std::string& negative) = 0;
  virtual planner::BackendCapabilities capabilities() const = 0;
};

class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  /// The rubric text carries the decomposition the image is scored against
  /// (see render_judge_rubric); the returned record satisfies all
  /// EvaluationRecord invariants.
  virtual ir::EvaluationRecord score(const ir::ImageRef& image,
                                     const ir::Instruction& instruction,
                                     const std::string& rubric) = 0;
  virtual std::string judge_id() const = 0;
};

// ---------------------------------------------------------------------------
// Retry and response cache
// ---------------------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 3;
  int backoff_base_ms = 500;  // delay doubles per failed attempt
};

std::uint64_t fnv1a64(std::string_view data);

/// File-backed response cache: one file per content-hash key holding the raw
/// response bytes. Readers are lock-free; writers go through a temp file and
/// an atomic rename.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& bytes);

  /// Stable 16-hex-digit key for a (model id, prompt) pair.
  static std::string key_for(const std::string& model_id, const std::string& prompt);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex write_mu_;
};

/// Cache-first completion with bounded exponential-backoff retry. A warm
/// cache short-circuits with zero backend attempts. AuthError is never
/// retried; other backend failures are retried up to max_attempts, then
/// surfaced as BackendUnavailable.
std::string llm_complete(LlmBackend& backend, const std::string& prompt,
                         Cache* cache, const RetryPolicy& retry);

// ---------------------------------------------------------------------------
// Mock world
// ---------------------------------------------------------------------------

/// One clause per comma-separated prompt fragment, in prompt order, with
/// `(text:w)` emphasis markers stripped. A fragment written in clause-set
/// attribute syntax ("subject [k=v]") keeps its attributes. Clauses whose
/// normalized text appears in the negative prompt are excluded. Throws
/// EmptyPrompt on an empty prompt.
ir::ImageRef mock_generate(const std::string& prompt, const std::string& negative);

/// Union of the input descriptor and mock_generate(prompt, negative): new
/// subjects are appended in prompt order, colliding subjects keep their slot
/// while incoming attribute values overwrite existing ones. An empty prompt
/// returns the input unchanged. Throws KindMismatch for non-mock images.
ir::ImageRef mock_refine(const ir::ImageRef& image, const std::string& prompt,
                         const std::string& negative);

/// Dimensions a unit contributes to under mock judging: core objects score
/// `obj` (or `text` when carrying a text_literal attribute), backgrounds
/// `backg`, spatial units `comp`, environment units the dimension named by
/// their color/texture/light/fx attribute keys, and any positive unit whose
/// text contains a pose keyword additionally scores `pose`. Constraints map
/// to no dimension.
std::vector<ir::Dimension> mock_judge_dimensions(const ir::SemanticUnit& unit);

/// Coverage scoring: per dimension, score = 1 + 4 * (covered units / mapped
/// units); dimensions with no mapped units score 3.0. A unit counts as
/// covered when every comma fragment of its normalized text appears as a
/// descriptor clause subject. Throws KindMismatch for non-mock images.
ir::EvaluationRecord mock_judge_score(const ir::ImageRef& image,
                                      const ir::DecompositionResult& result);

/// Rubric text for judge backends; embeds the canonical decomposition JSON in
/// a fenced block so mock and HTTP judges score against the same unit set.
std::string render_judge_rubric(const ir::DecompositionResult& result,
                                const ir::Instruction& instruction);

/// Recovers the decomposition embedded by render_judge_rubric, nullopt when
/// the rubric carries no fenced JSON block.
std::optional<ir::DecompositionResult> extract_rubric_decomposition(const std::string& rubric);

/// Deterministic LLM stand-in. Decomposition prompts are answered by running
/// the rule decomposer on the instruction embedded in the prompt and
/// formatting the structured unit block (with a reasoning preamble when the
/// prompt asks for step-by-step reasoning); enhancement prompts get a fixed
/// elaboration of the fragment. Scripted replies, keyed by the embedded
/// instruction or fragment text, take precedence.
class MockLlmBackend : public LlmBackend {
 public:
  explicit MockLlmBackend(lex::Lexicon lexicon = lex::Lexicon::builtin(),
                          std::string model_id = "mock-llm");

  void add_scripted(std::string key, std::string response);

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return model_id_; }

 private:
  lex::Lexicon lexicon_;
  std::string model_id_;
  std::map<std::string, std::string> scripted_;
};

class MockT2iBackend : public T2iBackend {
 public:
  explicit MockT2iBackend(planner::BackendCapabilities caps = {});

  ir::ImageRef generate(const std::string& prompt, const std::string& negative) override;
  ir::ImageRef refine(const ir::ImageRef& image, const std::string& prompt,
                      const std::string& negative) override;
  planner::BackendCapabilities capabilities() const override { return caps_; }

 private:
  planner::BackendCapabilities caps_;
};

class MockJudgeBackend : public JudgeBackend {
 public:
  explicit MockJudgeBackend(std::string judge_id = "mock-judge");

  ir::EvaluationRecord score(const ir::ImageRef& image, const ir::Instruction& instruction,
                             const std::string& rubric) override;
  std::string judge_id() const override { return judge_id_; }

 private:
  std::string judge_id_;
};

}  // namespace decot::backends
