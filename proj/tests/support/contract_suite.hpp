#pragma once

// Backend contract checks shared by the unit tests and the acceptance suite.
// The same checks run against the mock backends and against the HTTP adapters
// pointed at the local stub server; both must behave identically at the
// interface level. Checks return failure messages; empty means the contract
// holds.

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "decot/backends.hpp"

namespace decot::testsupport {

struct BackendTriple {
  std::shared_ptr<backends::LlmBackend> llm;
  std::shared_ptr<backends::T2iBackend> t2i;
  std::shared_ptr<backends::JudgeBackend> judge;
};

/// LLM wrapper counting completions; used for cache/zero-network-attempt
/// assertions.
class CountingLlm : public backends::LlmBackend {
 public:
  explicit CountingLlm(std::shared_ptr<backends::LlmBackend> inner)
      : inner_(std::move(inner)) {}

  std::string complete(const std::string& prompt) override {
    calls_.fetch_add(1);
    return inner_->complete(prompt);
  }
  std::string model_id() const override { return inner_->model_id(); }
  int calls() const { return calls_.load(); }

 private:
  std::shared_ptr<backends::LlmBackend> inner_;
  std::atomic<int> calls_{0};
};

/// LLM that fails the first `failures` completions with BackendFailure.
class FlakyLlm : public backends::LlmBackend {
 public:
  FlakyLlm(std::shared_ptr<backends::LlmBackend> inner, int failures)
      : inner_(std::move(inner)), remaining_(failures) {}

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return inner_->model_id(); }

 private:
  std::shared_ptr<backends::LlmBackend> inner_;
  std::atomic<int> remaining_;
};

/// Runs the shared contract suite against one backend triple. `scratch_dir`
/// hosts a throwaway response cache.
std::vector<std::string> run_contract_suite(const BackendTriple& triple,
                                            const std::filesystem::path& scratch_dir);

}  // namespace decot::testsupport
