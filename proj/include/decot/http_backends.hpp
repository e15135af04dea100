#pragma once

// HTTP adapters for the three backend roles. Request/response bodies follow
// the common chat-completions and image-generation shapes behind this adapter
// layer; endpoints, model names, and credentials come from configuration and
// the DECOT_*_API_KEY environment variables. Credential rejection surfaces as
// AuthError (never retried); transport and protocol failures surface as
// BackendFailure and are retried by llm_complete / the pipeline retry policy.

#include <string>

#include "decot/backends.hpp"
#include "decot/planner.hpp"

namespace decot::http {

struct HttpConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::string model;
  std::string api_key;
  int timeout_ms = 30000;
};

class HttpLlmBackend : public backends::LlmBackend {
 public:
  explicit HttpLlmBackend(HttpConfig config);

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return config_.model; }

 private:
  HttpConfig config_;
};

class HttpT2iBackend : public backends::T2iBackend {
 public:
  HttpT2iBackend(HttpConfig config, planner::BackendCapabilities caps);

  ir::ImageRef generate(const std::string& prompt, const std::string& negative) override;
  ir::ImageRef refine(const ir::ImageRef& image, const std::string& prompt,
                      const std::string& negative) override;
  planner::BackendCapabilities capabilities() const override { return caps_; }

 private:
  HttpConfig config_;
  planner::BackendCapabilities caps_;
};

class HttpJudgeBackend : public backends::JudgeBackend {
 public:
  explicit HttpJudgeBackend(HttpConfig config);

  ir::EvaluationRecord score(const ir::ImageRef& image, const ir::Instruction& instruction,
                             const std::string& rubric) override;
  std::string judge_id() const override { return config_.model; }

 private:
  HttpConfig config_;
};

/// Pulls the nine dimension scores out of a judge reply (fenced ```json block
/// or first balanced JSON object). Throws FormatError when any dimension is
/// missing.
std::array<double, 9> parse_judge_scores(const std::string& content);

}  // namespace decot::http
