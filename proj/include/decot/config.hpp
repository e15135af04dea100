#pragma once

// Run configuration: a sectioned text file plus key/value overrides resolve
// to data paths, backend endpoints, capability presets, the weight policy,
// and pipeline defaults. Named backend profiles select the backend kinds and
// the capability preset in one step; `mock` forces all-mock backends while
// keeping the selected capabilities.

#include <filesystem>
#include <map>
#include <string>

#include "decot/pipeline.hpp"

namespace decot::config {

struct BackendProfile {
  std::string llm_kind = "mock";    // mock | rule | http
  std::string t2i_kind = "mock";    // mock | http
  std::string judge_kind = "mock";  // mock | http
  planner::BackendCapabilities caps;
};

struct AppConfig {
  // Data paths; empty means the compiled-in defaults.
  std::filesystem::path lexicon_path;
  std::filesystem::path expansion_path;
  std::filesystem::path template_path;

  // HTTP endpoints per role (model doubles as the judge/model identity).
  std::string llm_endpoint, llm_model = "decot-llm";
  std::string t2i_endpoint, t2i_model = "decot-t2i";
  std::string judge_endpoint, judge_model = "decot-judge";
  int http_timeout_ms = 30000;

  std::string profile = "mock-staged";
  bool force_mock = false;
  std::map<std::string, BackendProfile> profiles;  // built-ins plus config file entries

  planner::WeightPolicy weights = planner::WeightPolicy::defaults();
  backends::RetryPolicy retry{};
  pipeline::RunConfig run;

  static AppConfig defaults();
  static AppConfig load(const std::filesystem::path& path);

  /// Applies one CLI-style override; throws ConfigError on unknown keys or
  /// unparsable values. Keys: strategy, enhancement, adaptive, baseline,
  /// label, backend_profile, mock, parallelism, seed, cache_dir,
  /// max_expansion_ratio, llm_endpoint, llm_model, t2i_endpoint, t2i_model,
  /// judge_endpoint, judge_model, lexicon, expansion_lexicon, template.
  void apply_option(const std::string& key, const std::string& value);

  const BackendProfile& resolved_profile() const;
};

/// Loads lexicons/templates from configured paths (falling back to built-ins).
pipeline::PipelineEnv make_env(const AppConfig& config);

/// Builds the backend set for the resolved profile. HTTP roles require their
/// endpoint plus the DECOT_LLM_API_KEY / DECOT_T2I_API_KEY /
/// DECOT_JUDGE_API_KEY environment variable; missing either is a ConfigError
/// raised before any work starts. Mock profiles get a fixed clock so runs are
/// byte-reproducible.
pipeline::BackendSet make_backends(const AppConfig& config);

/// The run config with backend ids resolved from the (possibly mock-forced)
/// profile.
pipeline::RunConfig effective_run_config(const AppConfig& config);

}  // namespace decot::config
