#include "decot/config.hpp"

#include <cstdlib>
#include <fstream>

#include "decot/errors.hpp"
#include "decot/http_backends.hpp"

namespace decot::config {

namespace {

bool parse_bool(const std::string& value, const std::string& key) {
  std::string v = lex::to_lower(lex::trim(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("option '" + key + "': expected a boolean, got '" + value + "'");
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    return std::stoi(value);
  } catch (const std::exception&) {
    throw ConfigError("option '" + key + "': expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw ConfigError("option '" + key + "': expected a number, got '" + value + "'");
  }
}

std::map<std::string, BackendProfile> builtin_profiles() {
  std::map<std::string, BackendProfile> profiles;

  BackendProfile mock_staged;
  mock_staged.caps = {true, 256, true};
  profiles["mock-staged"] = mock_staged;

  BackendProfile mock_fused;
  mock_fused.caps = {false, 256, true};
  profiles["mock-fused"] = mock_fused;

  BackendProfile rule = mock_staged;
  rule.llm_kind = "rule";
  profiles["rule"] = rule;

  // Single-shot HTTP profiles for the reference generators; emphasis syntax
  // only where the ecosystem convention supports it.
  auto http_profile = [](bool weight_syntax) {
    BackendProfile p;
    p.llm_kind = "http";
    p.t2i_kind = "http";
    p.judge_kind = "http";
    p.caps = {false, 256, weight_syntax};
    return p;
  };
  profiles["flux1-dev"] = http_profile(true);
  profiles["omnigen"] = http_profile(true);
  profiles["infinity-8b"] = http_profile(false);
  profiles["janus-pro-7b"] = http_profile(false);
  return profiles;
}

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

}  // namespace

AppConfig AppConfig::defaults() {
  AppConfig config;
  config.profiles = builtin_profiles();
  config.run.enhancement.mode = enhancer::EnhancementMode::Lexicon;
  return config;
}

const BackendProfile& AppConfig::resolved_profile() const {
  auto it = profiles.find(profile);
  if (it == profiles.end()) throw ConfigError("unknown backend profile '" + profile + "'");
  return it->second;
}

void AppConfig::apply_option(const std::string& key, const std::string& value) {
  std::string k = lex::to_lower(lex::trim(key));
  if (k == "strategy") {
    auto strategy = ir::strategy_from_string(value);
    if (!strategy) throw ConfigError("unknown strategy '" + value + "'");
    run.strategy = *strategy;
  } else if (k == "enhancement") {
    auto mode = enhancer::enhancement_mode_from_string(value);
    if (!mode) throw ConfigError("unknown enhancement mode '" + value + "'");
    run.enhancement.mode = *mode;
  } else if (k == "max_expansion_ratio") {
    run.enhancement.max_expansion_ratio = parse_double(value, k);
  } else if (k == "adaptive") {
    run.adaptive = parse_bool(value, k);
  } else if (k == "baseline") {
    run.baseline = parse_bool(value, k);
  } else if (k == "label") {
    run.label = value;
  } else if (k == "backend_profile" || k == "profile") {
    profile = value;
  } else if (k == "mock") {
    force_mock = parse_bool(value, k);
  } else if (k == "parallelism") {
    int n = parse_int(value, k);
    if (n < 1) throw ConfigError("parallelism must be positive");
    run.parallelism = n;
  } else if (k == "seed") {
    run.seed = static_cast<std::uint64_t>(parse_int(value, k));
  } else if (k == "cache_dir") {
    run.cache_dir = value;
  } else if (k == "retry_max_attempts") {
    retry.max_attempts = parse_int(value, k);
  } else if (k == "retry_backoff_ms") {
    retry.backoff_base_ms = parse_int(value, k);
  } else if (k == "http_timeout_ms") {
    http_timeout_ms = parse_int(value, k);
  } else if (k == "llm_endpoint") {
    llm_endpoint = value;
  } else if (k == "llm_model") {
    llm_model = value;
  } else if (k == "t2i_endpoint") {
    t2i_endpoint = value;
  } else if (k == "t2i_model") {
    t2i_model = value;
  } else if (k == "judge_endpoint") {
    judge_endpoint = value;
  } else if (k == "judge_model") {
    judge_model = value;
  } else if (k == "lexicon") {
    lexicon_path = value;
  } else if (k == "expansion_lexicon") {
    expansion_path = value;
  } else if (k == "template") {
    template_path = value;
  } else {
    throw ConfigError("unknown option '" + key + "'");
  }
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  AppConfig config = defaults();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = lex::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (trimmed.front() == '[' && trimmed.back() == ']') {
      section = lex::to_lower(trimmed.substr(1, trimmed.size() - 2));
      continue;
    }
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = lex::trim(trimmed.substr(0, eq));
    std::string value = lex::trim(trimmed.substr(eq + 1));

    if (section.rfind("capabilities:", 0) == 0) {
      std::string name = section.substr(std::string("capabilities:").size());
      BackendProfile& profile = config.profiles[name];
      std::string k = lex::to_lower(key);
      if (k == "supports_staged_refinement") {
        profile.caps.supports_staged_refinement = parse_bool(value, k);
      } else if (k == "max_prompt_words") {
        profile.caps.max_prompt_words = parse_int(value, k);
      } else if (k == "supports_weight_syntax") {
        profile.caps.supports_weight_syntax = parse_bool(value, k);
      } else if (k == "llm") {
        profile.llm_kind = value;
      } else if (k == "t2i") {
        profile.t2i_kind = value;
      } else if (k == "judge") {
        profile.judge_kind = value;
      } else {
        throw ConfigError("config line " + std::to_string(line_no) + ": unknown capability key");
      }
      continue;
    }
    if (section == "weights") {
      auto category = ir::category_from_string(key);
      if (!category) {
        throw ConfigError("config line " + std::to_string(line_no) + ": unknown category");
      }
      config.weights.category_multipliers[*category] = parse_double(value, key);
      continue;
    }
    // [paths], [backends], [policy] keys share the option namespace.
    config.apply_option(key, value);
  }
  return config;
}

pipeline::PipelineEnv make_env(const AppConfig& config) {
  pipeline::PipelineEnv env;
  if (!config.lexicon_path.empty()) {
    env.lexicon = lex::Lexicon::load(config.lexicon_path.string());
  }
  if (!config.expansion_path.empty()) {
    env.expansion = lex::ExpansionLexicon::load(config.expansion_path.string());
  }
  if (!config.template_path.empty()) {
    env.tmpl = decomposer::DecompositionTemplate::load(config.template_path.string());
  }
  env.weights = config.weights;
  env.retry = config.retry;
  return env;
}

pipeline::BackendSet make_backends(const AppConfig& config) {
  BackendProfile profile = config.resolved_profile();
  if (config.force_mock) {
    if (profile.llm_kind == "http") profile.llm_kind = "mock";
    profile.t2i_kind = "mock";
    profile.judge_kind = "mock";
  }

  lex::Lexicon lexicon = config.lexicon_path.empty()
                             ? lex::Lexicon::builtin()
                             : lex::Lexicon::load(config.lexicon_path.string());

  pipeline::BackendSet set;
  bool any_http = false;

  if (profile.llm_kind == "http") {
    any_http = true;
    std::string key = env_or_empty("DECOT_LLM_API_KEY");
    if (config.llm_endpoint.empty() || key.empty()) {
      throw ConfigError("http llm backend needs llm_endpoint and DECOT_LLM_API_KEY");
    }
    set.llm = std::make_shared<http::HttpLlmBackend>(
        http::HttpConfig{config.llm_endpoint, config.llm_model, key, config.http_timeout_ms});
  } else {
    // "rule" keeps a mock LLM around for enhancement prompts.
    set.llm = std::make_shared<backends::MockLlmBackend>(lexicon);
  }

  if (profile.t2i_kind == "http") {
    any_http = true;
    std::string key = env_or_empty("DECOT_T2I_API_KEY");
    if (config.t2i_endpoint.empty() || key.empty()) {
      throw ConfigError("http t2i backend needs t2i_endpoint and DECOT_T2I_API_KEY");
    }
    set.t2i = std::make_shared<http::HttpT2iBackend>(
        http::HttpConfig{config.t2i_endpoint, config.t2i_model, key, config.http_timeout_ms},
        profile.caps);
  } else {
    set.t2i = std::make_shared<backends::MockT2iBackend>(profile.caps);
  }

  if (profile.judge_kind == "http") {
    any_http = true;
    std::string key = env_or_empty("DECOT_JUDGE_API_KEY");
    if (config.judge_endpoint.empty() || key.empty()) {
      throw ConfigError("http judge backend needs judge_endpoint and DECOT_JUDGE_API_KEY");
    }
    set.judge = std::make_shared<http::HttpJudgeBackend>(http::HttpConfig{
        config.judge_endpoint, config.judge_model, key, config.http_timeout_ms});
  } else {
    set.judge = std::make_shared<backends::MockJudgeBackend>();
  }

  set.now_ms = any_http ? pipeline::steady_clock_ms() : pipeline::fixed_clock_ms();
  return set;
}

pipeline::RunConfig effective_run_config(const AppConfig& config) {
  BackendProfile profile = config.resolved_profile();
  pipeline::RunConfig run = config.run;
  run.llm_backend_id = profile.llm_kind;
  run.t2i_backend_id = profile.t2i_kind;
  run.judge_backend_id = profile.judge_kind;
  if (config.force_mock && run.llm_backend_id == "http") run.llm_backend_id = "mock";
  if (config.force_mock) {
    run.t2i_backend_id = "mock";
    run.judge_backend_id = "mock";
  }
  return run;
}

}  // namespace decot::config
