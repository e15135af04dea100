#include "decot/http_backends.hpp"

#include "decot/errors.hpp"
#include "decot/lexicon.hpp"

#include "httplib.h"
#include "json.hpp"

namespace decot::http {

namespace {

using nlohmann::json;

json post_json(const HttpConfig& config, const std::string& path, const json& body) {
  httplib::Client client(config.base_url);
  client.set_connection_timeout(0, config.timeout_ms * 1000);
  client.set_read_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);

  httplib::Headers headers;
  if (!config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config.api_key);
  }
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw BackendFailure("request to " + config.base_url + path + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw AuthError("credentials rejected by " + config.base_url + path);
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendFailure("HTTP " + std::to_string(res->status) + " from " +
                         config.base_url + path);
  }
  json parsed = json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) {
    throw BackendFailure("non-JSON response from " + config.base_url + path);
  }
  return parsed;
}

std::string chat_completion(const HttpConfig& config, const std::string& prompt) {
  json body{
      {"model", config.model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
  };
  json response = post_json(config, "/v1/chat/completions", body);
  try {
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw BackendFailure("chat response missing choices[0].message.content");
  }
}

std::string image_url_from(const json& response, const char* path) {
  try {
    return response.at("data").at(0).at("url").get<std::string>();
  } catch (const json::exception&) {
    throw BackendFailure(std::string("image response from ") + path +
                         " missing data[0].url");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LLM
// ---------------------------------------------------------------------------

HttpLlmBackend::HttpLlmBackend(HttpConfig config) : config_(std::move(config)) {}

std::string HttpLlmBackend::complete(const std::string& prompt) {
  return chat_completion(config_, prompt);
}

// ---------------------------------------------------------------------------
// T2I
// ---------------------------------------------------------------------------

HttpT2iBackend::HttpT2iBackend(HttpConfig config, planner::BackendCapabilities caps)
    : config_(std::move(config)), caps_(caps) {}

ir::ImageRef HttpT2iBackend::generate(const std::string& prompt, const std::string& negative) {
  if (lex::trim(prompt).empty()) throw EmptyPrompt("image generation needs a prompt");
  json body{{"model", config_.model}, {"prompt", prompt}, {"negative_prompt", negative}};
  json response = post_json(config_, "/v1/images/generations", body);
  return ir::ImageRef{ir::ImageKind::Url, image_url_from(response, "generations")};
}

ir::ImageRef HttpT2iBackend::refine(const ir::ImageRef& image, const std::string& prompt,
                                    const std::string& negative) {
  if (!caps_.supports_staged_refinement) {
    throw InvalidArgument("refine called on a backend without staged refinement");
  }
  if (lex::trim(prompt).empty()) return image;
  json body{{"model", config_.model},
            {"image", image.value},
            {"prompt", prompt},
            {"negative_prompt", negative}};
  json response = post_json(config_, "/v1/images/edits", body);
  return ir::ImageRef{ir::ImageKind::Url, image_url_from(response, "edits")};
}

// ---------------------------------------------------------------------------
// Judge
// ---------------------------------------------------------------------------

HttpJudgeBackend::HttpJudgeBackend(HttpConfig config) : config_(std::move(config)) {}

std::array<double, 9> parse_judge_scores(const std::string& content) {
  std::string payload;
  const std::string fence = "```json";
  std::size_t start = content.find(fence);
  if (start != std::string::npos) {
    start += fence.size();
    std::size_t end = content.find("```", start);
    payload = content.substr(start, end == std::string::npos ? std::string::npos
                                                             : end - start);
  } else {
    std::size_t open = content.find('{');
    std::size_t close = content.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw FormatError("judge reply carries no JSON object");
    }
    payload = content.substr(open, close - open + 1);
  }
  json parsed = json::parse(payload, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw FormatError("judge reply JSON does not parse");
  }

  std::array<double, 9> scores{};
  std::array<bool, 9> present{};
  for (const auto& [key, value] : parsed.items()) {
    auto dim = ir::dimension_from_string(key);
    if (!dim || !value.is_number()) continue;
    scores[static_cast<std::size_t>(*dim)] = value.get<double>();
    present[static_cast<std::size_t>(*dim)] = true;
  }
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (!present[i]) {
      throw FormatError("judge reply missing dimension '" +
                        std::string(ir::to_string(ir::kAllDimensions[i])) + "'");
    }
  }
  return scores;
}

ir::EvaluationRecord HttpJudgeBackend::score(const ir::ImageRef& image,
                                             const ir::Instruction& instruction,
                                             const std::string& rubric) {
  std::string prompt = rubric + "\nImage: " + image.value;
  std::string content = chat_completion(config_, prompt);
  try {
    return ir::make_evaluation_record(instruction.id, parse_judge_scores(content));
  } catch (const FormatError& e) {
    throw BackendFailure(std::string("judge reply unusable: ") + e.what());
  }
}

}  // namespace decot::http
