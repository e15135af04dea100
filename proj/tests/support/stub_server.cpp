#include "support/stub_server.hpp"

#include <cstdio>

#include "decot/backends.hpp"
#include "decot/decomposer.hpp"

#include "httplib.h"
#include "json.hpp"

namespace decot::testsupport {

namespace {

using nlohmann::json;

std::string hash_hex(const std::string& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(backends::fnv1a64(s)));
  return buf;
}

bool authorized(const httplib::Request& req) {
  return req.get_header_value("Authorization") ==
         std::string("Bearer ") + StubServer::api_key();
}

std::string after_marker(const std::string& text, const std::string& marker) {
  std::size_t found = std::string::npos;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (text.compare(pos, marker.size(), marker) == 0) found = pos;
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (found == std::string::npos) return {};
  return lex::trim(text.substr(found + marker.size()));
}

/// Mirrors the mock LLM: rule-decomposes embedded instructions, echoes
/// judge scores, elaborates enhancement fragments.
std::string stub_completion(const std::string& prompt) {
  if (prompt.find("Score the generated image") != std::string::npos) {
    return "Scores follow.\n```json\n"
           "{\"obj\": 4.5, \"backg\": 4.0, \"color\": 3.5, \"texture\": 3.0, "
           "\"light\": 2.5, \"text\": 2.0, \"comp\": 5.0, \"pose\": 1.5, \"fx\": 1.0}\n"
           "```";
  }
  std::string fragment = after_marker(prompt, "Fragment: ");
  if (!fragment.empty()) return fragment + " rendered in fine detail";

  std::string instruction_text = after_marker(prompt, "Instruction: ");
  if (!instruction_text.empty()) {
    ir::Instruction instruction;
    instruction.id = "stub";
    instruction.text = instruction_text;
    return decomposer::format_units(
        decomposer::rule_decompose(instruction, lex::Lexicon::builtin()));
  }
  return "stub-response-" + hash_hex(prompt);
}

}  // namespace

StubServer::StubServer() : server_(std::make_unique<httplib::Server>()) {
  server_->Post("/v1/chat/completions", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    llm_calls_.fetch_add(1);
    if (!authorized(req)) {
      res.status = 401;
      res.set_content(R"({"error": "unauthorized"})", "application/json");
      return;
    }
    if (llm_failures_.load() > 0) {
      llm_failures_.fetch_sub(1);
      res.status = 500;
      res.set_content(R"({"error": "transient"})", "application/json");
      return;
    }
    json body = json::parse(req.body, nullptr, false);
    std::string prompt;
    if (body.is_object() && body.contains("messages") && !body["messages"].empty()) {
      prompt = body["messages"][0].value("content", "");
    }
    std::string content = stub_completion(prompt);
    json reply{{"choices", json::array({json{{"message", json{{"role", "assistant"},
                                                              {"content", content}}}}})},
               {"usage", json{{"prompt_tokens", 0}, {"completion_tokens", 0}}}};
    res.set_content(reply.dump(), "application/json");
  });

  auto image_handler = [this](const char* tag) {
    return [this, tag](const httplib::Request& req, httplib::Response& res) {
      image_calls_.fetch_add(1);
      if (!authorized(req)) {
        res.status = 401;
        res.set_content(R"({"error": "unauthorized"})", "application/json");
        return;
      }
      json body = json::parse(req.body, nullptr, false);
      std::string prompt = body.is_object() ? body.value("prompt", "") : "";
      if (lex::trim(prompt).empty()) {
        res.status = 400;
        res.set_content(R"({"error": "empty prompt"})", "application/json");
        return;
      }
      std::string image = body.is_object() ? body.value("image", "") : "";
      json reply{{"data", json::array({json{
                     {"url", "http://images.stub/" + std::string(tag) + "-" +
                                 hash_hex(image + "|" + prompt)}}})}};
      res.set_content(reply.dump(), "application/json");
    };
  };
  server_->Post("/v1/images/generations", image_handler("gen"));
  server_->Post("/v1/images/edits", image_handler("edit"));

  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

StubServer::~StubServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

}  // namespace decot::testsupport
