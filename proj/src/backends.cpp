#include "decot/backends.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "decot/decomposer.hpp"
#include "decot/errors.hpp"

namespace decot::backends {

namespace {

using ir::Clause;
using ir::Dimension;
using ir::ImageKind;
using ir::ImageRef;
using ir::SemanticUnit;
using ir::UnitCategory;

const char* kPoseKeywords[] = {
    "sits",     "sitting",  "sit",      "stands",   "standing", "stand",
    "leaping",  "leaps",    "crouching", "crouched", "kneeling", "lying",
    "running",  "jumping",  "perched",  "pose",     "posing",   "gesturing",
    "reclining", "leaning",
};

bool has_pose_keyword(const std::string& text) {
  for (const char* keyword : kPoseKeywords) {
    if (lex::phrase_in_text(keyword, text)) return true;
  }
  return false;
}

/// Strips one outer `(text:w)` emphasis wrapper when the tail parses as a
/// number.
std::string strip_weight_marker(const std::string& fragment) {
  std::string s = lex::trim(fragment);
  if (s.size() < 4 || s.front() != '(' || s.back() != ')') return s;
  std::size_t colon = s.rfind(':');
  if (colon == std::string::npos || colon < 1) return s;
  std::string tail = s.substr(colon + 1, s.size() - colon - 2);
  char* end = nullptr;
  std::strtod(tail.c_str(), &end);
  if (end != tail.c_str() + tail.size() || tail.empty()) return s;
  return lex::trim(s.substr(1, colon - 1));
}

std::vector<std::string> split_fragments(const std::string& text) {
  std::vector<std::string> fragments;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string part = lex::trim(comma == std::string::npos ? text.substr(pos)
                                                            : text.substr(pos, comma - pos));
    if (!part.empty()) fragments.push_back(std::move(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fragments;
}

std::vector<Clause> descriptor_clauses(const ImageRef& image, const char* op) {
  if (image.kind != ImageKind::MockDescriptor) {
    throw KindMismatch(std::string(op) + " requires a mock descriptor image");
  }
  return ir::decode_clauses(image.value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Hashing, cache, retry
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string Cache::key_for(const std::string& model_id, const std::string& prompt) {
  std::string material = model_id;
  material.push_back('\x1f');
  material += prompt;
  std::uint64_t hash = fnv1a64(material);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::optional<std::string> Cache::get(const std::string& key) const {
  std::ifstream in(dir_ / key, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void Cache::put(const std::string& key, const std::string& bytes) {
  std::lock_guard<std::mutex> lock(write_mu_);
  std::filesystem::path tmp = dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache file: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, dir_ / key);
}

std::string llm_complete(LlmBackend& backend, const std::string& prompt, Cache* cache,
                         const RetryPolicy& retry) {
  std::string key;
  if (cache) {
    key = Cache::key_for(backend.model_id(), prompt);
    if (auto hit = cache->get(key)) return *hit;
  }
  int attempts = std::max(1, retry.max_attempts);
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      std::string response = backend.complete(prompt);
      if (cache) cache->put(key, response);
      return response;
    } catch (const AuthError&) {
      throw;  // credential rejection is never retried
    } catch (const std::exception& e) {
      last_error = e.what();
      if (attempt < attempts) {
        auto delay = std::chrono::milliseconds(
            static_cast<std::int64_t>(retry.backoff_base_ms) << (attempt - 1));
        if (delay.count() > 0) std::this_thread::sleep_for(delay);
      }
    }
  }
  throw BackendUnavailable("backend '" + backend.model_id() + "' failed after " +
                           std::to_string(attempts) + " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// Mock generation and refinement
// ---------------------------------------------------------------------------

ImageRef mock_generate(const std::string& prompt, const std::string& negative) {
  if (lex::trim(prompt).empty()) throw EmptyPrompt("mock generation needs a prompt");

  std::string negative_norm = lex::normalize_text(negative);
  std::vector<Clause> clauses;
  std::set<std::string> seen;
  for (const std::string& fragment : split_fragments(prompt)) {
    std::string body = strip_weight_marker(fragment);
    Clause clause;
    // Fragments written in clause-set syntax keep their attributes.
    try {
      std::vector<Clause> parsed = ir::decode_clauses(body);
      if (parsed.size() == 1) {
        clause = std::move(parsed.front());
      } else {
        clause.subject = body;
      }
    } catch (const FormatError&) {
      clause.subject = body;
    }
    std::string norm = lex::normalize_text(clause.subject);
    if (norm.empty()) continue;
    if (!negative_norm.empty() && negative_norm.find(norm) != std::string::npos) continue;
    if (!seen.insert(norm).second) continue;
    clauses.push_back(std::move(clause));
  }
  ImageRef image;
  image.kind = ImageKind::MockDescriptor;
  image.value = ir::encode_clauses(clauses);
  return image;
}

ImageRef mock_refine(const ImageRef& image, const std::string& prompt,
                     const std::string& negative) {
  std::vector<Clause> existing = descriptor_clauses(image, "mock_refine");
  if (lex::trim(prompt).empty()) return image;

  ImageRef incoming_image = mock_generate(prompt, negative);
  std::vector<Clause> incoming = ir::decode_clauses(incoming_image.value);

  for (Clause& addition : incoming) {
    std::string norm = lex::normalize_text(addition.subject);
    auto slot = std::find_if(existing.begin(), existing.end(), [&](const Clause& c) {
      return lex::normalize_text(c.subject) == norm;
    });
    if (slot == existing.end()) {
      existing.push_back(std::move(addition));
    } else {
      for (const auto& [k, v] : addition.attributes) slot->attributes[k] = v;
    }
  }
  ImageRef out;
  out.kind = ImageKind::MockDescriptor;
  out.value = ir::encode_clauses(existing);
  return out;
}

// ---------------------------------------------------------------------------
// Mock judging
// ---------------------------------------------------------------------------

std::vector<Dimension> mock_judge_dimensions(const SemanticUnit& unit) {
  std::vector<Dimension> dims;
  switch (unit.category) {
    case UnitCategory::CoreObject:
      dims.push_back(unit.attributes.count("text_literal") ? Dimension::Text
                                                           : Dimension::Obj);
      break;
    case UnitCategory::Background:
      dims.push_back(Dimension::Backg);
      break;
    case UnitCategory::SpatialComposition:
      dims.push_back(Dimension::Comp);
      break;
    case UnitCategory::Environment:
      for (const auto& [key, value] : unit.attributes) {
        std::string k = lex::to_lower(key);
        if (k == "color") dims.push_back(Dimension::Color);
        else if (k == "texture") dims.push_back(Dimension::Texture);
        else if (k == "light" || k == "lighting") dims.push_back(Dimension::Light);
        else if (k == "fx" || k == "effect" || k == "effects") dims.push_back(Dimension::FX);
      }
      break;
    case UnitCategory::Constraint:
      break;
  }
  if (unit.polarity == ir::Polarity::Positive && has_pose_keyword(unit.text)) {
    dims.push_back(Dimension::Pose);
  }
  return dims;
}

ir::EvaluationRecord mock_judge_score(const ImageRef& image,
                                      const ir::DecompositionResult& result) {
  std::vector<Clause> clauses = descriptor_clauses(image, "mock_judge_score");
  std::set<std::string> subjects;
  for (const Clause& clause : clauses) subjects.insert(lex::normalize_text(clause.subject));

  auto covered = [&subjects](const SemanticUnit& unit) {
    std::vector<std::string> fragments = split_fragments(unit.text);
    if (fragments.empty()) return false;
    for (const std::string& fragment : fragments) {
      std::string norm = lex::normalize_text(fragment);
      if (norm.empty()) continue;
      if (!subjects.count(norm)) return false;
    }
    return true;
  };

  std::array<int, 9> mapped{};
  std::array<int, 9> hit{};
  for (const SemanticUnit& unit : result.units) {
    bool is_covered = covered(unit);
    for (Dimension d : mock_judge_dimensions(unit)) {
      ++mapped[static_cast<std::size_t>(d)];
      if (is_covered) ++hit[static_cast<std::size_t>(d)];
    }
  }

  std::array<double, 9> scores{};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mapped[i] == 0) {
      scores[i] = 3.0;  // neutral for unpopulated dimensions
    } else {
      scores[i] = 1.0 + 4.0 * static_cast<double>(hit[i]) / static_cast<double>(mapped[i]);
    }
  }
  return ir::make_evaluation_record(result.instruction_id, scores);
}

// ---------------------------------------------------------------------------
// Judge rubric
// ---------------------------------------------------------------------------

std::string render_judge_rubric(const ir::DecompositionResult& result,
                                const ir::Instruction& instruction) {
  std::string rubric =
      "Score the generated image against the instruction on nine dimensions "
      "(obj, backg, color, texture, light, text, comp, pose, fx), each from 1.0 "
      "(absent or wrong) to 5.0 (fully faithful).\n";
  rubric += "Instruction: " + instruction.text + "\n";
  rubric += "Decomposed elements:\n```json\n" + ir::encode(result) + "\n```\n";
  rubric += "Reply with a JSON object mapping each dimension name to its score.";
  return rubric;
}

std::optional<ir::DecompositionResult> extract_rubric_decomposition(const std::string& rubric) {
  const std::string open = "```json\n";
  std::size_t start = rubric.find(open);
  if (start == std::string::npos) return std::nullopt;
  start += open.size();
  std::size_t end = rubric.find("\n```", start);
  if (end == std::string::npos) return std::nullopt;
  return ir::decode_decomposition(rubric.substr(start, end - start));
}

// ---------------------------------------------------------------------------
// Mock backends
// ---------------------------------------------------------------------------

MockLlmBackend::MockLlmBackend(lex::Lexicon lexicon, std::string model_id)
    : lexicon_(std::move(lexicon)), model_id_(std::move(model_id)) {}

void MockLlmBackend::add_scripted(std::string key, std::string response) {
  scripted_[std::move(key)] = std::move(response);
}

namespace {

/// Text after the last line starting with `marker`, trimmed; empty if absent.
std::string after_last_line_marker(const std::string& prompt, const std::string& marker) {
  std::size_t found = std::string::npos;
  std::size_t pos = 0;
  while (pos < prompt.size()) {
    std::size_t line_start = pos;
    std::size_t nl = prompt.find('\n', pos);
    if (prompt.compare(line_start, marker.size(), marker) == 0) found = line_start;
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (found == std::string::npos) return {};
  return lex::trim(prompt.substr(found + marker.size()));
}

}  // namespace

std::string MockLlmBackend::complete(const std::string& prompt) {
  std::string fragment = after_last_line_marker(prompt, "Fragment: ");
  if (!fragment.empty()) {
    auto scripted = scripted_.find(fragment);
    if (scripted != scripted_.end()) return scripted->second;
    return fragment + " rendered in fine detail";
  }

  std::string instruction_text = after_last_line_marker(prompt, "Instruction: ");
  if (!instruction_text.empty()) {
    auto scripted = scripted_.find(instruction_text);
    if (scripted != scripted_.end()) return scripted->second;

    ir::Instruction instruction;
    instruction.id = "mock";
    instruction.text = instruction_text;
    ir::DecompositionResult result = decomposer::rule_decompose(instruction, lexicon_);
    std::string block = decomposer::format_units(result);
    if (lex::phrase_in_text(std::string(decomposer::kCotMarker), prompt)) {
      std::string reasoning =
          "Reasoning:\nSegmented the instruction into " +
          std::to_string(result.units.size()) +
          " clauses and labelled each by its dominant cue.\n\n";
      return reasoning + block;
    }
    return block;
  }

  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(prompt)));
  return std::string("mock-response-") + buf;
}

MockT2iBackend::MockT2iBackend(planner::BackendCapabilities caps) : caps_(caps) {}

ImageRef MockT2iBackend::generate(const std::string& prompt, const std::string& negative) {
  return mock_generate(prompt, negative);
}

ImageRef MockT2iBackend::refine(const ImageRef& image, const std::string& prompt,
                                const std::string& negative) {
  if (!caps_.supports_staged_refinement) {
    throw InvalidArgument("refine called on a backend without staged refinement");
  }
  return mock_refine(image, prompt, negative);
}

MockJudgeBackend::MockJudgeBackend(std::string judge_id) : judge_id_(std::move(judge_id)) {}

ir::EvaluationRecord MockJudgeBackend::score(const ImageRef& image,
                                             const ir::Instruction& instruction,
                                             const std::string& rubric) {
  (void)instruction;
  std::optional<ir::DecompositionResult> result = extract_rubric_decomposition(rubric);
  if (!result) {
    throw InvalidArgument("mock judge needs a rubric embedding the decomposition");
  }
  return mock_judge_score(image, *result);
}

}  // namespace decot::backends
