#include "decot/decot_c.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "decot/config.hpp"
#include "decot/errors.hpp"
#include "decot/eval.hpp"
#include "decot/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

char* alloc_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

decot_status status_for(const decot::Error& e) {
  using decot::ErrorCode;
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::KindMismatch:
    case ErrorCode::ExpansionOverflow:
    case ErrorCode::OrphanRecord:
      return DECOT_E_INVALID_ARGUMENT;
    case ErrorCode::ParseError:
      return DECOT_E_PARSE;
    case ErrorCode::ValidationError:
      return DECOT_E_VALIDATION;
    case ErrorCode::FormatError:
    case ErrorCode::DuplicateId:
      return DECOT_E_FORMAT;
    case ErrorCode::ConfigError:
    case ErrorCode::MissingExemplars:
      return DECOT_E_CONFIG;
    case ErrorCode::EmptyInstruction:
    case ErrorCode::EmptyPrompt:
    case ErrorCode::EmptyPlan:
    case ErrorCode::EmptyInput:
      return DECOT_E_EMPTY_INPUT;
    case ErrorCode::BackendFailure:
    case ErrorCode::BackendUnavailable:
      return DECOT_E_BACKEND;
    case ErrorCode::AuthError:
      return DECOT_E_AUTH;
    case ErrorCode::IoError:
      return DECOT_E_IO;
  }
  return DECOT_E_INTERNAL;
}

template <typename Fn>
decot_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DECOT_OK;
  } catch (const decot::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DECOT_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DECOT_E_INTERNAL;
  }
}

decot_status require(bool ok, const char* message) {
  if (ok) return DECOT_OK;
  g_last_error = message;
  return DECOT_E_INVALID_ARGUMENT;
}

}  // namespace

struct decot_context {
  decot::config::AppConfig config = decot::config::AppConfig::defaults();
  bool progress = false;

  decot::pipeline::Runner make_runner() const { return make_runner_for(effective_run()); }

  decot::pipeline::RunConfig effective_run() const {
    return decot::config::effective_run_config(config);
  }

  decot::pipeline::Runner make_runner_for(const decot::pipeline::RunConfig& run) const {
    return decot::pipeline::Runner(decot::config::make_env(config),
                                   decot::config::make_backends(config), run);
  }

  decot::lex::Lexicon lexicon() const {
    return config.lexicon_path.empty()
               ? decot::lex::Lexicon::builtin()
               : decot::lex::Lexicon::load(config.lexicon_path.string());
  }
};

extern "C" {

const char* decot_version(void) { return "0.1.0"; }

const char* decot_last_error(void) { return g_last_error.c_str(); }

void decot_string_free(char* s) { delete[] s; }

decot_status decot_context_create(const char* config_path, decot_context** out_ctx) {
  if (decot_status s = require(out_ctx != nullptr, "out_ctx is null"); s != DECOT_OK) return s;
  *out_ctx = nullptr;
  return wrap([&] {
    auto ctx = std::make_unique<decot_context>();
    if (config_path && *config_path) {
      ctx->config = decot::config::AppConfig::load(config_path);
    }
    *out_ctx = ctx.release();
  });
}

decot_status decot_context_set_option(decot_context* ctx, const char* key, const char* value) {
  if (decot_status s = require(ctx && key && value, "ctx/key/value is null"); s != DECOT_OK)
    return s;
  return wrap([&] {
    if (std::string(key) == "progress") {
      ctx->progress = std::string(value) == "true" || std::string(value) == "1";
      return;
    }
    ctx->config.apply_option(key, value);
  });
}

void decot_context_destroy(decot_context* ctx) { delete ctx; }

decot_status decot_ingest_corpus(decot_context* ctx, const char* corpus_path, char** out_json) {
  if (decot_status s = require(ctx && corpus_path && out_json, "ctx/corpus_path/out_json is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto corpus = decot::pipeline::ingest_corpus(corpus_path);
    nlohmann::json array = nlohmann::json::array();
    for (const auto& instruction : corpus) array.push_back(decot::ir::to_json(instruction));
    *out_json = alloc_string(array.dump());
  });
}

decot_status decot_decompose(decot_context* ctx, const char* instruction_json, char** out_json) {
  if (decot_status s = require(ctx && instruction_json && out_json, "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto instruction = decot::ir::decode_instruction(instruction_json);
    auto result = ctx->make_runner().decompose(instruction);
    *out_json = alloc_string(decot::ir::encode(result));
  });
}

decot_status decot_enhance(decot_context* ctx, const char* decomposition_json, char** out_json) {
  if (decot_status s = require(ctx && decomposition_json && out_json, "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto result = decot::ir::decode_decomposition(decomposition_json);
    auto enhanced = ctx->make_runner().enhance(result);
    *out_json = alloc_string(decot::ir::encode(enhanced));
  });
}

decot_status decot_plan(decot_context* ctx, const char* decomposition_json, char** out_json) {
  if (decot_status s = require(ctx && decomposition_json && out_json, "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto result = decot::ir::decode_decomposition(decomposition_json);
    auto plan = ctx->make_runner().plan(result);
    *out_json = alloc_string(decot::ir::encode(plan));
  });
}

decot_status decot_generate(decot_context* ctx, const char* plan_json, char** out_json) {
  if (decot_status s = require(ctx && plan_json && out_json, "argument is null"); s != DECOT_OK)
    return s;
  return wrap([&] {
    auto plan = decot::ir::decode_plan(plan_json);
    auto trace = ctx->make_runner().generate(plan);
    *out_json = alloc_string(decot::ir::encode(trace));
  });
}

decot_status decot_judge(decot_context* ctx, const char* trace_json,
                         const char* decomposition_json, const char* instruction_json,
                         char** out_json) {
  if (decot_status s = require(ctx && trace_json && decomposition_json && instruction_json &&
                                   out_json,
                               "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto trace = decot::ir::decode_trace(trace_json);
    auto result = decot::ir::decode_decomposition(decomposition_json);
    auto instruction = decot::ir::decode_instruction(instruction_json);
    auto record = ctx->make_runner().judge(trace, result, instruction);
    *out_json = alloc_string(decot::ir::encode(record));
  });
}

decot_status decot_classify(decot_context* ctx, const char* instruction_json, char** out_level) {
  if (decot_status s = require(ctx && instruction_json && out_level, "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto instruction = decot::ir::decode_instruction(instruction_json);
    auto level = decot::eval::classify_complexity(instruction, ctx->lexicon());
    *out_level = alloc_string(std::string(decot::ir::to_string(level)));
  });
}

decot_status decot_run(decot_context* ctx, const char* corpus_path, const char* out_path,
                       char** out_summary_json) {
  if (decot_status s = require(ctx && corpus_path && out_path && out_summary_json,
                               "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto corpus = decot::pipeline::ingest_corpus(corpus_path);
    auto runner = ctx->make_runner();

    std::filesystem::path path(out_path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw decot::IoError("cannot open run file for writing: " + path.string());

    auto records = runner.run(corpus, &out, ctx->progress ? &std::cerr : nullptr);
    std::size_t failures = 0;
    for (const auto& record : records) {
      if (record.error) ++failures;
    }
    nlohmann::json summary{{"records", records.size()},
                           {"failures", failures},
                           {"out_path", path.string()}};
    *out_summary_json = alloc_string(summary.dump());
  });
}

decot_status decot_report(decot_context* ctx, const char* const* run_paths,
                          size_t run_path_count, const char* corpus_path,
                          const char* machine_out_path, char** out_table) {
  if (decot_status s = require(ctx && run_paths && run_path_count > 0 && out_table,
                               "need at least one run file");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    // Group evaluations (and failures) by label across all run files.
    std::vector<std::string> label_order;
    std::map<std::string, std::vector<decot::ir::EvaluationRecord>> evaluations;
    std::map<std::string, std::size_t> failures;
    std::map<std::string, std::map<std::string, decot::ir::EvaluationRecord>> by_instruction;

    for (size_t i = 0; i < run_path_count; ++i) {
      std::ifstream in(run_paths[i]);
      if (!in) throw decot::IoError(std::string("cannot open run file: ") + run_paths[i]);
      std::string line;
      while (std::getline(in, line)) {
        if (decot::lex::trim(line).empty()) continue;
        auto record = decot::pipeline::decode_run_record(line);
        if (!evaluations.count(record.label)) label_order.push_back(record.label);
        if (record.evaluation) {
          evaluations[record.label].push_back(*record.evaluation);
          by_instruction[record.label][record.instruction_id] = *record.evaluation;
        } else {
          evaluations[record.label];  // register the label
          ++failures[record.label];
        }
      }
    }

    decot::eval::AggregateReport report;
    for (const auto& label : label_order) {
      decot::eval::AggregateRow row;
      if (evaluations[label].empty()) {
        row.label = label;
      } else {
        row = decot::eval::aggregate(evaluations[label], label);
      }
      row.failure_count = failures.count(label) ? failures[label] : 0;
      report.rows.push_back(std::move(row));
    }

    std::string table = decot::eval::render_aggregate_table(report);

    if (corpus_path && *corpus_path) {
      auto corpus = decot::pipeline::ingest_corpus(corpus_path);
      auto lexicon = ctx->lexicon();
      std::vector<decot::eval::ComplexityRow> rows;
      for (const auto& label : label_order) {
        decot::eval::ComplexityRow row;
        row.label = label;
        row.means = decot::eval::bucket_by_complexity(corpus, by_instruction[label], lexicon);
        rows.push_back(std::move(row));
      }
      table += "\nby complexity:\n" + decot::eval::render_complexity_table(rows);
    }

    if (machine_out_path && *machine_out_path) {
      std::ofstream machine(machine_out_path, std::ios::trunc);
      if (!machine) {
        throw decot::IoError(std::string("cannot write report file: ") + machine_out_path);
      }
      for (const auto& row : report.rows) {
        machine << decot::eval::encode_aggregate_row(row) << '\n';
      }
    }
    *out_table = alloc_string(table);
  });
}

decot_status decot_ablate(decot_context* ctx, const char* corpus_path, int include_strategy_rows,
                          const char* machine_out_path, char** out_table) {
  if (decot_status s = require(ctx && corpus_path && out_table, "argument is null");
      s != DECOT_OK)
    return s;
  return wrap([&] {
    auto corpus = decot::pipeline::ingest_corpus(corpus_path);
    auto base = ctx->effective_run();
    auto configs = decot::eval::standard_ablation_configs(base, include_strategy_rows != 0);
    auto outcome = decot::eval::compare_ablations(
        configs, corpus,
        [&](const decot::pipeline::RunConfig& run) { return ctx->make_runner_for(run); });

    if (machine_out_path && *machine_out_path) {
      std::ofstream machine(machine_out_path, std::ios::trunc);
      if (!machine) {
        throw decot::IoError(std::string("cannot write report file: ") + machine_out_path);
      }
      for (const auto& row : outcome.report.rows) {
        machine << decot::eval::encode_aggregate_row(row) << '\n';
      }
    }
    *out_table = alloc_string(decot::eval::render_aggregate_table(outcome.report));
  });
}

}  // extern "C"
