// decot command-line interface. Every pipeline operation goes through the C
// API (decot_c.h); this binary only parses flags, moves lines between files,
// and maps statuses to exit codes. Exit codes: 0 success, 1 runtime or
// per-record failures, 2 usage/config errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decot/decot_c.h"

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct StringHandle {
  char* value = nullptr;
  ~StringHandle() { decot_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

struct ContextHandle {
  decot_context* ctx = nullptr;
  ~ContextHandle() { decot_context_destroy(ctx); }
};

[[noreturn]] void fail(const std::string& message, int code = 1) {
  std::cerr << "decot: " << message << "\n";
  std::exit(code);
}

void check(decot_status status, const char* what) {
  if (status != DECOT_OK) {
    fail(std::string(what) + ": " + decot_last_error(),
         status == DECOT_E_CONFIG || status == DECOT_E_INVALID_ARGUMENT ? 2 : 1);
  }
}

struct CommonOptions {
  std::string config_path;
  std::string profile;
  std::string strategy;
  std::string cache_dir;
  std::string label;
  bool no_enhance = false;
  bool no_adaptive = false;
  bool mock = false;
  int parallelism = 0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "config file path");
  cmd->add_option("--backend-profile", opts.profile, "named backend profile");
  cmd->add_option("--strategy", opts.strategy,
                  "prompting strategy: zero-shot|few-shot|few-shot-cot");
  cmd->add_option("--cache-dir", opts.cache_dir, "response cache directory");
  cmd->add_option("--label", opts.label, "run label");
  cmd->add_flag("--no-enhance", opts.no_enhance, "disable semantic enhancement");
  cmd->add_flag("--no-adaptive", opts.no_adaptive, "force fused prompts");
  cmd->add_flag("--mock", opts.mock, "force all-mock backends");
  cmd->add_option("--parallelism", opts.parallelism, "instructions in flight");
  cmd->add_option("--seed", opts.seed, "run seed");
}

ContextHandle make_context(const CommonOptions& opts) {
  ContextHandle handle;
  check(decot_context_create(opts.config_path.empty() ? nullptr : opts.config_path.c_str(),
                             &handle.ctx),
        "context");
  auto set = [&](const char* key, const std::string& value) {
    check(decot_context_set_option(handle.ctx, key, value.c_str()), key);
  };
  if (!opts.profile.empty()) set("backend_profile", opts.profile);
  if (!opts.strategy.empty()) set("strategy", opts.strategy);
  if (!opts.cache_dir.empty()) set("cache_dir", opts.cache_dir);
  if (!opts.label.empty()) set("label", opts.label);
  if (opts.no_enhance) set("enhancement", "off");
  if (opts.no_adaptive) set("adaptive", "false");
  if (opts.mock) set("mock", "true");
  if (opts.parallelism > 0) set("parallelism", std::to_string(opts.parallelism));
  if (opts.seed >= 0) set("seed", std::to_string(opts.seed));
  return handle;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  auto collect = [&lines](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  };
  if (path == "-") {
    collect(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) fail("cannot open input file: " + path);
    collect(in);
  }
  return lines;
}

class LineWriter {
 public:
  explicit LineWriter(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::trunc);
      if (!file_) fail("cannot open output file: " + path);
    }
  }
  void write(const std::string& line) {
    (file_.is_open() ? file_ : std::cout) << line << "\n";
  }

 private:
  std::ofstream file_;
};

std::vector<json> ingest_instructions(decot_context* ctx, const std::string& corpus_path) {
  StringHandle corpus_json;
  check(decot_ingest_corpus(ctx, corpus_path.c_str(), &corpus_json.value), "ingest");
  json array = json::parse(corpus_json.str());
  if (array.empty()) std::cerr << "decot: warning: corpus '" << corpus_path << "' is empty\n";
  return std::vector<json>(array.begin(), array.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decot: instruction decomposition and prompt planning pipeline"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string corpus_path, in_path, out_path, decompositions_path, report_out;
  std::vector<std::string> run_files;
  bool strategies = false;

  auto* cmd_decompose = app.add_subcommand("decompose", "corpus -> decomposition records");
  add_common(cmd_decompose, opts);
  cmd_decompose->add_option("--corpus", corpus_path, "corpus file (JSON lines)")->required();
  cmd_decompose->add_option("--out", out_path, "output file ('-' for stdout)");

  auto* cmd_enhance = app.add_subcommand("enhance", "decomposition -> enhanced decomposition");
  add_common(cmd_enhance, opts);
  cmd_enhance->add_option("--in", in_path, "decomposition records ('-' for stdin)")->required();
  cmd_enhance->add_option("--out", out_path, "output file");

  auto* cmd_plan = app.add_subcommand("plan", "decomposition -> prompt plan");
  add_common(cmd_plan, opts);
  cmd_plan->add_option("--in", in_path, "decomposition records ('-' for stdin)")->required();
  cmd_plan->add_option("--out", out_path, "output file");

  auto* cmd_generate = app.add_subcommand("generate", "prompt plan -> generation trace");
  add_common(cmd_generate, opts);
  cmd_generate->add_option("--in", in_path, "plan records ('-' for stdin)")->required();
  cmd_generate->add_option("--out", out_path, "output file");

  auto* cmd_judge = app.add_subcommand("judge", "trace + decomposition -> evaluation record");
  add_common(cmd_judge, opts);
  cmd_judge->add_option("--in", in_path, "trace records")->required();
  cmd_judge->add_option("--decompositions", decompositions_path, "matching decomposition records")
      ->required();
  cmd_judge->add_option("--corpus", corpus_path, "corpus file")->required();
  cmd_judge->add_option("--out", out_path, "output file");

  auto* cmd_run = app.add_subcommand("run", "full pipeline over a corpus");
  add_common(cmd_run, opts);
  cmd_run->add_option("--corpus", corpus_path, "corpus file")->required();
  cmd_run->add_option("--out", out_path, "run file (JSON lines)")->required();

  auto* cmd_report = app.add_subcommand("report", "aggregate run files into tables");
  add_common(cmd_report, opts);
  cmd_report->add_option("--in", run_files, "run file(s)")->required()->expected(-1);
  cmd_report->add_option("--corpus", corpus_path, "corpus for complexity bucketing");
  cmd_report->add_option("--out", report_out, "machine-readable rows file");

  auto* cmd_ablate = app.add_subcommand("ablate", "run and compare ablation configurations");
  add_common(cmd_ablate, opts);
  cmd_ablate->add_option("--corpus", corpus_path, "corpus file")->required();
  cmd_ablate->add_flag("--strategies", strategies, "include prompting-strategy rows");
  cmd_ablate->add_option("--out", report_out, "machine-readable rows file");

  CLI11_PARSE(app, argc, argv);

  ContextHandle handle = make_context(opts);
  decot_context* ctx = handle.ctx;

  if (cmd_decompose->parsed()) {
    LineWriter writer(out_path);
    for (const json& instruction : ingest_instructions(ctx, corpus_path)) {
      StringHandle result;
      check(decot_decompose(ctx, instruction.dump().c_str(), &result.value), "decompose");
      writer.write(result.str());
    }
    return 0;
  }

  if (cmd_enhance->parsed() || cmd_plan->parsed() || cmd_generate->parsed()) {
    LineWriter writer(out_path);
    for (const std::string& line : read_lines(in_path)) {
      StringHandle result;
      if (cmd_enhance->parsed()) {
        check(decot_enhance(ctx, line.c_str(), &result.value), "enhance");
      } else if (cmd_plan->parsed()) {
        check(decot_plan(ctx, line.c_str(), &result.value), "plan");
      } else {
        check(decot_generate(ctx, line.c_str(), &result.value), "generate");
      }
      writer.write(result.str());
    }
    return 0;
  }

  if (cmd_judge->parsed()) {
    std::vector<std::string> traces = read_lines(in_path);
    std::vector<std::string> decompositions = read_lines(decompositions_path);
    if (traces.size() != decompositions.size()) {
      fail("trace and decomposition files must pair line by line", 2);
    }
    std::vector<json> instructions = ingest_instructions(ctx, corpus_path);
    LineWriter writer(out_path);
    for (std::size_t i = 0; i < traces.size(); ++i) {
      std::string wanted = json::parse(decompositions[i]).value("instruction_id", "");
      const json* instruction = nullptr;
      for (const json& candidate : instructions) {
        if (candidate.value("id", "") == wanted) {
          instruction = &candidate;
          break;
        }
      }
      if (!instruction) fail("no corpus instruction with id '" + wanted + "'", 2);
      StringHandle result;
      check(decot_judge(ctx, traces[i].c_str(), decompositions[i].c_str(),
                        instruction->dump().c_str(), &result.value),
            "judge");
      writer.write(result.str());
    }
    return 0;
  }

  if (cmd_run->parsed()) {
    check(decot_context_set_option(ctx, "progress", "true"), "progress");
    StringHandle summary;
    check(decot_run(ctx, corpus_path.c_str(), out_path.c_str(), &summary.value), "run");
    std::cout << summary.str() << "\n";
    json parsed = json::parse(summary.str());
    return parsed.value("failures", 0) > 0 ? 1 : 0;
  }

  if (cmd_report->parsed()) {
    std::vector<const char*> paths;
    for (const std::string& path : run_files) paths.push_back(path.c_str());
    StringHandle table;
    check(decot_report(ctx, paths.data(), paths.size(),
                       corpus_path.empty() ? nullptr : corpus_path.c_str(),
                       report_out.empty() ? nullptr : report_out.c_str(), &table.value),
          "report");
    std::cout << table.str();
    return 0;
  }

  if (cmd_ablate->parsed()) {
    StringHandle table;
    check(decot_ablate(ctx, corpus_path.c_str(), strategies ? 1 : 0,
                       report_out.empty() ? nullptr : report_out.c_str(), &table.value),
          "ablate");
    std::cout << table.str();
    return 0;
  }
  return 0;
}
