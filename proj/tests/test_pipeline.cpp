#include "decot/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "decot/config.hpp"
#include "decot/errors.hpp"
#include "support/contract_suite.hpp"
#include "support/generators.hpp"

#include "doctest.h"

using namespace decot;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "decot_pipeline_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}

pipeline::BackendSet mock_backends(int max_words = 256, bool staged = true) {
  pipeline::BackendSet set;
  set.llm = std::make_shared<backends::MockLlmBackend>();
  set.t2i = std::make_shared<backends::MockT2iBackend>(
      planner::BackendCapabilities{staged, max_words, true});
  set.judge = std::make_shared<backends::MockJudgeBackend>();
  set.now_ms = pipeline::fixed_clock_ms();
  return set;
}

pipeline::RunConfig mock_config(const std::string& label = "test") {
  pipeline::RunConfig config;
  config.label = label;
  config.enhancement.mode = enhancer::EnhancementMode::Lexicon;
  return config;
}

std::string run_to_string(const pipeline::Runner& runner,
                          const std::vector<ir::Instruction>& corpus) {
  std::ostringstream out;
  runner.run(corpus, &out, nullptr);
  return out.str();
}

}  // namespace

TEST_CASE("corpus ingestion") {
  fs::path dir = scratch_dir();

  SUBCASE("three-line fixture") {
    auto path = write_file(dir / "ok.jsonl",
                           "{\"id\": \"a\", \"prompt\": \"a red apple\"}\n"
                           "\n"
                           "{\"id\": \"b\", \"prompt\": \"a blue bird\", \"complexity\": "
                           "\"complex\", \"source\": \"bench\"}\n"
                           "{\"id\": \"c\", \"prompt\": \"a tin drum\"}\n");
    auto corpus = pipeline::ingest_corpus(path);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus[0].id == "a");
    CHECK(corpus[1].complexity == ir::Complexity::Complex);
    CHECK(corpus[1].source == "bench");
  }
  SUBCASE("duplicate ids are rejected by name") {
    auto path = write_file(dir / "dup.jsonl",
                           "{\"id\": \"a\", \"prompt\": \"x y\"}\n"
                           "{\"id\": \"a\", \"prompt\": \"z w\"}\n");
    CHECK_THROWS_WITH_AS(pipeline::ingest_corpus(path),
                         doctest::Contains("duplicate instruction id 'a'"), DuplicateId);
  }
  SUBCASE("format errors carry the line number") {
    auto path = write_file(dir / "bad.jsonl",
                           "{\"id\": \"a\", \"prompt\": \"x y\"}\n"
                           "{\"id\": \"b\"}\n");
    CHECK_THROWS_WITH_AS(pipeline::ingest_corpus(path), doctest::Contains("line 2"),
                         FormatError);
  }
  SUBCASE("empty file yields an empty corpus") {
    auto path = write_file(dir / "empty.jsonl", "");
    CHECK(pipeline::ingest_corpus(path).empty());
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(pipeline::ingest_corpus(dir / "absent.jsonl"), IoError);
  }
}

TEST_CASE("execute_plan shapes the trace after the plan") {
  auto backends = mock_backends();

  ir::FusedPlan fused;
  fused.prompt_text = "a red apple";
  auto trace = pipeline::execute_plan(ir::PromptPlan{fused}, *backends.t2i, backends.now_ms);
  CHECK(trace.outputs.size() == 1);
  CHECK(trace.final == trace.outputs.back());
  CHECK(trace.timings_ms.size() == 1);

  ir::StagedPlan staged;
  staged.stages.push_back({1, ir::StageRole::Base, "a red apple", "", {"u1"}});
  staged.stages.push_back({2, ir::StageRole::Refine, "soft lighting", "", {"u2"}});
  trace = pipeline::execute_plan(ir::PromptPlan{staged}, *backends.t2i, backends.now_ms);
  CHECK(trace.outputs.size() == 2);
  CHECK(trace.final == trace.outputs.back());
  auto clauses = ir::decode_clauses(trace.final.value);
  REQUIRE(clauses.size() == 2);  // refinement unioned both stage prompts
}

TEST_CASE("process produces a judged record for a pipeline run") {
  pipeline::Runner runner({}, mock_backends(), mock_config());
  ir::Instruction instruction;
  instruction.id = "p1";
  instruction.text = "a wooden cabin in a snowy forest, soft lighting, no people";
  auto record = runner.process(instruction);
  CHECK(record.instruction_id == "p1");
  CHECK(record.label == "test");
  REQUIRE(record.decomposition.has_value());
  REQUIRE(record.plan.has_value());
  REQUIRE(record.trace.has_value());
  REQUIRE(record.evaluation.has_value());
  CHECK(!record.error.has_value());
  // enhancement populated the light dimension and staging covered both units
  CHECK(record.evaluation->score(ir::Dimension::Backg) == doctest::Approx(5.0));
  CHECK(record.evaluation->score(ir::Dimension::Light) == doctest::Approx(5.0));
}

TEST_CASE("baseline runs truncate the raw instruction to the word budget") {
  auto corpus = testsupport::synthetic_complex_corpus(1, 3);
  auto config = mock_config("baseline");
  config.baseline = true;
  pipeline::Runner runner({}, mock_backends(24), config);
  auto record = runner.process(corpus[0]);
  REQUIRE(record.plan.has_value());
  REQUIRE(record.plan->is_fused());
  std::istringstream words(record.plan->fused().prompt_text);
  int count = 0;
  std::string word;
  while (words >> word) ++count;
  CHECK(count == 24);
  REQUIRE(record.decomposition.has_value());  // rule decomposition kept for judging
  CHECK(record.decomposition->units.size() >= 8);
}

TEST_CASE("failures become error records without aborting the run") {
  std::vector<ir::Instruction> corpus(2);
  corpus[0].id = "ok";
  corpus[0].text = "a red apple";
  corpus[1].id = "bad";
  corpus[1].text = "no dogs in the background";  // all-negative: planning fails
  pipeline::Runner runner({}, mock_backends(), mock_config());
  auto records = runner.run(corpus);
  REQUIRE(records.size() == 2);
  CHECK(records[0].evaluation.has_value());
  REQUIRE(records[1].error.has_value());
  CHECK(!records[1].evaluation.has_value());
  CHECK(records[1].error->find("no positive units") != std::string::npos);
}

TEST_CASE("run files are byte-identical across repeats and parallelism levels") {
  auto corpus = testsupport::synthetic_complex_corpus(8, 21);
  auto config = mock_config();
  config.seed = 42;
  pipeline::Runner sequential({}, mock_backends(), config);
  std::string first = run_to_string(sequential, corpus);
  std::string second = run_to_string(sequential, corpus);
  CHECK(first == second);

  config.parallelism = 4;
  pipeline::Runner parallel({}, mock_backends(), config);
  CHECK(run_to_string(parallel, corpus) == first);

  // records decode back and keep the evaluation/error exclusivity
  std::istringstream lines(first);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    auto record = pipeline::decode_run_record(line);
    CHECK(record.evaluation.has_value() != record.error.has_value());
    ++n;
  }
  CHECK(n == corpus.size());
}

TEST_CASE("the fixture corpus runs to 20 success records") {
  auto corpus = pipeline::ingest_corpus(fs::path(DECOT_DATA_DIR) / "corpus_20.jsonl");
  REQUIRE(corpus.size() == 20);
  pipeline::Runner runner({}, mock_backends(), mock_config("fixtures"));
  std::string first = run_to_string(runner, corpus);
  CHECK(first == run_to_string(runner, corpus));

  std::istringstream lines(first);
  std::string line;
  std::size_t successes = 0;
  while (std::getline(lines, line)) {
    auto record = pipeline::decode_run_record(line);
    if (record.evaluation) ++successes;
  }
  CHECK(successes == 20);
}

TEST_CASE("warm cache reruns make zero backend calls") {
  fs::path dir = scratch_dir();
  auto corpus = testsupport::synthetic_complex_corpus(4, 9);
  auto backends = mock_backends();
  auto counting = std::make_shared<testsupport::CountingLlm>(backends.llm);
  backends.llm = counting;
  auto config = mock_config();
  config.cache_dir = dir / "cache";

  pipeline::Runner runner({}, backends, config);
  runner.run(corpus);
  int cold_calls = counting->calls();
  CHECK(cold_calls > 0);
  runner.run(corpus);
  CHECK(counting->calls() == cold_calls);  // zero network attempts on the rerun
}

TEST_CASE("decompose piped into plan equals the plan inside run") {
  auto corpus = testsupport::synthetic_complex_corpus(3, 33);
  auto config = mock_config();
  pipeline::Runner runner({}, mock_backends(), config);
  auto records = runner.run(corpus);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto decomposed = runner.enhance(runner.decompose(corpus[i]));
    auto plan = runner.plan(decomposed);
    REQUIRE(records[i].plan.has_value());
    CHECK(plan == *records[i].plan);
  }
}

TEST_CASE("http profiles without credentials fail before any work") {
  auto config = config::AppConfig::defaults();
  config.profile = "infinity-8b";
  config.llm_endpoint = "http://127.0.0.1:1";
  config.t2i_endpoint = "http://127.0.0.1:1";
  config.judge_endpoint = "http://127.0.0.1:1";
#ifdef _WIN32
#else
  unsetenv("DECOT_LLM_API_KEY");
#endif
  CHECK_THROWS_AS(config::make_backends(config), ConfigError);
}

TEST_CASE("run config resolves backend kinds from the profile") {
  auto config = config::AppConfig::defaults();
  config.profile = "rule";
  auto run = config::effective_run_config(config);
  CHECK(run.llm_backend_id == "rule");

  config.profile = "flux1-dev";
  config.force_mock = true;
  run = config::effective_run_config(config);
  CHECK(run.llm_backend_id == "mock");
  CHECK(run.t2i_backend_id == "mock");
}

TEST_CASE("config files resolve paths, policy, weights, and capability presets") {
  fs::path dir = scratch_dir();
  auto path = write_file(dir / "decot.conf",
                         "# run configuration\n"
                         "[paths]\n"
                         "lexicon = " + std::string(DECOT_DATA_DIR) + "/lexicon.tsv\n"
                         "[policy]\n"
                         "strategy = few-shot\n"
                         "enhancement = off\n"
                         "adaptive = false\n"
                         "parallelism = 3\n"
                         "label = custom\n"
                         "profile = tiny\n"
                         "[weights]\n"
                         "core_object = 1.5\n"
                         "[capabilities:tiny]\n"
                         "supports_staged_refinement = true\n"
                         "max_prompt_words = 32\n"
                         "supports_weight_syntax = false\n");
  auto config = config::AppConfig::load(path);
  CHECK(config.run.strategy == ir::PromptingStrategy::FewShot);
  CHECK(config.run.enhancement.mode == enhancer::EnhancementMode::Off);
  CHECK_FALSE(config.run.adaptive);
  CHECK(config.run.parallelism == 3);
  CHECK(config.run.label == "custom");
  CHECK(config.profile == "tiny");
  CHECK(config.weights.multiplier(ir::UnitCategory::CoreObject) == doctest::Approx(1.5));
  const auto& profile = config.resolved_profile();
  CHECK(profile.caps.supports_staged_refinement);
  CHECK(profile.caps.max_prompt_words == 32);
  CHECK_FALSE(profile.caps.supports_weight_syntax);
  auto env = config::make_env(config);
  CHECK(env.lexicon.entries == lex::Lexicon::builtin().entries);

  CHECK_THROWS_AS(config::AppConfig::load(dir / "missing.conf"), ConfigError);
  auto bad = write_file(dir / "bad.conf", "[policy]\nstrategy twelve\n");
  CHECK_THROWS_AS(config::AppConfig::load(bad), ConfigError);
}

TEST_CASE("rule profile decomposes without an llm") {
  auto config = mock_config();
  config.llm_backend_id = "rule";
  pipeline::Runner runner({}, mock_backends(), config);
  ir::Instruction instruction;
  instruction.id = "r1";
  instruction.text = "a red apple, soft lighting";
  auto result = runner.decompose(instruction);
  CHECK(result.units.size() == 2);
  CHECK(!result.llm_meta.has_value());
}
