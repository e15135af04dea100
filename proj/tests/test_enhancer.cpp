#include "decot/enhancer.hpp"

#include <random>

#include "decot/decomposer.hpp"
#include "decot/errors.hpp"
#include "support/generators.hpp"

#include "doctest.h"

using namespace decot;

namespace {

ir::DecompositionResult cabin_result() {
  ir::Instruction instruction;
  instruction.id = "cabin";
  instruction.text = "a wooden cabin in a snowy forest, soft lighting, no people";
  return decomposer::rule_decompose(instruction, lex::Lexicon::builtin());
}

}  // namespace

TEST_CASE("mode Off is the exact identity") {
  auto result = cabin_result();
  enhancer::EnhancementPolicy policy;  // Off
  auto outcome = enhancer::enhance(result, policy, lex::ExpansionLexicon::builtin());
  CHECK(outcome.result == result);
  CHECK(outcome.enhanced_count == 0);
  for (const auto& unit : outcome.result.units) {
    CHECK(unit.provenance == ir::Provenance::Raw);
  }
}

TEST_CASE("lexicon mode adds the matched rows' attributes") {
  auto result = cabin_result();
  enhancer::EnhancementPolicy policy;
  policy.mode = enhancer::EnhancementMode::Lexicon;
  auto expansion = lex::ExpansionLexicon::builtin();
  auto outcome = enhancer::enhance(result, policy, expansion);

  const ir::SemanticUnit* lighting = nullptr;
  for (const auto& unit : outcome.result.units) {
    if (unit.text == "soft lighting") lighting = &unit;
  }
  REQUIRE(lighting != nullptr);
  CHECK(lighting->provenance == ir::Provenance::Enhanced);
  CHECK(lighting->text == "soft lighting");  // lexicon mode keeps the text

  // oracle: the attributes must be exactly the matching rows' pairs
  std::map<std::string, std::string> expected;
  for (const auto* rule : expansion.match("soft lighting")) {
    for (const auto& [k, v] : rule->attributes) expected[k] = v;
  }
  REQUIRE(!expected.empty());
  CHECK(lighting->attributes == expected);
}

TEST_CASE("lexicon mode is deterministic and leaves non-matching units raw") {
  auto result = cabin_result();
  enhancer::EnhancementPolicy policy;
  policy.mode = enhancer::EnhancementMode::Lexicon;
  auto a = enhancer::enhance(result, policy, lex::ExpansionLexicon::builtin());
  auto b = enhancer::enhance(result, policy, lex::ExpansionLexicon::builtin());
  CHECK(a.result == b.result);

  for (const auto& unit : a.result.units) {
    if (unit.text == "a wooden cabin in a snowy forest") {
      CHECK(unit.provenance == ir::Provenance::Raw);
      CHECK(unit.attributes.empty());
    }
  }
}

TEST_CASE("structure is preserved under every mode") {
  std::mt19937 rng(99);
  testsupport::UnitSetOptions options;
  options.max_units = 20;
  auto mock = std::make_shared<backends::MockLlmBackend>();

  for (auto mode : {enhancer::EnhancementMode::Off, enhancer::EnhancementMode::Lexicon,
                    enhancer::EnhancementMode::Llm}) {
    for (int i = 0; i < 25; ++i) {
      auto generated = testsupport::random_case(rng, options);
      enhancer::EnhancementPolicy policy;
      policy.mode = mode;
      auto outcome = enhancer::enhance(generated.result, policy,
                                       lex::ExpansionLexicon::builtin(), mock.get());
      REQUIRE(outcome.result.units.size() == generated.result.units.size());
      for (std::size_t u = 0; u < outcome.result.units.size(); ++u) {
        const auto& before = generated.result.units[u];
        const auto& after = outcome.result.units[u];
        CHECK(after.unit_id == before.unit_id);
        CHECK(after.category == before.category);
        CHECK(after.polarity == before.polarity);
        CHECK(after.weight == before.weight);
        CHECK(after.source_span == before.source_span);
        if (before.polarity == ir::Polarity::Negative) {
          // constraints pass through verbatim
          CHECK(after.text == before.text);
          CHECK(after.provenance == before.provenance);
        }
      }
    }
  }
}

TEST_CASE("llm mode rewrites eligible units through the backend") {
  auto result = cabin_result();
  auto mock = std::make_shared<backends::MockLlmBackend>();
  mock->add_scripted("a large building",
                     "a towering skyscraper with glass facades and a modern design");

  ir::Instruction instruction;
  instruction.id = "building";
  instruction.text = "a large building at night";
  ir::DecompositionResult building;
  building.instruction_id = instruction.id;
  ir::SemanticUnit unit;
  unit.unit_id = "u1";
  unit.category = ir::UnitCategory::CoreObject;
  unit.text = "a large building";
  unit.source_span = ir::SourceSpan{0, 16};
  building.units.push_back(unit);
  building.coverage_fraction = ir::recompute_coverage(building.units, instruction.text.size());

  enhancer::EnhancementPolicy policy;
  policy.mode = enhancer::EnhancementMode::Llm;
  auto outcome = enhancer::enhance(building, policy, lex::ExpansionLexicon::builtin(), mock.get());
  REQUIRE(outcome.result.units.size() == 1);
  CHECK(outcome.result.units[0].text ==
        "a towering skyscraper with glass facades and a modern design");
  CHECK(outcome.result.units[0].provenance == ir::Provenance::Enhanced);
  CHECK(outcome.result.units[0].source_span == ir::SourceSpan{0, 16});
  CHECK(outcome.enhanced_count == 1);

  SUBCASE("a rewrite over the expansion cap is dropped and counted") {
    policy.max_expansion_ratio = 1.5;
    auto capped = enhancer::enhance(building, policy, lex::ExpansionLexicon::builtin(),
                                    mock.get());
    CHECK(capped.result.units[0].text == "a large building");
    CHECK(capped.result.units[0].provenance == ir::Provenance::Raw);
    CHECK(capped.overflow_count == 1);
    CHECK(capped.enhanced_count == 0);
  }
}

TEST_CASE("llm mode preconditions") {
  auto result = cabin_result();
  enhancer::EnhancementPolicy policy;
  policy.mode = enhancer::EnhancementMode::Llm;
  CHECK_THROWS_AS(enhancer::enhance(result, policy, lex::ExpansionLexicon::builtin(), nullptr),
                  InvalidArgument);
  policy.mode = enhancer::EnhancementMode::Off;
  policy.max_expansion_ratio = 1.0;
  CHECK_THROWS_AS(enhancer::enhance(result, policy, lex::ExpansionLexicon::builtin(), nullptr),
                  ConfigError);
}
