#include "support/generators.hpp"

#include <algorithm>
#include <iterator>

namespace decot::testsupport {

namespace {

using ir::Polarity;
using ir::SemanticUnit;
using ir::UnitCategory;

const char* kPositiveWords[] = {
    "amber",   "lantern", "marble", "violin", "orchard", "copper", "sparrow",
    "willow",  "ember",   "quartz", "saffron", "cobalt",  "juniper", "raven",
    "pearl",   "cedar",   "onyx",   "maple",  "ivory",   "fjord",
};
const char* kNegativeWords[] = {
    "smudge", "clutter", "watermark", "glitch", "banner", "scribble", "litter",
};

std::string random_words(std::mt19937& rng, const char* const* pool, std::size_t pool_size,
                         int count) {
  std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i > 0) out += ' ';
    out += pool[pick(rng)];
  }
  return out;
}

}  // namespace

GeneratedCase random_case(std::mt19937& rng, const UnitSetOptions& options) {
  std::uniform_int_distribution<int> unit_count(options.min_units, options.max_units);
  std::uniform_int_distribution<int> category_pick(0, 4);
  std::uniform_int_distribution<int> word_len(1, 6);
  std::uniform_int_distribution<int> weight_step(0, 35);  // 0.25 + k * 0.05
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> hint_pick(1, 4);

  const int n = unit_count(rng);
  GeneratedCase out;
  out.instruction.id = "gen";
  out.result.instruction_id = out.instruction.id;

  std::string text;
  for (int i = 0; i < n; ++i) {
    SemanticUnit unit;
    unit.unit_id = "u" + std::to_string(i + 1);
    unit.category = ir::kAllCategories[static_cast<std::size_t>(category_pick(rng))];
    unit.weight = 0.25 + 0.05 * weight_step(rng);
    if (unit.category == UnitCategory::Constraint &&
        coin(rng) < options.negative_constraint_rate) {
      unit.polarity = Polarity::Negative;
      double style = coin(rng);
      std::string body = random_words(rng, kNegativeWords, std::size(kNegativeWords),
                                      word_len(rng));
      unit.text = style < 0.4 ? "no " + body : style < 0.6 ? "without " + body : body;
    } else {
      unit.text = random_words(rng, kPositiveWords, std::size(kPositiveWords), word_len(rng));
    }
    if (options.allow_stage_hints && coin(rng) < 0.1) unit.stage_hint = hint_pick(rng);
    if (options.allow_attributes && coin(rng) < 0.3) {
      unit.attributes["note"] = random_words(rng, kPositiveWords, std::size(kPositiveWords), 1);
    }
    if (i > 0) text += ", ";
    unit.source_span = ir::SourceSpan{text.size(), text.size() + unit.text.size()};
    text += unit.text;
    out.result.units.push_back(std::move(unit));
  }
  out.instruction.text = text;
  out.result.coverage_fraction = ir::recompute_coverage(out.result.units, text.size());
  return out;
}

ir::DecompositionResult shuffled(const ir::DecompositionResult& result, std::mt19937& rng) {
  ir::DecompositionResult copy = result;
  std::shuffle(copy.units.begin(), copy.units.end(), rng);
  return copy;
}

ir::EvaluationRecord random_evaluation(std::mt19937& rng, const std::string& id) {
  std::uniform_int_distribution<int> step(0, 400);  // 1.00 + k * 0.01
  std::array<double, 9> scores{};
  for (double& score : scores) score = 1.0 + 0.01 * step(rng);
  return ir::make_evaluation_record(id, scores);
}

ir::ImageRef random_image_ref(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<int> clause_count(1, 4);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  ir::ImageRef ref;
  switch (kind_pick(rng)) {
    case 0:
      ref.kind = ir::ImageKind::File;
      ref.value = "/tmp/" + random_words(rng, kPositiveWords, std::size(kPositiveWords), 1) +
                  ".png";
      break;
    case 1:
      ref.kind = ir::ImageKind::Url;
      ref.value = "http://images.local/" +
                  random_words(rng, kPositiveWords, std::size(kPositiveWords), 1);
      break;
    default: {
      ref.kind = ir::ImageKind::MockDescriptor;
      std::vector<ir::Clause> clauses;
      int n = clause_count(rng);
      for (int i = 0; i < n; ++i) {
        ir::Clause clause;
        clause.subject =
            random_words(rng, kPositiveWords, std::size(kPositiveWords), 2) + " " +
            std::to_string(i);
        if (coin(rng) < 0.5) {
          clause.attributes["tone"] =
              random_words(rng, kPositiveWords, std::size(kPositiveWords), 1);
        }
        clauses.push_back(std::move(clause));
      }
      ref.value = ir::encode_clauses(clauses);
      break;
    }
  }
  return ref;
}

std::vector<ir::Instruction> synthetic_complex_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));

  const char* objects[] = {"a brass telescope", "a ceramic teapot", "a carved chess set",
                           "a plain canvas satchel", "a clockwork automaton",
                           "an antique typewriter", "a stack of atlases", "a bronze compass"};
  const char* poses[] = {"a dancer standing on a pedestal", "a fox sitting on a crate",
                         "a heron perched on a post"};
  const char* spatial[] = {"the satchel to the left of the teapot",
                           "the compass between the atlases",
                           "the automaton behind the chess set"};
  const char* scenes[] = {"in a quiet harbor", "in a tidy library",
                          "in a cobblestone village"};
  const char* color_env[] = {"vibrant colors", "pastel accents", "warm tones"};
  const char* texture_env[] = {"fluffy texture", "rough texture", "glossy finish"};
  const char* light_env[] = {"soft lighting", "golden hour light", "candlelight ambience"};
  const char* fx_env[] = {"watercolor wash", "bokeh highlights", "mist drifting"};
  const char* negatives[] = {"no spectators", "no watermarks", "no banners"};

  auto pick = [&rng](const char* const* pool, std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return std::string(pool[d(rng)]);
  };

  std::vector<ir::Instruction> corpus;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string> clauses;
    clauses.push_back(pick(objects, std::size(objects)));
    clauses.push_back(pick(poses, std::size(poses)));
    clauses.push_back(pick(objects, std::size(objects)) + " nearby on a low shelf");
    clauses.push_back(pick(spatial, std::size(spatial)));
    clauses.push_back(pick(scenes, std::size(scenes)));
    clauses.push_back(pick(color_env, std::size(color_env)));
    clauses.push_back(pick(texture_env, std::size(texture_env)));
    clauses.push_back(pick(light_env, std::size(light_env)));
    clauses.push_back(pick(fx_env, std::size(fx_env)));
    clauses.push_back(pick(negatives, std::size(negatives)));

    ir::Instruction instruction;
    instruction.id = "syn" + std::to_string(i + 1);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (c > 0) instruction.text += ", ";
      instruction.text += clauses[c];
    }
    corpus.push_back(std::move(instruction));
  }
  return corpus;
}

}  // namespace decot::testsupport
