#pragma once

// Keyword tables backing the rule-based decomposer, the lexicon enhancement
// pass, and shared text normalization. Tables ship as compiled-in defaults and
// can be replaced from plain-text files (see data/lexicon.tsv and
// data/expansion_lexicon.tsv for the on-disk mirrors of the defaults).

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace decot::lex {

/// Term classes for clause classification, in descending match priority:
/// negation markers beat spatial terms beat scene terms beat environment
/// terms; clauses hitting nothing default to core objects downstream.
enum class TermClass { Negation, Spatial, Scene, Environment };

std::string_view to_string(TermClass v);
std::optional<TermClass> term_class_from_string(std::string_view s);

struct Lexicon {
  std::vector<std::pair<std::string, TermClass>> entries;  // file order, lowercase terms

  /// Loads `term<TAB>class` lines; '#' starts a comment, blank lines skipped.
  static Lexicon load(const std::string& path);
  static Lexicon builtin();

  /// Highest-priority class with at least one term hit in the clause text.
  std::optional<TermClass> classify(const std::string& clause_text) const;
  bool contains(const std::string& clause_text, TermClass cls) const;
};

struct ExpansionRule {
  std::string phrase;  // lowercase
  std::vector<std::pair<std::string, std::string>> attributes;
};

struct ExpansionLexicon {
  std::vector<ExpansionRule> rules;  // file order

  /// Loads `phrase<TAB>key=value[,key=value...]` lines.
  static ExpansionLexicon load(const std::string& path);
  static ExpansionLexicon builtin();

  /// All rules whose phrase occurs (word-bounded, case-insensitive) in the text.
  std::vector<const ExpansionRule*> match(const std::string& unit_text) const;
};

/// True when `phrase_lower` occurs in `text` on word boundaries,
/// case-insensitively. Multi-word phrases match across single spaces.
bool phrase_in_text(const std::string& phrase_lower, const std::string& text);

/// Lowercases, collapses whitespace runs, trims, and strips leading/trailing
/// non-alphanumeric characters. Interior punctuation is preserved.
std::string normalize_text(const std::string& text);

std::string to_lower(const std::string& text);
std::string trim(const std::string& text);

}  // namespace decot::lex
