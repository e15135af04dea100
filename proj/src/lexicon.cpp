#include "decot/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "decot/errors.hpp"

namespace decot::lex {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string_view to_string(TermClass v) {
  switch (v) {
    case TermClass::Negation: return "negation";
    case TermClass::Spatial: return "spatial";
    case TermClass::Scene: return "scene";
    case TermClass::Environment: return "environment";
  }
  return "?";
}

std::optional<TermClass> term_class_from_string(std::string_view s) {
  std::string key = to_lower(std::string(s));
  if (key == "negation") return TermClass::Negation;
  if (key == "spatial") return TermClass::Spatial;
  if (key == "scene") return TermClass::Scene;
  if (key == "environment") return TermClass::Environment;
  return std::nullopt;
}

std::string to_lower(const std::string& text) {
  std::string out = text;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

std::string normalize_text(const std::string& text) {
  std::string lowered = to_lower(text);
  std::string collapsed;
  collapsed.reserve(lowered.size());
  bool in_space = true;
  for (char c : lowered) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) collapsed.push_back(' ');
      in_space = true;
    } else {
      collapsed.push_back(c);
      in_space = false;
    }
  }
  std::size_t b = 0, e = collapsed.size();
  while (b < e && !is_word_char(collapsed[b])) ++b;
  while (e > b && !is_word_char(collapsed[e - 1])) --e;
  return collapsed.substr(b, e - b);
}

bool phrase_in_text(const std::string& phrase_lower, const std::string& text) {
  if (phrase_lower.empty()) return false;
  std::string haystack = to_lower(text);
  std::size_t pos = 0;
  while ((pos = haystack.find(phrase_lower, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    std::size_t end = pos + phrase_lower.size();
    bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Rule lexicon
// ---------------------------------------------------------------------------

Lexicon Lexicon::load(const std::string& path) {
  Lexicon lexicon;
  int line_no = 0;
  for (const std::string& raw : read_lines(path)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": expected term<TAB>class");
    }
    std::string term = to_lower(trim(line.substr(0, tab)));
    auto cls = term_class_from_string(trim(line.substr(tab + 1)));
    if (term.empty() || !cls) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": bad term or class");
    }
    lexicon.entries.emplace_back(std::move(term), *cls);
  }
  return lexicon;
}

Lexicon Lexicon::builtin() {
  static const std::pair<const char*, TermClass> kEntries[] = {
      // negation markers
      {"no", TermClass::Negation},
      {"without", TermClass::Negation},
      {"never", TermClass::Negation},
      {"avoid", TermClass::Negation},
      {"exclude", TermClass::Negation},
      {"nothing", TermClass::Negation},
      // spatial / composition terms
      {"left", TermClass::Spatial},
      {"right", TermClass::Spatial},
      {"above", TermClass::Spatial},
      {"below", TermClass::Spatial},
      {"beside", TermClass::Spatial},
      {"behind", TermClass::Spatial},
      {"between", TermClass::Spatial},
      {"under", TermClass::Spatial},
      {"atop", TermClass::Spatial},
      {"near", TermClass::Spatial},
      {"next to", TermClass::Spatial},
      {"in front of", TermClass::Spatial},
      {"opposite", TermClass::Spatial},
      {"center", TermClass::Spatial},
      {"centered", TermClass::Spatial},
      {"foreground", TermClass::Spatial},
      {"across", TermClass::Spatial},
      {"along", TermClass::Spatial},
      {"overhead", TermClass::Spatial},
      {"surrounding", TermClass::Spatial},
      // scene / background terms
      {"garden", TermClass::Scene},
      {"background", TermClass::Scene},
      {"forest", TermClass::Scene},
      {"city", TermClass::Scene},
      {"beach", TermClass::Scene},
      {"room", TermClass::Scene},
      {"kitchen", TermClass::Scene},
      {"street", TermClass::Scene},
      {"mountains", TermClass::Scene},
      {"sky", TermClass::Scene},
      {"landscape", TermClass::Scene},
      {"indoors", TermClass::Scene},
      {"outdoors", TermClass::Scene},
      {"outside", TermClass::Scene},
      {"setting", TermClass::Scene},
      {"library", TermClass::Scene},
      {"market", TermClass::Scene},
      {"harbor", TermClass::Scene},
      {"desert", TermClass::Scene},
      {"meadow", TermClass::Scene},
      {"village", TermClass::Scene},
      {"rooftop", TermClass::Scene},
      {"cafe", TermClass::Scene},
      // environment: lighting, texture, style, atmosphere
      {"lighting", TermClass::Environment},
      {"light", TermClass::Environment},
      {"lit", TermClass::Environment},
      {"glow", TermClass::Environment},
      {"glowing", TermClass::Environment},
      {"texture", TermClass::Environment},
      {"textured", TermClass::Environment},
      {"style", TermClass::Environment},
      {"watercolor", TermClass::Environment},
      {"neon", TermClass::Environment},
      {"fog", TermClass::Environment},
      {"mist", TermClass::Environment},
      {"bokeh", TermClass::Environment},
      {"golden hour", TermClass::Environment},
      {"sunset", TermClass::Environment},
      {"sunlight", TermClass::Environment},
      {"sunny", TermClass::Environment},
      {"moonlight", TermClass::Environment},
      {"candlelight", TermClass::Environment},
      {"dusk", TermClass::Environment},
      {"dawn", TermClass::Environment},
      {"shadows", TermClass::Environment},
      {"shadow", TermClass::Environment},
      {"palette", TermClass::Environment},
      {"vibrant", TermClass::Environment},
      {"monochrome", TermClass::Environment},
      {"pastel", TermClass::Environment},
      {"cinematic", TermClass::Environment},
      {"grainy", TermClass::Environment},
      {"sparkling", TermClass::Environment},
      {"shimmering", TermClass::Environment},
      {"misty", TermClass::Environment},
      {"smoky", TermClass::Environment},
      {"metallic", TermClass::Environment},
      {"glossy", TermClass::Environment},
      {"matte", TermClass::Environment},
      {"iridescent", TermClass::Environment},
      {"tones", TermClass::Environment},
      {"hue", TermClass::Environment},
      {"hues", TermClass::Environment},
      {"colors", TermClass::Environment},
      {"colored", TermClass::Environment},
      {"depth of field", TermClass::Environment},
  };
  Lexicon lexicon;
  for (const auto& [term, cls] : kEntries) lexicon.entries.emplace_back(term, cls);
  return lexicon;
}

bool Lexicon::contains(const std::string& clause_text, TermClass cls) const {
  for (const auto& [term, term_cls] : entries) {
    if (term_cls == cls && phrase_in_text(term, clause_text)) return true;
  }
  return false;
}

std::optional<TermClass> Lexicon::classify(const std::string& clause_text) const {
  static constexpr TermClass kPriority[] = {TermClass::Negation, TermClass::Spatial,
                                            TermClass::Scene, TermClass::Environment};
  for (TermClass cls : kPriority) {
    if (contains(clause_text, cls)) return cls;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expansion lexicon
// ---------------------------------------------------------------------------

ExpansionLexicon ExpansionLexicon::load(const std::string& path) {
  ExpansionLexicon lexicon;
  int line_no = 0;
  for (const std::string& raw : read_lines(path)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("expansion lexicon line " + std::to_string(line_no) +
                        ": expected phrase<TAB>key=value[,...]");
    }
    ExpansionRule rule;
    rule.phrase = to_lower(trim(line.substr(0, tab)));
    std::stringstream attrs(line.substr(tab + 1));
    std::string pair;
    while (std::getline(attrs, pair, ',')) {
      pair = trim(pair);
      if (pair.empty()) continue;
      std::size_t eq = pair.find('=');
      if (eq == std::string::npos) {
        throw FormatError("expansion lexicon line " + std::to_string(line_no) +
                          ": attribute without '='");
      }
      rule.attributes.emplace_back(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
    }
    if (rule.phrase.empty() || rule.attributes.empty()) {
      throw FormatError("expansion lexicon line " + std::to_string(line_no) + ": empty rule");
    }
    lexicon.rules.push_back(std::move(rule));
  }
  return lexicon;
}

ExpansionLexicon ExpansionLexicon::builtin() {
  struct Row {
    const char* phrase;
    const char* attrs;  // key=value pairs joined by ','
  };
  static const Row kRows[] = {
      {"soft lighting", "light=diffuse,warmth=soft"},
      {"dramatic lighting", "light=dramatic"},
      {"cinematic lighting", "light=cinematic"},
      {"golden hour", "light=golden,warmth=warm"},
      {"moonlight", "light=lunar"},
      {"candlelight", "light=candle"},
      {"neon", "light=neon"},
      {"backlit", "light=back"},
      {"glow", "light=glow"},
      {"fluffy texture", "texture=fluffy"},
      {"rough texture", "texture=rough"},
      {"skin texture", "texture=skin"},
      {"velvet", "texture=velvet"},
      {"metallic", "texture=metallic"},
      {"glossy", "texture=glossy"},
      {"watercolor", "fx=watercolor"},
      {"oil painting", "fx=oil_paint"},
      {"bokeh", "fx=bokeh"},
      {"fog", "fx=fog"},
      {"mist", "fx=mist"},
      {"sparkling", "fx=sparkle"},
      {"shimmering", "fx=shimmer"},
      {"long exposure", "fx=long_exposure"},
      {"depth of field", "fx=depth_of_field"},
      {"vibrant colors", "color=vibrant"},
      {"pastel", "color=pastel"},
      {"monochrome", "color=monochrome"},
      {"warm tones", "color=warm"},
      {"cool tones", "color=cool"},
      {"crimson tones", "color=crimson"},
  };
  ExpansionLexicon lexicon;
  for (const auto& row : kRows) {
    ExpansionRule rule;
    rule.phrase = row.phrase;
    std::stringstream attrs(row.attrs);
    std::string pair;
    while (std::getline(attrs, pair, ',')) {
      std::size_t eq = pair.find('=');
      rule.attributes.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
    }
    lexicon.rules.push_back(std::move(rule));
  }
  return lexicon;
}

std::vector<const ExpansionRule*> ExpansionLexicon::match(const std::string& unit_text) const {
  std::vector<const ExpansionRule*> hits;
  for (const auto& rule : rules) {
    if (phrase_in_text(rule.phrase, unit_text)) hits.push_back(&rule);
  }
  return hits;
}

}  // namespace decot::lex
