#include "sulm/lexicon.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace sulm {

using json = nlohmann::ordered_json;

const char* rate_name(Rate r) {
  switch (r) {
    case Rate::core: return "core";
    case Rate::fast: return "fast";
    case Rate::slow: return "slow";
  }
  return "core";
}

Rate rate_from_name(const std::string& name) {
  if (name == "core") return Rate::core;
  if (name == "fast") return Rate::fast;
  if (name == "slow") return Rate::slow;
  throw DataError("unknown rate: " + name);
}

namespace {

// Pseudo-word builder. Content words get two syllables, function words one.
std::string make_pseudo_word(Rng& rng, int syllables, const char* suffix) {
  static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                 "n", "p", "r", "s", "t", "v", "z"};
  static const char* vowels[] = {"a", "e", "i", "o", "u"};
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += onsets[rng.uniform_int(std::size(onsets))];
    w += vowels[rng.uniform_int(std::size(vowels))];
  }
  w += suffix;
  return w;
}

std::string unique_word(Rng& rng, std::set<std::string>& used, int syllables,
                        const char* suffix) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::string w = make_pseudo_word(rng, syllables, suffix);
    if (w == "stop") continue;  // reserved by the transcript cleanup rule
    if (used.insert(w).second) return w;
  }
  throw DataError("lexicon word space exhausted; reduce class sizes");
}

}  // namespace

int Lexicon::word_index(const std::string& surface) const {
  build_surface_index();
  auto it = surface_index_.find(surface);
  return it == surface_index_.end() ? -1 : it->second;
}

void Lexicon::build_surface_index() const {
  if (surface_index_.size() == words.size()) return;
  surface_index_.clear();
  for (std::size_t i = 0; i < words.size(); ++i) {
    surface_index_[words[i].surface] = static_cast<int>(i);
  }
}

std::string Lexicon::content_lemma(int word_index) const {
  for (const auto& n : nouns) {
    if (n.word == word_index) return words[static_cast<std::size_t>(n.word)].surface;
  }
  for (const auto& v : verbs) {
    if (v.present == word_index || v.past == word_index) return v.lemma;
  }
  return {};
}

bool Lexicon::is_content_word(int word_index) const {
  return !content_lemma(word_index).empty();
}

Lexicon generate_lexicon(std::uint64_t seed, const LexiconSizes& sizes,
                         int units_per_word, int n_units) {
  if (sizes.nouns < 2 || sizes.verbs < 2 || sizes.determiners < 2 ||
      sizes.prepositions < 2) {
    throw DataError(
        "lexicon sizes too small: every word class needs >= 2 entries to "
        "build disjoint demonstration/target pairs");
  }
  if (units_per_word < 2 || units_per_word % 2 != 0) {
    throw DataError("units_per_word must be even and >= 2");
  }
  if (n_units < 8) throw DataError("speech-unit alphabet too small");

  Lexicon lex;
  lex.seed = seed;
  lex.units_per_word = units_per_word;
  lex.n_units = n_units;

  Rng rng(mix_seed(seed, 0x1e785c));

  // Unit alphabet halves; the last two units are the spoken stop marker.
  const int usable = n_units - 2;
  const int half = usable / 2;

  std::set<std::vector<int>> used_renderings;
  std::set<std::vector<int>> used_fast;  // every-second-unit projections
  auto make_rendering = [&](Rng& r) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::vector<int> units(static_cast<std::size_t>(units_per_word));
      std::vector<int> fast;
      for (int i = 0; i < units_per_word; ++i) {
        const bool even = i % 2 == 0;
        const int base = even ? 0 : half;
        const int span = even ? half : usable - half;
        units[static_cast<std::size_t>(i)] =
            base + static_cast<int>(r.uniform_int(static_cast<std::uint64_t>(span)));
        if (even) fast.push_back(units[static_cast<std::size_t>(i)]);
      }
      if (!used_renderings.insert(units).second) continue;
      if (!used_fast.insert(fast).second) {
        used_renderings.erase(units);
        continue;
      }
      return units;
    }
    throw DataError("rendering space exhausted; raise speech-unit count");
  };

  std::set<std::string> used_surfaces;
  auto add_word = [&](const std::string& surface) {
    WordEntry w;
    w.surface = surface;
    w.rendering = make_rendering(rng);
    lex.words.push_back(std::move(w));
    return static_cast<int>(lex.words.size()) - 1;
  };

  // Function words first so their token ids are stable across size changes.
  for (int i = 0; i < sizes.determiners; ++i) {
    lex.determiners.push_back(add_word(unique_word(rng, used_surfaces, 1, "")));
  }
  for (int i = 0; i < sizes.prepositions; ++i) {
    lex.prepositions.push_back(add_word(unique_word(rng, used_surfaces, 1, "x")));
  }
  lex.aux_present = add_word(unique_word(rng, used_surfaces, 1, "z"));
  lex.aux_past = add_word(unique_word(rng, used_surfaces, 1, "zed"));

  for (int i = 0; i < sizes.nouns; ++i) {
    NounEntry n;
    n.word = add_word(unique_word(rng, used_surfaces, 2, ""));
    lex.nouns.push_back(n);
  }
  for (int i = 0; i < sizes.verbs; ++i) {
    VerbEntry v;
    std::string stem = unique_word(rng, used_surfaces, 2, "");
    v.lemma = stem;
    v.present = add_word(stem + "s");
    v.past = add_word(stem + "d");
    used_surfaces.insert(stem + "s");
    used_surfaces.insert(stem + "d");
    lex.verbs.push_back(v);
  }

  // Synonym maps: a rotation, so image != preimage for every entry.
  for (int i = 0; i < sizes.nouns; ++i) {
    lex.nouns[static_cast<std::size_t>(i)].synonym = (i + 1) % sizes.nouns;
  }
  for (int i = 0; i < sizes.verbs; ++i) {
    lex.verbs[static_cast<std::size_t>(i)].synonym = (i + 1) % sizes.verbs;
  }

  return lex;
}

std::string Lexicon::to_json() const {
  json j;
  j["seed"] = seed;
  j["units_per_word"] = units_per_word;
  j["n_units"] = n_units;
  j["words"] = json::array();
  for (const auto& w : words) {
    j["words"].push_back({{"surface", w.surface}, {"rendering", w.rendering}});
  }
  j["nouns"] = json::array();
  for (const auto& n : nouns) {
    j["nouns"].push_back({{"word", n.word}, {"synonym", n.synonym}});
  }
  j["verbs"] = json::array();
  for (const auto& v : verbs) {
    j["verbs"].push_back({{"lemma", v.lemma},
                          {"present", v.present},
                          {"past", v.past},
                          {"synonym", v.synonym}});
  }
  j["determiners"] = determiners;
  j["prepositions"] = prepositions;
  j["aux_present"] = aux_present;
  j["aux_past"] = aux_past;
  return j.dump(2) + "\n";
}

Lexicon Lexicon::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("lexicon parse error: ") + e.what());
  }
  Lexicon lex;
  try {
    lex.seed = j.at("seed").get<std::uint64_t>();
    lex.units_per_word = j.at("units_per_word").get<int>();
    lex.n_units = j.at("n_units").get<int>();
    for (const auto& w : j.at("words")) {
      WordEntry e;
      e.surface = w.at("surface").get<std::string>();
      e.rendering = w.at("rendering").get<std::vector<int>>();
      lex.words.push_back(std::move(e));
    }
    for (const auto& n : j.at("nouns")) {
      NounEntry e;
      e.word = n.at("word").get<int>();
      e.synonym = n.at("synonym").get<int>();
      lex.nouns.push_back(e);
    }
    for (const auto& v : j.at("verbs")) {
      VerbEntry e;
      e.lemma = v.at("lemma").get<std::string>();
      e.present = v.at("present").get<int>();
      e.past = v.at("past").get<int>();
      e.synonym = v.at("synonym").get<int>();
      lex.verbs.push_back(e);
    }
    lex.determiners = j.at("determiners").get<std::vector<int>>();
    lex.prepositions = j.at("prepositions").get<std::vector<int>>();
    lex.aux_present = j.at("aux_present").get<int>();
    lex.aux_past = j.at("aux_past").get<int>();
  } catch (const json::exception& e) {
    throw DataError(std::string("lexicon field error: ") + e.what());
  }
  return lex;
}

Vocabulary Vocabulary::from_lexicon(const Lexicon& lex) {
  Vocabulary v;
  v.n_units = lex.n_units;
  v.words.reserve(lex.words.size());
  for (const auto& w : lex.words) v.words.push_back(w.surface);
  return v;
}

int Vocabulary::unit_token(int unit) const {
  if (unit < 0 || unit >= n_units) throw DataError("speech unit out of range");
  return kUnitBase + unit;
}

int Vocabulary::word_token(int word_index) const {
  if (word_index < 0 || word_index >= static_cast<int>(words.size())) {
    throw DataError("word index out of range");
  }
  return word_base() + word_index;
}

int Vocabulary::unit_of_token(int token) const {
  if (token >= kUnitBase && token < word_base()) return token - kUnitBase;
  return -1;
}

int Vocabulary::word_of_token(int token) const {
  if (token >= word_base() && token < size()) return token - word_base();
  return -1;
}

Modality Vocabulary::modality(int token) const {
  if (token < 0 || token >= size()) throw DataError("token id out of range");
  if (token < kUnitBase) return Modality::structural;
  if (token < word_base()) return Modality::speech;
  return Modality::text;
}

std::string Vocabulary::describe(int token) const {
  if (token == kTextMark) return "[TEXT]";
  if (token == kSpeechMark) return "[SPEECH]";
  if (token == kTextStop) return "`stop'";
  int u = unit_of_token(token);
  if (u >= 0) return "u" + std::to_string(u);
  int w = word_of_token(token);
  if (w >= 0) return words[static_cast<std::size_t>(w)];
  return "<bad:" + std::to_string(token) + ">";
}

}  // namespace sulm
