#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sulm/common.hpp"

namespace sulm {

enum class Modality { text, speech, structural };

enum class Rate { core, fast, slow };

const char* rate_name(Rate r);
Rate rate_from_name(const std::string& name);

// One surface form with its canonical speech rendering (E units).
struct WordEntry {
  std::string surface;
  std::vector<int> rendering;  // speech-unit ids, length = units_per_word
};

struct VerbEntry {
  std::string lemma;
  int present = -1;  // indices into Lexicon::words
  int past = -1;     // past form doubles as the participle
  int synonym = -1;  // index into Lexicon::verbs
};

struct NounEntry {
  int word = -1;     // index into Lexicon::words
  int synonym = -1;  // index into Lexicon::nouns
};

struct LexiconSizes {
  int nouns = 28;
  int verbs = 14;
  int determiners = 4;
  int prepositions = 3;
};

// Synthetic word material: nouns, tensed verbs, and the function words the
// sentence grammar needs (determiners, prepositions, a tensed auxiliary).
// Every surface form owns a canonical rendering into discrete speech units.
//
// Renderings alternate between two disjoint halves of the unit alphabet
// (even positions draw from one half, odd positions from the other), which
// keeps the greedy rate-hypothesis decoder free of cross-rate ambiguity.
// The last two unit ids are reserved for the spoken stop marker and never
// occur inside a word rendering.
struct Lexicon {
  std::uint64_t seed = 0;
  int units_per_word = 4;
  int n_units = 64;

  std::vector<WordEntry> words;  // all surface forms, index = word id offset
  std::vector<NounEntry> nouns;
  std::vector<VerbEntry> verbs;
  std::vector<int> determiners;   // word indices
  std::vector<int> prepositions;  // word indices
  int aux_present = -1;           // word index
  int aux_past = -1;

  std::array<int, 2> stop_units() const {
    return {n_units - 2, n_units - 1};
  }

  const std::string& surface(int word_index) const {
    return words.at(static_cast<std::size_t>(word_index)).surface;
  }
  const std::vector<int>& rendering(int word_index) const {
    return words.at(static_cast<std::size_t>(word_index)).rendering;
  }

  int word_index(const std::string& surface) const;  // -1 if absent

  // Content lemma for a word index: nouns map to themselves, verb forms to
  // their lemma. Returns empty for function words.
  std::string content_lemma(int word_index) const;
  bool is_content_word(int word_index) const;

  std::string to_json() const;
  static Lexicon from_json(const std::string& text);

 private:
  mutable std::unordered_map<std::string, int> surface_index_;
  void build_surface_index() const;
};

// Deterministic for a given seed. Throws DataError when sizes cannot
// support disjoint Core demonstration/target pairs (each class needs >= 2).
Lexicon generate_lexicon(std::uint64_t seed, const LexiconSizes& sizes,
                         int units_per_word = 4, int n_units = 64);

// Unified token-id space: structural markers, speech units, then one id per
// lexicon surface form.
struct Vocabulary {
  static constexpr int kTextMark = 0;
  static constexpr int kSpeechMark = 1;
  static constexpr int kTextStop = 2;
  static constexpr int kUnitBase = 3;

  int n_units = 64;
  std::vector<std::string> words;  // copied from lexicon order

  static Vocabulary from_lexicon(const Lexicon& lex);

  int word_base() const { return kUnitBase + n_units; }
  int size() const { return word_base() + static_cast<int>(words.size()); }

  int unit_token(int unit) const;
  int word_token(int word_index) const;
  int unit_of_token(int token) const;  // -1 when not a unit token
  int word_of_token(int token) const;  // -1 when not a word token

  Modality modality(int token) const;
  std::array<int, 2> stop_tokens() const {
    return {unit_token(n_units - 2), unit_token(n_units - 1)};
  }

  // Human-readable form for prompt dumps and diagnostics.
  std::string describe(int token) const;
};

}  // namespace sulm
