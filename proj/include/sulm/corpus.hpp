#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sulm/lexicon.hpp"

namespace sulm {

enum class Syntax { active, passive };
enum class Tense { present, past };

const char* syntax_name(Syntax s);
const char* tense_name(Tense t);
Syntax syntax_from_name(const std::string& s);
Tense tense_from_name(const std::string& s);

// Transitive sentence over class indices (determiner/preposition index their
// lexicon classes, agent/patient index nouns, verb indexes verbs).
// Active surface:  det agent verb det patient
// Passive surface: det patient aux participle prep det agent
// The participle reuses the verb's past form, as with English regulars.
struct Sentence {
  Syntax syntax = Syntax::active;
  Tense tense = Tense::present;
  int determiner = 0;
  int preposition = 0;
  int agent = 0;
  int patient = 0;
  int verb = 0;

  std::vector<int> word_indices(const Lexicon& lex) const;
  std::vector<std::string> surface(const Lexicon& lex) const;
  std::array<int, 3> content_triple() const { return {agent, verb, patient}; }
};

enum class ConditionKind {
  core,
  lexical_overlap,
  semantic_similarity,
  rate_fast,
  rate_slow
};

enum class OverlapDegree { none, nouns_only, verb_only, function_only, all_words };

struct Condition {
  ConditionKind kind = ConditionKind::core;
  OverlapDegree degree = OverlapDegree::none;

  void validate() const;
  std::string label() const;
  static Condition from_label(const std::string& label);
  Rate demo_rate() const;
  bool cumulative_demos() const;  // overlap conditions pair one demo only
};

struct SyntaxCombo {
  Syntax target_syntax = Syntax::active;
  bool congruent = true;

  Syntax demo_syntax() const {
    if (congruent) return target_syntax;
    return target_syntax == Syntax::active ? Syntax::passive : Syntax::active;
  }
  std::string label() const;
  static SyntaxCombo from_label(const std::string& label);
  static const std::array<SyntaxCombo, 4>& all();
};

struct ICLItem {
  Sentence target;
  std::vector<Sentence> demos;
  std::vector<Rate> demo_rates;  // one per demonstration
  Condition condition;
  SyntaxCombo combo;
  std::uint64_t seed = 0;
};

using ContentTriple = std::array<int, 3>;

// Builds one item with n_demos demonstrations realizing the condition.
// banned_triples, when given, excludes content combinations (used to keep
// evaluation targets out of the training split).
ICLItem make_item(const Lexicon& lex, const Condition& condition,
                  const SyntaxCombo& combo, int n_demos, std::uint64_t seed,
                  const std::set<ContentTriple>* banned_triples = nullptr);

// Checks the per-condition overlap/disjointness invariants; throws DataError
// with a description when violated.
void validate_item(const Lexicon& lex, const ICLItem& item);

// Speech rendering at a rate: core concatenates canonical per-word
// renderings, fast keeps every second unit, slow duplicates each unit.
std::vector<int> render_speech(const Lexicon& lex,
                               const std::vector<int>& word_indices, Rate rate);
std::vector<int> render_speech(const Lexicon& lex, const Sentence& sentence,
                               Rate rate);
// Surface-word variant; throws DataError for words missing from the lexicon.
std::vector<int> render_speech_surface(const Lexicon& lex,
                                       const std::vector<std::string>& words,
                                       Rate rate);

int adjacent_repeat_count(const std::vector<int>& units);

// ---- corpus building ----

struct CorpusSpec {
  std::uint64_t seed = 1;
  LexiconSizes lexicon_sizes;
  int units_per_word = 4;
  int n_units = 64;

  int eval_targets = 25;
  int eval_demo_sets = 4;
  int max_demos = 5;

  // Training mixture: ICL episodes (1-3 demos), raw speech-unit streams,
  // raw word streams.
  int train_icl = 1500;
  int train_speech_only = 900;
  int train_text_only = 600;
};

struct TrainLine {
  std::string kind;  // "icl", "speech_only", "text_only"
  std::vector<int> tokens;
  std::vector<std::uint8_t> loss_mask;  // mask[j] gates predicting token j
};

struct EvalDemo {
  Sentence sentence;
  Rate rate = Rate::core;
  std::vector<int> units;  // rendered at `rate`
};

struct EvalItem {
  std::string id;
  Condition condition;
  SyntaxCombo combo;
  Sentence target;
  std::vector<EvalDemo> demos;
  std::vector<int> n_demos_list;
  std::uint64_t seed = 0;
};

struct Corpus {
  Lexicon lexicon;
  std::string train_jsonl;
  std::string eval_jsonl;
};

// Deterministic for (seed, spec): identical bytes on every call.
Corpus build_corpus(const Lexicon& lex, const CorpusSpec& spec);

std::vector<TrainLine> load_train_lines(const std::string& jsonl);
std::vector<EvalItem> load_eval_items(const std::string& jsonl);

// All conditions the evaluation grid covers, in emission order.
std::vector<Condition> eval_conditions();

}  // namespace sulm
