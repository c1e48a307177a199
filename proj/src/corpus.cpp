#include "sulm/corpus.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sulm/prompt.hpp"

namespace sulm {

using json = nlohmann::ordered_json;

const char* syntax_name(Syntax s) {
  return s == Syntax::active ? "active" : "passive";
}
const char* tense_name(Tense t) {
  return t == Tense::present ? "present" : "past";
}
Syntax syntax_from_name(const std::string& s) {
  if (s == "active") return Syntax::active;
  if (s == "passive") return Syntax::passive;
  throw DataError("unknown syntax: " + s);
}
Tense tense_from_name(const std::string& s) {
  if (s == "present") return Tense::present;
  if (s == "past") return Tense::past;
  throw DataError("unknown tense: " + s);
}

std::vector<int> Sentence::word_indices(const Lexicon& lex) const {
  const int det = lex.determiners.at(static_cast<std::size_t>(determiner));
  const int agent_w = lex.nouns.at(static_cast<std::size_t>(agent)).word;
  const int patient_w = lex.nouns.at(static_cast<std::size_t>(patient)).word;
  const auto& v = lex.verbs.at(static_cast<std::size_t>(verb));
  if (syntax == Syntax::active) {
    const int verb_w = tense == Tense::present ? v.present : v.past;
    return {det, agent_w, verb_w, det, patient_w};
  }
  const int aux = tense == Tense::present ? lex.aux_present : lex.aux_past;
  const int prep = lex.prepositions.at(static_cast<std::size_t>(preposition));
  return {det, patient_w, aux, v.past, prep, det, agent_w};
}

std::vector<std::string> Sentence::surface(const Lexicon& lex) const {
  std::vector<std::string> out;
  for (int w : word_indices(lex)) out.push_back(lex.surface(w));
  return out;
}

void Condition::validate() const {
  switch (kind) {
    case ConditionKind::core:
    case ConditionKind::rate_fast:
    case ConditionKind::rate_slow:
      if (degree != OverlapDegree::none) {
        throw DataError("condition " + label() + " does not take a degree");
      }
      return;
    case ConditionKind::lexical_overlap:
      if (degree == OverlapDegree::none) {
        throw DataError("lexical_overlap requires an overlap degree");
      }
      return;
    case ConditionKind::semantic_similarity:
      if (degree != OverlapDegree::nouns_only &&
          degree != OverlapDegree::verb_only) {
        throw DataError(
            "semantic_similarity supports only nouns_only and verb_only");
      }
      return;
  }
  throw DataError("bad condition kind");
}

namespace {
const char* degree_name(OverlapDegree d) {
  switch (d) {
    case OverlapDegree::none: return "none";
    case OverlapDegree::nouns_only: return "nouns_only";
    case OverlapDegree::verb_only: return "verb_only";
    case OverlapDegree::function_only: return "function_only";
    case OverlapDegree::all_words: return "all_words";
  }
  return "none";
}

OverlapDegree degree_from_name(const std::string& s) {
  if (s == "none") return OverlapDegree::none;
  if (s == "nouns_only") return OverlapDegree::nouns_only;
  if (s == "verb_only") return OverlapDegree::verb_only;
  if (s == "function_only") return OverlapDegree::function_only;
  if (s == "all_words") return OverlapDegree::all_words;
  throw DataError("unknown overlap degree: " + s);
}
}  // namespace

std::string Condition::label() const {
  std::string base;
  switch (kind) {
    case ConditionKind::core: base = "core"; break;
    case ConditionKind::lexical_overlap: base = "lex_overlap"; break;
    case ConditionKind::semantic_similarity: base = "sem_similarity"; break;
    case ConditionKind::rate_fast: base = "rate_fast"; break;
    case ConditionKind::rate_slow: base = "rate_slow"; break;
  }
  if (degree != OverlapDegree::none) {
    base += ":";
    base += degree_name(degree);
  }
  return base;
}

Condition Condition::from_label(const std::string& label) {
  Condition c;
  std::string base = label;
  const auto colon = label.find(':');
  if (colon != std::string::npos) {
    base = label.substr(0, colon);
    c.degree = degree_from_name(label.substr(colon + 1));
  }
  if (base == "core") c.kind = ConditionKind::core;
  else if (base == "lex_overlap") c.kind = ConditionKind::lexical_overlap;
  else if (base == "sem_similarity") c.kind = ConditionKind::semantic_similarity;
  else if (base == "rate_fast") c.kind = ConditionKind::rate_fast;
  else if (base == "rate_slow") c.kind = ConditionKind::rate_slow;
  else throw DataError("unknown condition: " + label);
  c.validate();
  return c;
}

Rate Condition::demo_rate() const {
  if (kind == ConditionKind::rate_fast) return Rate::fast;
  if (kind == ConditionKind::rate_slow) return Rate::slow;
  return Rate::core;
}

bool Condition::cumulative_demos() const {
  return kind == ConditionKind::core || kind == ConditionKind::rate_fast ||
         kind == ConditionKind::rate_slow;
}

std::string SyntaxCombo::label() const {
  return std::string(syntax_name(target_syntax)) + "_" +
         (congruent ? "congruent" : "incongruent");
}

SyntaxCombo SyntaxCombo::from_label(const std::string& label) {
  for (const auto& c : all()) {
    if (c.label() == label) return c;
  }
  throw DataError("unknown syntax combination: " + label);
}

const std::array<SyntaxCombo, 4>& SyntaxCombo::all() {
  static const std::array<SyntaxCombo, 4> combos = {
      SyntaxCombo{Syntax::active, true}, SyntaxCombo{Syntax::active, false},
      SyntaxCombo{Syntax::passive, true}, SyntaxCombo{Syntax::passive, false}};
  return combos;
}

// ---- item construction ----

namespace {

Tense other(Tense t) {
  return t == Tense::present ? Tense::past : Tense::present;
}

int pick_excluding(Rng& rng, int n, const std::vector<int>& excluded) {
  std::vector<int> allowed;
  allowed.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) {
      allowed.push_back(i);
    }
  }
  if (allowed.empty()) {
    throw DataError("unsatisfiable overlap with given lexicon");
  }
  return allowed[rng.uniform_int(allowed.size())];
}

bool triple_banned(const Sentence& s, const std::set<ContentTriple>* banned) {
  return banned != nullptr && banned->count(s.content_triple()) > 0;
}

Sentence sample_target(const Lexicon& lex, const Condition& cond,
                       const SyntaxCombo& combo, Rng& rng,
                       const std::set<ContentTriple>* banned) {
  const int n_nouns = static_cast<int>(lex.nouns.size());
  const int n_verbs = static_cast<int>(lex.verbs.size());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Sentence t;
    t.syntax = combo.target_syntax;
    t.tense = rng.uniform_int(2) == 0 ? Tense::present : Tense::past;
    t.determiner = static_cast<int>(rng.uniform_int(lex.determiners.size()));
    t.preposition = static_cast<int>(rng.uniform_int(lex.prepositions.size()));
    t.agent = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_nouns)));
    t.patient = pick_excluding(rng, n_nouns, {t.agent});
    t.verb = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_verbs)));
    if (cond.kind == ConditionKind::semantic_similarity &&
        cond.degree == OverlapDegree::nouns_only) {
      // Synonym images must not hit the target's own nouns.
      const int syn_a = lex.nouns[static_cast<std::size_t>(t.agent)].synonym;
      const int syn_p = lex.nouns[static_cast<std::size_t>(t.patient)].synonym;
      if (syn_a == t.patient || syn_p == t.agent) continue;
    }
    if (triple_banned(t, banned)) continue;
    return t;
  }
  throw DataError("unsatisfiable overlap with given lexicon");
}

Sentence sample_demo(const Lexicon& lex, const Condition& cond,
                     const Sentence& target, Syntax demo_syntax, Rng& rng,
                     const std::set<ContentTriple>* banned) {
  const int n_nouns = static_cast<int>(lex.nouns.size());
  const int n_verbs = static_cast<int>(lex.verbs.size());
  const int n_dets = static_cast<int>(lex.determiners.size());
  const int n_preps = static_cast<int>(lex.prepositions.size());

  for (int attempt = 0; attempt < 10000; ++attempt) {
    Sentence d;
    d.syntax = demo_syntax;
    switch (cond.kind) {
      case ConditionKind::core:
      case ConditionKind::rate_fast:
      case ConditionKind::rate_slow: {
        d.tense = other(target.tense);
        d.determiner = pick_excluding(rng, n_dets, {target.determiner});
        d.preposition = pick_excluding(rng, n_preps, {target.preposition});
        d.agent = pick_excluding(rng, n_nouns, {target.agent, target.patient});
        d.patient = pick_excluding(
            rng, n_nouns, {target.agent, target.patient, d.agent});
        d.verb = pick_excluding(rng, n_verbs, {target.verb});
        break;
      }
      case ConditionKind::lexical_overlap: {
        switch (cond.degree) {
          case OverlapDegree::nouns_only:
            d.tense = other(target.tense);
            d.determiner = pick_excluding(rng, n_dets, {target.determiner});
            d.preposition = pick_excluding(rng, n_preps, {target.preposition});
            d.agent = target.agent;
            d.patient = target.patient;
            d.verb = pick_excluding(rng, n_verbs, {target.verb});
            break;
          case OverlapDegree::verb_only:
            d.tense = other(target.tense);
            d.determiner = pick_excluding(rng, n_dets, {target.determiner});
            d.preposition = pick_excluding(rng, n_preps, {target.preposition});
            d.agent = pick_excluding(rng, n_nouns, {target.agent, target.patient});
            d.patient = pick_excluding(
                rng, n_nouns, {target.agent, target.patient, d.agent});
            d.verb = target.verb;
            break;
          case OverlapDegree::function_only:
            d.tense = target.tense;
            d.determiner = target.determiner;
            d.preposition = target.preposition;
            d.agent = pick_excluding(rng, n_nouns, {target.agent, target.patient});
            d.patient = pick_excluding(
                rng, n_nouns, {target.agent, target.patient, d.agent});
            d.verb = pick_excluding(rng, n_verbs, {target.verb});
            break;
          case OverlapDegree::all_words:
            d.tense = target.tense;
            d.determiner = target.determiner;
            d.preposition = target.preposition;
            d.agent = target.agent;
            d.patient = target.patient;
            d.verb = target.verb;
            break;
          case OverlapDegree::none:
            throw DataError("lexical_overlap requires a degree");
        }
        break;
      }
      case ConditionKind::semantic_similarity: {
        d.tense = other(target.tense);
        d.determiner = pick_excluding(rng, n_dets, {target.determiner});
        d.preposition = pick_excluding(rng, n_preps, {target.preposition});
        if (cond.degree == OverlapDegree::nouns_only) {
          d.agent = lex.nouns[static_cast<std::size_t>(target.agent)].synonym;
          d.patient = lex.nouns[static_cast<std::size_t>(target.patient)].synonym;
          d.verb = pick_excluding(rng, n_verbs, {target.verb});
        } else {
          d.agent = pick_excluding(rng, n_nouns, {target.agent, target.patient});
          d.patient = pick_excluding(
              rng, n_nouns, {target.agent, target.patient, d.agent});
          d.verb = lex.verbs[static_cast<std::size_t>(target.verb)].synonym;
        }
        break;
      }
    }
    if (triple_banned(d, banned)) continue;
    return d;
  }
  throw DataError("unsatisfiable overlap with given lexicon");
}

}  // namespace

ICLItem make_item(const Lexicon& lex, const Condition& condition,
                  const SyntaxCombo& combo, int n_demos, std::uint64_t seed,
                  const std::set<ContentTriple>* banned_triples) {
  condition.validate();
  if (n_demos < 0 || n_demos > 5) throw DataError("n_demos must be in 0..5");

  Rng rng(mix_seed(seed, 0xc0de));
  ICLItem item;
  item.condition = condition;
  item.combo = combo;
  item.seed = seed;
  item.target = sample_target(lex, condition, combo, rng, banned_triples);
  for (int i = 0; i < n_demos; ++i) {
    item.demos.push_back(sample_demo(lex, condition, item.target,
                                     combo.demo_syntax(), rng, banned_triples));
    item.demo_rates.push_back(condition.demo_rate());
  }
  validate_item(lex, item);
  return item;
}

namespace {
std::set<std::string> surface_set(const Lexicon& lex, const Sentence& s) {
  std::set<std::string> out;
  for (const auto& w : s.surface(lex)) out.insert(w);
  return out;
}

std::set<std::string> intersect(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const auto& x : a) {
    if (b.count(x)) out.insert(x);
  }
  return out;
}
}  // namespace

void validate_item(const Lexicon& lex, const ICLItem& item) {
  item.condition.validate();
  if (item.demos.size() != item.demo_rates.size()) {
    throw DataError("demo/rate count mismatch");
  }
  if (item.demos.size() > 5) throw DataError("too many demonstrations");
  if (item.target.syntax != item.combo.target_syntax) {
    throw DataError("target syntax does not match combination tag");
  }

  const auto target_words = surface_set(lex, item.target);
  const std::string agent_s =
      lex.surface(lex.nouns[static_cast<std::size_t>(item.target.agent)].word);
  const std::string patient_s =
      lex.surface(lex.nouns[static_cast<std::size_t>(item.target.patient)].word);

  for (const auto& demo : item.demos) {
    if (demo.syntax != item.combo.demo_syntax()) {
      throw DataError("demo syntax does not match combination tag");
    }
    const auto shared = intersect(surface_set(lex, demo), target_words);
    const auto& cond = item.condition;
    switch (cond.kind) {
      case ConditionKind::core:
      case ConditionKind::rate_fast:
      case ConditionKind::rate_slow:
        if (!shared.empty()) {
          throw DataError("core demo shares surface words with target");
        }
        if (demo.tense == item.target.tense) {
          throw DataError("core demo must differ in tense");
        }
        break;
      case ConditionKind::lexical_overlap:
        switch (cond.degree) {
          case OverlapDegree::nouns_only: {
            std::set<std::string> want = {agent_s, patient_s};
            if (shared != want || demo.verb == item.target.verb ||
                demo.tense == item.target.tense) {
              throw DataError("nouns_only overlap not exact");
            }
            break;
          }
          case OverlapDegree::verb_only:
            if (!shared.empty() || demo.verb != item.target.verb ||
                demo.tense == item.target.tense) {
              throw DataError("verb_only overlap not exact");
            }
            break;
          case OverlapDegree::function_only: {
            if (demo.tense != item.target.tense ||
                demo.determiner != item.target.determiner ||
                demo.preposition != item.target.preposition) {
              throw DataError("function_only must share function words/tense");
            }
            // Shared surfaces must all be function words.
            for (const auto& w : shared) {
              const int wi = lex.word_index(w);
              if (wi < 0 || lex.is_content_word(wi)) {
                throw DataError("function_only shares a content word");
              }
            }
            if (demo.agent == item.target.agent ||
                demo.patient == item.target.patient ||
                demo.verb == item.target.verb) {
              throw DataError("function_only shares content");
            }
            break;
          }
          case OverlapDegree::all_words:
            if (demo.agent != item.target.agent ||
                demo.patient != item.target.patient ||
                demo.verb != item.target.verb ||
                demo.tense != item.target.tense ||
                demo.determiner != item.target.determiner ||
                demo.preposition != item.target.preposition) {
              throw DataError("all_words demo must repeat the target");
            }
            break;
          case OverlapDegree::none:
            throw DataError("lexical_overlap requires a degree");
        }
        break;
      case ConditionKind::semantic_similarity: {
        if (!shared.empty() || demo.tense == item.target.tense) {
          throw DataError("semantic_similarity demo must share no surface words");
        }
        if (cond.degree == OverlapDegree::nouns_only) {
          if (demo.agent !=
                  lex.nouns[static_cast<std::size_t>(item.target.agent)].synonym ||
              demo.patient !=
                  lex.nouns[static_cast<std::size_t>(item.target.patient)].synonym) {
            throw DataError("nouns are not synonym images of the target's");
          }
        } else {
          if (demo.verb !=
              lex.verbs[static_cast<std::size_t>(item.target.verb)].synonym) {
            throw DataError("verb is not the synonym image of the target's");
          }
        }
        break;
      }
    }
  }
}

// ---- rendering ----

std::vector<int> render_speech(const Lexicon& lex,
                               const std::vector<int>& word_indices, Rate rate) {
  std::vector<int> out;
  for (int wi : word_indices) {
    if (wi < 0 || wi >= static_cast<int>(lex.words.size())) {
      throw DataError("word missing from lexicon");
    }
    const auto& r = lex.rendering(wi);
    switch (rate) {
      case Rate::core:
        out.insert(out.end(), r.begin(), r.end());
        break;
      case Rate::fast:
        for (std::size_t i = 0; i < r.size(); i += 2) out.push_back(r[i]);
        break;
      case Rate::slow:
        for (int u : r) {
          out.push_back(u);
          out.push_back(u);
        }
        break;
    }
  }
  return out;
}

std::vector<int> render_speech(const Lexicon& lex, const Sentence& sentence,
                               Rate rate) {
  return render_speech(lex, sentence.word_indices(lex), rate);
}

std::vector<int> render_speech_surface(const Lexicon& lex,
                                       const std::vector<std::string>& words,
                                       Rate rate) {
  std::vector<int> indices;
  for (const auto& w : words) {
    const int wi = lex.word_index(w);
    if (wi < 0) throw DataError("word missing from lexicon: " + w);
    indices.push_back(wi);
  }
  return render_speech(lex, indices, rate);
}

int adjacent_repeat_count(const std::vector<int>& units) {
  int count = 0;
  for (std::size_t i = 1; i < units.size(); ++i) {
    if (units[i] == units[i - 1]) ++count;
  }
  return count;
}

// ---- corpus building ----

std::vector<Condition> eval_conditions() {
  return {
      Condition{ConditionKind::core, OverlapDegree::none},
      Condition{ConditionKind::lexical_overlap, OverlapDegree::nouns_only},
      Condition{ConditionKind::lexical_overlap, OverlapDegree::verb_only},
      Condition{ConditionKind::lexical_overlap, OverlapDegree::function_only},
      Condition{ConditionKind::lexical_overlap, OverlapDegree::all_words},
      Condition{ConditionKind::semantic_similarity, OverlapDegree::nouns_only},
      Condition{ConditionKind::semantic_similarity, OverlapDegree::verb_only},
      Condition{ConditionKind::rate_fast, OverlapDegree::none},
      Condition{ConditionKind::rate_slow, OverlapDegree::none},
  };
}

namespace {

json sentence_to_json(const Lexicon& lex, const Sentence& s) {
  json j;
  j["syntax"] = syntax_name(s.syntax);
  j["tense"] = tense_name(s.tense);
  j["determiner"] = s.determiner;
  j["preposition"] = s.preposition;
  j["agent"] = s.agent;
  j["patient"] = s.patient;
  j["verb"] = s.verb;
  j["words"] = s.surface(lex);
  return j;
}

Sentence sentence_from_json(const json& j) {
  Sentence s;
  s.syntax = syntax_from_name(j.at("syntax").get<std::string>());
  s.tense = tense_from_name(j.at("tense").get<std::string>());
  s.determiner = j.at("determiner").get<int>();
  s.preposition = j.at("preposition").get<int>();
  s.agent = j.at("agent").get<int>();
  s.patient = j.at("patient").get<int>();
  s.verb = j.at("verb").get<int>();
  return s;
}

// Training episode: full prompt plus the target rendering and stop marker.
// The first block's speech span is masked out of the loss so that producing
// speech without any preceding demonstration is never directly supervised;
// zero-shot behavior is then probed purely in-context, as in the evaluation.
TrainLine make_icl_train_line(const Vocabulary& vocab, const Lexicon& lex,
                              const ICLItem& item, Rate target_rate) {
  TrainLine line;
  line.kind = "icl";
  ICLPrompt prompt = build_prompt(vocab, lex, item);
  line.tokens = prompt.tokens;
  const auto target_units = render_speech(lex, item.target, target_rate);
  for (int u : target_units) line.tokens.push_back(vocab.unit_token(u));
  for (int u : lex.stop_units()) line.tokens.push_back(vocab.unit_token(u));

  line.loss_mask.assign(line.tokens.size(), 1);
  line.loss_mask[0] = 0;  // nothing predicts the first token
  if (!item.demos.empty() && !prompt.blocks.empty()) {
    // Mask the speech span of the first block (units plus its stop marker).
    const auto [begin, end] = prompt.blocks.front();
    bool in_speech = false;
    for (int p = begin; p < end; ++p) {
      if (line.tokens[static_cast<std::size_t>(p)] == Vocabulary::kSpeechMark) {
        in_speech = true;
        continue;
      }
      if (in_speech) line.loss_mask[static_cast<std::size_t>(p)] = 0;
    }
  }
  return line;
}

}  // namespace

Corpus build_corpus(const Lexicon& lex, const CorpusSpec& spec) {
  const Vocabulary vocab = Vocabulary::from_lexicon(lex);
  Corpus corpus;
  corpus.lexicon = lex;

  const auto conditions = eval_conditions();

  // Evaluation grid first; its target combinations are banned from training.
  std::set<ContentTriple> eval_triples;
  const std::uint64_t total_triples =
      static_cast<std::uint64_t>(lex.nouns.size()) * lex.verbs.size() *
      (lex.nouns.size() - 1);
  const std::uint64_t needed =
      static_cast<std::uint64_t>(conditions.size()) * spec.eval_targets;
  if (needed * 2 > total_triples) {
    throw DataError("leakage detected: evaluation grid would exhaust the "
                    "content-combination space; enlarge the lexicon");
  }

  std::ostringstream eval_out;
  std::uint64_t item_counter = 0;
  for (const auto& cond : conditions) {
    const int n_demos = cond.cumulative_demos() ? spec.max_demos : 1;
    std::vector<int> n_demos_list;
    if (cond.cumulative_demos()) {
      for (int k = 0; k <= spec.max_demos; ++k) n_demos_list.push_back(k);
    } else {
      n_demos_list.push_back(1);
    }
    for (int t = 0; t < spec.eval_targets; ++t) {
      // One target content per (condition, t); it is crossed with the four
      // syntax combinations and paired with every demonstration set.
      const std::uint64_t target_seed = mix_seed(spec.seed, ++item_counter);
      Rng target_rng(target_seed);
      Sentence target_content;
      std::uint64_t sub = 0;
      while (true) {
        target_content = sample_target(lex, cond, SyntaxCombo{Syntax::active, true},
                                       target_rng, nullptr);
        if (eval_triples.count(target_content.content_triple()) == 0) break;
        if (++sub > 5000) {
          throw DataError("leakage detected: cannot find fresh targets");
        }
      }
      eval_triples.insert(target_content.content_triple());

      for (int set_idx = 0; set_idx < spec.eval_demo_sets; ++set_idx) {
        for (const auto& combo : SyntaxCombo::all()) {
          const std::uint64_t item_seed = mix_seed(spec.seed, ++item_counter);
          Rng demo_rng(item_seed);
          ICLItem item;
          item.condition = cond;
          item.combo = combo;
          item.seed = item_seed;
          item.target = target_content;
          item.target.syntax = combo.target_syntax;
          for (int d = 0; d < n_demos; ++d) {
            item.demos.push_back(sample_demo(lex, cond, item.target,
                                             combo.demo_syntax(), demo_rng,
                                             nullptr));
            item.demo_rates.push_back(cond.demo_rate());
          }
          validate_item(lex, item);

          json j;
          j["kind"] = "eval";
          j["id"] = cond.label() + ":t" + std::to_string(t) + ":s" +
                    std::to_string(set_idx) + ":" + combo.label();
          j["condition"] = cond.label();
          j["syntax_combo"] = combo.label();
          j["n_demos_list"] = n_demos_list;
          j["seed"] = item.seed;
          j["target"] = sentence_to_json(lex, item.target);
          j["demos"] = json::array();
          for (std::size_t d = 0; d < item.demos.size(); ++d) {
            json dj = sentence_to_json(lex, item.demos[d]);
            dj["rate"] = rate_name(item.demo_rates[d]);
            dj["units"] = render_speech(lex, item.demos[d], item.demo_rates[d]);
            j["demos"].push_back(dj);
          }
          eval_out << j.dump() << "\n";
        }
      }
    }
  }
  corpus.eval_jsonl = eval_out.str();

  // Training split. Condition mixture for ICL episodes, weighted toward the
  // baseline; rate episodes keep demonstrations and target at the same rate.
  struct WeightedCondition { Condition cond; double weight; };
  const std::vector<WeightedCondition> mixture = {
      {{ConditionKind::core, OverlapDegree::none}, 0.40},
      {{ConditionKind::lexical_overlap, OverlapDegree::nouns_only}, 0.0625},
      {{ConditionKind::lexical_overlap, OverlapDegree::verb_only}, 0.0625},
      {{ConditionKind::lexical_overlap, OverlapDegree::function_only}, 0.0625},
      {{ConditionKind::lexical_overlap, OverlapDegree::all_words}, 0.0625},
      {{ConditionKind::semantic_similarity, OverlapDegree::nouns_only}, 0.05},
      {{ConditionKind::semantic_similarity, OverlapDegree::verb_only}, 0.05},
      {{ConditionKind::rate_fast, OverlapDegree::none}, 0.125},
      {{ConditionKind::rate_slow, OverlapDegree::none}, 0.125},
  };

  Rng train_rng(mix_seed(spec.seed, 0x7ea1));
  std::ostringstream train_out;

  auto sample_condition = [&](Rng& rng) {
    double x = rng.uniform();
    for (const auto& wc : mixture) {
      x -= wc.weight;
      if (x < 0) return wc.cond;
    }
    return mixture.back().cond;
  };

  auto sample_filler = [&](Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Sentence s;
      s.syntax = rng.uniform_int(2) == 0 ? Syntax::active : Syntax::passive;
      s.tense = rng.uniform_int(2) == 0 ? Tense::present : Tense::past;
      s.determiner = static_cast<int>(rng.uniform_int(lex.determiners.size()));
      s.preposition = static_cast<int>(rng.uniform_int(lex.prepositions.size()));
      s.agent = static_cast<int>(rng.uniform_int(lex.nouns.size()));
      s.patient = pick_excluding(rng, static_cast<int>(lex.nouns.size()),
                                 {s.agent});
      s.verb = static_cast<int>(rng.uniform_int(lex.verbs.size()));
      if (eval_triples.count(s.content_triple()) == 0) return s;
    }
    throw DataError("leakage detected: filler sampling exhausted");
  };

  auto emit_line = [&](const TrainLine& line, json extra) {
    extra["tokens"] = line.tokens;
    extra["loss_mask"] = line.loss_mask;
    train_out << extra.dump() << "\n";
  };

  for (int i = 0; i < spec.train_icl; ++i) {
    const std::uint64_t item_seed = mix_seed(spec.seed, 0x10000000ULL + i);
    Rng rng(item_seed);
    const Condition cond = sample_condition(rng);
    const int n_demos = 1 + static_cast<int>(rng.uniform_int(3));
    const SyntaxCombo combo = SyntaxCombo::all()[rng.uniform_int(4)];
    const ICLItem item =
        make_item(lex, cond, combo, n_demos, rng.next_u64(), &eval_triples);
    const Rate target_rate = cond.demo_rate();
    const TrainLine line = make_icl_train_line(vocab, lex, item, target_rate);
    json extra;
    extra["kind"] = "icl";
    extra["condition"] = cond.label();
    extra["syntax_combo"] = combo.label();
    extra["n_demos"] = n_demos;
    extra["rate"] = rate_name(target_rate);
    extra["seed"] = item.seed;
    emit_line(line, extra);
  }

  // Raw unit streams; half of them repeat their sentence list twice, giving
  // the model in-sequence copying structure to learn from.
  for (int i = 0; i < spec.train_speech_only; ++i) {
    Rng rng(mix_seed(spec.seed, 0x20000000ULL + i));
    const int n_sents = 2 + static_cast<int>(rng.uniform_int(3));
    const Rate rate = std::array<Rate, 3>{Rate::core, Rate::fast,
                                          Rate::slow}[rng.uniform_int(3)];
    const bool repeat = rng.uniform_int(2) == 0;
    std::vector<int> units;
    for (int s = 0; s < n_sents; ++s) {
      const auto u = render_speech(lex, sample_filler(rng), rate);
      units.insert(units.end(), u.begin(), u.end());
    }
    if (repeat) {
      const auto copy = units;
      units.insert(units.end(), copy.begin(), copy.end());
    }
    TrainLine line;
    line.kind = "speech_only";
    for (int u : units) line.tokens.push_back(vocab.unit_token(u));
    line.loss_mask.assign(line.tokens.size(), 1);
    line.loss_mask[0] = 0;
    json extra;
    extra["kind"] = "speech_only";
    extra["rate"] = rate_name(rate);
    extra["repeat"] = repeat;
    emit_line(line, extra);
  }

  for (int i = 0; i < spec.train_text_only; ++i) {
    Rng rng(mix_seed(spec.seed, 0x30000000ULL + i));
    const int n_sents = 2 + static_cast<int>(rng.uniform_int(4));
    const bool repeat = rng.uniform_int(2) == 0;
    std::vector<int> words;
    for (int s = 0; s < n_sents; ++s) {
      const auto w = sample_filler(rng).word_indices(lex);
      words.insert(words.end(), w.begin(), w.end());
    }
    if (repeat) {
      const auto copy = words;
      words.insert(words.end(), copy.begin(), copy.end());
    }
    TrainLine line;
    line.kind = "text_only";
    for (int w : words) line.tokens.push_back(vocab.word_token(w));
    line.loss_mask.assign(line.tokens.size(), 1);
    line.loss_mask[0] = 0;
    json extra;
    extra["kind"] = "text_only";
    extra["repeat"] = repeat;
    emit_line(line, extra);
  }

  corpus.train_jsonl = train_out.str();
  return corpus;
}

std::vector<TrainLine> load_train_lines(const std::string& jsonl) {
  std::vector<TrainLine> lines;
  std::istringstream in(jsonl);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::exception& e) {
      throw DataError(std::string("corpus parse error: ") + e.what());
    }
    TrainLine line;
    line.kind = j.at("kind").get<std::string>();
    line.tokens = j.at("tokens").get<std::vector<int>>();
    line.loss_mask = j.at("loss_mask").get<std::vector<std::uint8_t>>();
    if (line.tokens.size() != line.loss_mask.size()) {
      throw DataError("corpus line: token/mask length mismatch");
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<EvalItem> load_eval_items(const std::string& jsonl) {
  std::vector<EvalItem> items;
  std::istringstream in(jsonl);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::exception& e) {
      throw DataError(std::string("eval parse error: ") + e.what());
    }
    EvalItem item;
    item.id = j.at("id").get<std::string>();
    item.condition = Condition::from_label(j.at("condition").get<std::string>());
    item.combo = SyntaxCombo::from_label(j.at("syntax_combo").get<std::string>());
    item.n_demos_list = j.at("n_demos_list").get<std::vector<int>>();
    item.seed = j.at("seed").get<std::uint64_t>();
    item.target = sentence_from_json(j.at("target"));
    for (const auto& dj : j.at("demos")) {
      EvalDemo demo;
      demo.sentence = sentence_from_json(dj);
      demo.rate = rate_from_name(dj.at("rate").get<std::string>());
      demo.units = dj.at("units").get<std::vector<int>>();
      item.demos.push_back(std::move(demo));
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace sulm
