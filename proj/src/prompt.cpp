#include "sulm/prompt.hpp"

#include <map>
#include <sstream>

namespace sulm {

std::vector<int> build_block(const Vocabulary& vocab, const Lexicon& lex,
                             const Sentence& sentence, Rate rate) {
  std::vector<int> tokens;
  tokens.push_back(Vocabulary::kTextMark);
  for (int wi : sentence.word_indices(lex)) tokens.push_back(vocab.word_token(wi));
  tokens.push_back(Vocabulary::kTextStop);
  tokens.push_back(Vocabulary::kSpeechMark);
  for (int u : render_speech(lex, sentence, rate)) {
    tokens.push_back(vocab.unit_token(u));
  }
  for (int u : lex.stop_units()) tokens.push_back(vocab.unit_token(u));
  return tokens;
}

ICLPrompt build_prompt(const Vocabulary& vocab, const Lexicon& lex,
                       const ICLItem& item) {
  if (item.demos.size() != item.demo_rates.size()) {
    throw DataError("demo/rate count mismatch");
  }
  ICLPrompt prompt;
  for (std::size_t d = 0; d < item.demos.size(); ++d) {
    const auto block =
        build_block(vocab, lex, item.demos[d], item.demo_rates[d]);
    const int begin = static_cast<int>(prompt.tokens.size());
    prompt.tokens.insert(prompt.tokens.end(), block.begin(), block.end());
    prompt.blocks.emplace_back(begin, static_cast<int>(prompt.tokens.size()));
  }

  // Open target block: text then the SPEECH marker, the generation point.
  const int begin = static_cast<int>(prompt.tokens.size());
  prompt.tokens.push_back(Vocabulary::kTextMark);
  const int text_begin = static_cast<int>(prompt.tokens.size());
  for (int wi : item.target.word_indices(lex)) {
    prompt.tokens.push_back(vocab.word_token(wi));
  }
  prompt.target_text_span = {text_begin, static_cast<int>(prompt.tokens.size())};
  prompt.tokens.push_back(Vocabulary::kTextStop);
  prompt.tokens.push_back(Vocabulary::kSpeechMark);
  prompt.blocks.emplace_back(begin, static_cast<int>(prompt.tokens.size()));

  prompt.modality.reserve(prompt.tokens.size());
  for (int tok : prompt.tokens) prompt.modality.push_back(vocab.modality(tok));
  return prompt;
}

namespace {

struct RenderingMaps {
  std::map<std::vector<int>, int> core;  // rendering -> word index
  std::map<std::vector<int>, int> slow;
  std::map<std::vector<int>, int> fast;
  int core_len = 4;
};

RenderingMaps build_maps(const Lexicon& lex) {
  RenderingMaps maps;
  maps.core_len = lex.units_per_word;
  for (std::size_t wi = 0; wi < lex.words.size(); ++wi) {
    const std::vector<int> idx = {static_cast<int>(wi)};
    maps.core[render_speech(lex, idx, Rate::core)] = static_cast<int>(wi);
    maps.slow[render_speech(lex, idx, Rate::slow)] = static_cast<int>(wi);
    maps.fast[render_speech(lex, idx, Rate::fast)] = static_cast<int>(wi);
  }
  return maps;
}

int match_at(const std::map<std::vector<int>, int>& map,
             const std::vector<int>& units, std::size_t pos, std::size_t len) {
  if (pos + len > units.size()) return -1;
  const std::vector<int> key(units.begin() + static_cast<std::ptrdiff_t>(pos),
                             units.begin() + static_cast<std::ptrdiff_t>(pos + len));
  const auto it = map.find(key);
  return it == map.end() ? -1 : it->second;
}

}  // namespace

DecodedOutput decode_output(const std::vector<int>& units, const Lexicon& lex) {
  DecodedOutput out;
  std::vector<int> stream = units;

  const auto stop = lex.stop_units();
  if (stream.size() >= 2 && stream[stream.size() - 2] == stop[0] &&
      stream[stream.size() - 1] == stop[1]) {
    out.stop_detected = true;
    stream.resize(stream.size() - 2);
  }

  const RenderingMaps maps = build_maps(lex);
  const std::size_t core_len = static_cast<std::size_t>(maps.core_len);

  std::size_t pos = 0;
  bool in_unmatched_run = false;
  while (pos < stream.size()) {
    int wi = match_at(maps.core, stream, pos, core_len);
    std::size_t advance = core_len;
    if (wi < 0) {
      wi = match_at(maps.slow, stream, pos, core_len * 2);
      advance = core_len * 2;
    }
    if (wi < 0) {
      wi = match_at(maps.fast, stream, pos, core_len / 2);
      advance = core_len / 2;
    }
    if (wi >= 0) {
      out.words.push_back(lex.surface(wi));
      pos += advance;
      in_unmatched_run = false;
    } else {
      if (!in_unmatched_run) {
        ++out.unmatched_segments;
        in_unmatched_run = true;
      }
      ++pos;
    }
  }
  return out;
}

DecodedOutput decode_generated(const Vocabulary& vocab,
                               const std::vector<int>& generated,
                               const Lexicon& lex) {
  std::vector<int> units;
  units.reserve(generated.size());
  for (int tok : generated) {
    const int u = vocab.unit_of_token(tok);
    // Non-unit tokens cannot belong to any rendering; map them to an id
    // outside the unit alphabet so they break matches and count as unmatched.
    units.push_back(u >= 0 ? u : -1);
  }
  return decode_output(units, lex);
}

double measure_output_rate(std::size_t unit_count, std::size_t word_count) {
  if (word_count == 0) throw DataError("no decoded words; rate undefined");
  return static_cast<double>(unit_count) / static_cast<double>(word_count);
}

std::string dump_prompt(const Vocabulary& vocab, const ICLPrompt& prompt) {
  std::ostringstream os;
  for (std::size_t i = 0; i < prompt.tokens.size(); ++i) {
    const int tok = prompt.tokens[i];
    if (tok == Vocabulary::kTextMark) {
      if (i > 0) os << "\n";
      os << "[TEXT]";
    } else if (tok == Vocabulary::kSpeechMark) {
      os << "\n[SPEECH]";
    } else {
      os << " " << vocab.describe(tok);
    }
  }
  os << "\n";
  return os.str();
}

}  // namespace sulm
