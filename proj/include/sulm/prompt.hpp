#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sulm/corpus.hpp"
#include "sulm/lexicon.hpp"

namespace sulm {

// Serialized ICL prompt: demonstration blocks followed by the open target
// block, which ends right after its SPEECH marker (the generation point).
// Each block is TEXT_MARK, words, TEXT_STOP, SPEECH_MARK, units, stop units.
struct ICLPrompt {
  std::vector<int> tokens;
  std::vector<Modality> modality;              // one entry per token
  std::vector<std::pair<int, int>> blocks;     // [begin, end) per block
  std::pair<int, int> target_text_span{0, 0};  // word positions of the target
};

ICLPrompt build_prompt(const Vocabulary& vocab, const Lexicon& lex,
                       const ICLItem& item);

// One closed text+speech block (used for training episodes).
std::vector<int> build_block(const Vocabulary& vocab, const Lexicon& lex,
                             const Sentence& sentence, Rate rate);

struct DecodedOutput {
  std::vector<std::string> words;
  int unmatched_segments = 0;
  bool stop_detected = false;
};

// Oracle decoder: strips a trailing stop marker, then greedily segments the
// unit stream against the lexicon's renderings, trying the rate hypotheses
// in the order core, slow, fast at each position. Units that match nothing
// are consumed one at a time and counted as unmatched runs.
DecodedOutput decode_output(const std::vector<int>& units, const Lexicon& lex);

// Variant taking generated token ids (units are extracted, non-unit tokens
// break matching like unknown units).
DecodedOutput decode_generated(const Vocabulary& vocab,
                               const std::vector<int>& generated,
                               const Lexicon& lex);

// Units per decoded word; throws DataError when no words were decoded.
double measure_output_rate(std::size_t unit_count, std::size_t word_count);

// Debug listing in the block-per-line style of the prompt format.
std::string dump_prompt(const Vocabulary& vocab, const ICLPrompt& prompt);

}  // namespace sulm
