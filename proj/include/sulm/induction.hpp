#pragma once

#include <map>
#include <string>
#include <vector>

#include "sulm/lexicon.hpp"
#include "sulm/model.hpp"
#include "sulm/prompt.hpp"

namespace sulm {

// Attention plus the token/modality information the scorers read.
struct SequenceAttention {
  std::vector<int> tokens;
  std::vector<Modality> modality;
  AttentionRecord attention;
};

struct HeadModalityScore {
  double prefix_score = 0;      // mean over contributing sequences
  double nonprefix_score = 0;
  double prefix_raw_sum = 0;    // pre-normalization attention totals
  double nonprefix_raw_sum = 0;
  std::int64_t count = 0;       // qualifying tokens across sequences
  int sequences = 0;            // sequences with at least one qualifying token
};

struct HeadScoreTable {
  int n_layers = 0;
  int n_heads = 0;
  // Indexed layer * n_heads + head; [0] = speech bucket, [1] = text bucket.
  std::vector<std::array<HeadModalityScore, 2>> entries;

  const HeadModalityScore& at(int layer, int head, Modality m) const {
    return entries.at(static_cast<std::size_t>(layer * n_heads + head))
        .at(m == Modality::speech ? 0 : 1);
  }
  HeadModalityScore& at(int layer, int head, Modality m) {
    return entries.at(static_cast<std::size_t>(layer * n_heads + head))
        .at(m == Modality::speech ? 0 : 1);
  }
};

// Shared scoring core. For each token with an earlier occurrence (most
// recent j < i), the attention to position j+1 feeds the prefix sum and the
// attention to a seeded random earlier position r (r != j+1) feeds the
// non-prefix sum, bucketed by the query token's modality. Per-sequence sums
// are normalized by the sequence's qualifying-token count, then averaged
// over contributing sequences. Structural tokens are skipped.
HeadScoreTable score_sequences(const std::vector<SequenceAttention>& sequences,
                               std::uint64_t nonprefix_seed);

enum class ModalityMix { text_only, speech_only, interleaved };

const char* modality_mix_name(ModalityMix m);

struct RandomScoreOptions {
  ModalityMix mix = ModalityMix::interleaved;
  int sequence_length = 50;  // unique tokens per repeat
  int repeats = 4;
  int n_sequences = 25;
  double freq_exclusion = 0.04;  // top/bottom frequency quantile dropped
  std::uint64_t seed = 0;
};

// Repeated-random-token protocol: L unique mid-frequency tokens repeated
// `repeats` times; every token from the second repeat onward qualifies.
// token_frequencies holds corpus counts per token id.
HeadScoreTable score_random_sequences(
    const Parameters<float>& params, const Vocabulary& vocab,
    const std::vector<std::int64_t>& token_frequencies,
    const RandomScoreOptions& options);

// Builds one repeated random sequence (exposed for tests).
std::vector<int> make_random_sequence(
    const Vocabulary& vocab, const std::vector<std::int64_t>& token_frequencies,
    const RandomScoreOptions& options, std::uint64_t sequence_seed);

// Scores well-formed ICL prompts through the model.
HeadScoreTable score_icl_prompts(const Parameters<float>& params,
                                 const Vocabulary& vocab,
                                 const std::vector<ICLPrompt>& prompts,
                                 std::uint64_t nonprefix_seed);

struct HeadGroups {
  std::vector<HeadRef> speech_prefix_top;
  std::vector<HeadRef> text_prefix_top;
  std::vector<HeadRef> speech_prefix_unique;
  std::vector<HeadRef> text_prefix_unique;
  std::vector<HeadRef> non_prefix_top;
  std::vector<HeadRef> random;
  int k = 0;
  std::uint64_t seed = 0;

  const std::vector<HeadRef>& by_name(const std::string& name) const;
  static const std::vector<std::string>& names();

  std::string to_json() const;
  static HeadGroups from_json(const std::string& text);
};

int default_group_size(int total_heads);  // ~5% of heads, at least 2

// Six head groups per the scoring table. Ties break on (layer, head).
// The non-prefix ranking sums the two modality non-prefix scores. The random
// group is drawn from heads outside every other group; throws when k leaves
// too few heads for it.
HeadGroups select_head_groups(const HeadScoreTable& table, int k,
                              std::uint64_t seed);

struct GroupAttentionRow {
  std::string group;
  std::string condition;
  std::string modality;  // "speech" or "text"
  std::string kind;      // "prefix" or "nonprefix"
  double sum = 0;        // pre-normalization attention total
};

// Raw per-group attention sums by condition. `groups_to_report` must list
// non-empty groups; an empty list or an empty group is an error.
std::vector<GroupAttentionRow> group_attention_report(
    const std::map<std::string, HeadScoreTable>& table_by_condition,
    const HeadGroups& groups, const std::vector<std::string>& groups_to_report);

std::string score_table_csv(const HeadScoreTable& table);
std::string heatmap_csv(const HeadScoreTable& table, Modality modality);
std::string group_attention_csv(const std::vector<GroupAttentionRow>& rows);

}  // namespace sulm
