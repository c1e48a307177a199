#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "sulm/corpus.hpp"

namespace sulm {

// Transcript cleanup: lowercase, strip punctuation, drop "stop" tokens.
std::vector<std::string> cleanup(const std::vector<std::string>& words);

// Word Error Rate: (substitutions + deletions + insertions) / |reference|
// under minimum word-level edit distance with uniform costs.
double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis);

// Fraction of the reference's content-word lemmas found in the hypothesis
// (count-aware multiset matching; verb forms match through their lemma).
double content_word_recall(const Lexicon& lex, const Sentence& reference,
                           const std::vector<std::string>& hypothesis);

struct EvalRecord {
  std::string id;
  std::string condition;
  int n_demos = 0;
  std::string syntax_combo;
  double wer = 0;
  double recall = 0;
  double output_rate = std::numeric_limits<double>::quiet_NaN();
  bool stop_detected = false;
  std::uint64_t seed = 0;
};

std::string eval_records_csv(const std::vector<EvalRecord>& records);
std::vector<EvalRecord> parse_eval_records_csv(const std::string& csv);

struct GroupStat {
  double mean = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  int n = 0;
};

// Mean with a seeded 95% bootstrap percentile interval (1000 resamples).
GroupStat bootstrap_mean(const std::vector<double>& values, std::uint64_t seed);

// Group-by aggregation over records. Keys are drawn from {condition,
// n_demos, syntax_combo}; metrics from {wer, recall, rate}.
struct AggregateRow {
  std::string condition;
  int n_demos = -1;           // -1 when not grouped by demo count
  std::string syntax_combo;   // empty when not grouped
  std::string metric;
  GroupStat stat;
};

std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<std::string>& group_keys,
                                    std::uint64_t seed);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);

}  // namespace sulm
