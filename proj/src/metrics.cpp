#include "sulm/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sulm {

std::vector<std::string> cleanup(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    std::string clean;
    for (char c : w) {
      const unsigned char uc = static_cast<unsigned char>(c);
      if (std::isalnum(uc)) clean += static_cast<char>(std::tolower(uc));
    }
    if (clean.empty() || clean == "stop") continue;
    out.push_back(std::move(clean));
  }
  return out;
}

double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis) {
  if (reference.empty()) throw DataError("WER needs a non-empty reference");
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub =
          prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(n);
}

double content_word_recall(const Lexicon& lex, const Sentence& reference,
                           const std::vector<std::string>& hypothesis) {
  std::map<std::string, int> ref_lemmas;
  for (int wi : reference.word_indices(lex)) {
    const std::string lemma = lex.content_lemma(wi);
    if (!lemma.empty()) ++ref_lemmas[lemma];
  }
  int total = 0;
  for (const auto& [lemma, count] : ref_lemmas) total += count;
  if (total == 0) throw DataError("reference has no content words");

  std::map<std::string, int> hyp_lemmas;
  for (const auto& w : hypothesis) {
    const int wi = lex.word_index(w);
    if (wi < 0) continue;  // unknown words contribute nothing
    const std::string lemma = lex.content_lemma(wi);
    if (!lemma.empty()) ++hyp_lemmas[lemma];
  }

  int matched = 0;
  for (const auto& [lemma, count] : ref_lemmas) {
    const auto it = hyp_lemmas.find(lemma);
    if (it != hyp_lemmas.end()) matched += std::min(count, it->second);
  }
  return static_cast<double>(matched) / static_cast<double>(total);
}

namespace {
std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}
}  // namespace

std::string eval_records_csv(const std::vector<EvalRecord>& records) {
  std::ostringstream os;
  os << "id,condition,n_demos,syntax_combo,wer,recall,output_rate,"
        "stop_detected,seed\n";
  for (const auto& r : records) {
    os << r.id << "," << r.condition << "," << r.n_demos << ","
       << r.syntax_combo << "," << fmt_double(r.wer) << ","
       << fmt_double(r.recall) << "," << fmt_double(r.output_rate) << ","
       << (r.stop_detected ? 1 : 0) << "," << r.seed << "\n";
  }
  return os.str();
}

std::vector<EvalRecord> parse_eval_records_csv(const std::string& csv) {
  std::vector<EvalRecord> records;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 9) fields.emplace_back();
    EvalRecord r;
    r.id = fields[0];
    r.condition = fields[1];
    r.n_demos = std::stoi(fields[2]);
    r.syntax_combo = fields[3];
    r.wer = std::stod(fields[4]);
    r.recall = std::stod(fields[5]);
    r.output_rate = fields[6].empty()
                        ? std::numeric_limits<double>::quiet_NaN()
                        : std::stod(fields[6]);
    r.stop_detected = fields[7] == "1";
    r.seed = std::stoull(fields[8]);
    records.push_back(std::move(r));
  }
  return records;
}

GroupStat bootstrap_mean(const std::vector<double>& values, std::uint64_t seed) {
  if (values.empty()) throw DataError("empty group");
  GroupStat stat;
  stat.n = static_cast<int>(values.size());
  double sum = 0;
  for (double v : values) sum += v;
  stat.mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) {
    stat.ci_lo = stat.ci_hi = stat.mean;
    return stat;
  }

  constexpr int kResamples = 1000;
  Rng rng(mix_seed(seed, 0xb007));
  std::vector<double> means(kResamples);
  for (int r = 0; r < kResamples; ++r) {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      s += values[rng.uniform_int(values.size())];
    }
    means[static_cast<std::size_t>(r)] = s / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  stat.ci_lo = means[static_cast<std::size_t>(0.025 * kResamples)];
  stat.ci_hi = means[static_cast<std::size_t>(0.975 * kResamples) - 1];
  return stat;
}

std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<std::string>& group_keys,
                                    std::uint64_t seed) {
  const bool by_condition =
      std::find(group_keys.begin(), group_keys.end(), "condition") !=
      group_keys.end();
  const bool by_demos =
      std::find(group_keys.begin(), group_keys.end(), "n_demos") !=
      group_keys.end();
  const bool by_syntax =
      std::find(group_keys.begin(), group_keys.end(), "syntax_combo") !=
      group_keys.end();

  struct Key {
    std::string condition;
    int n_demos;
    std::string syntax;
    bool operator<(const Key& o) const {
      return std::tie(condition, n_demos, syntax) <
             std::tie(o.condition, o.n_demos, o.syntax);
    }
  };
  std::map<Key, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) {
    Key k{by_condition ? r.condition : "", by_demos ? r.n_demos : -1,
          by_syntax ? r.syntax_combo : ""};
    groups[k].push_back(&r);
  }
  if (groups.empty()) throw DataError("empty group");

  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    for (const std::string metric : {"wer", "recall", "rate"}) {
      std::vector<double> values;
      for (const auto* r : members) {
        double v = metric == "wer"      ? r->wer
                   : metric == "recall" ? r->recall
                                        : r->output_rate;
        if (!std::isnan(v)) values.push_back(v);
      }
      if (values.empty()) continue;
      AggregateRow row;
      row.condition = key.condition;
      row.n_demos = key.n_demos;
      row.syntax_combo = key.syntax;
      row.metric = metric;
      row.stat = bootstrap_mean(
          values, mix_seed(seed, fnv1a64(key.condition + ":" + metric) +
                                     static_cast<std::uint64_t>(key.n_demos + 1) +
                                     fnv1a64(key.syntax)));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "condition,n_demos,syntax_combo,metric,mean,ci_lo,ci_hi,n\n";
  for (const auto& r : rows) {
    os << r.condition << ",";
    if (r.n_demos >= 0) os << r.n_demos;
    os << "," << r.syntax_combo << "," << r.metric << ","
       << fmt_double(r.stat.mean) << "," << fmt_double(r.stat.ci_lo) << ","
       << fmt_double(r.stat.ci_hi) << "," << r.stat.n << "\n";
  }
  return os.str();
}

}  // namespace sulm
