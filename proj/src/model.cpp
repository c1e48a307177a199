#include "sulm/model.hpp"

#include <algorithm>
#include <numeric>

namespace sulm {

namespace {

// Incremental decoding state: cached keys/values per layer.
struct KvCache {
  std::vector<Mat<float>> k;  // per layer, capacity x d_model
  std::vector<Mat<float>> v;
  Eigen::Index len = 0;

  KvCache(const ModelConfig& cfg, Eigen::Index capacity) {
    k.assign(static_cast<std::size_t>(cfg.n_layers),
             Mat<float>(capacity, cfg.d_model));
    v.assign(static_cast<std::size_t>(cfg.n_layers),
             Mat<float>(capacity, cfg.d_model));
  }
};

// Runs `chunk` through the model starting at cache position cache.len,
// returning the logits of the last chunk position.
Eigen::RowVectorXf forward_cached(const Parameters<float>& params,
                                  std::span<const int> chunk,
                                  const std::vector<char>& ablated,
                                  KvCache& cache) {
  const ModelConfig& cfg = params.config;
  const Eigen::Index m = static_cast<Eigen::Index>(chunk.size());
  const Eigen::Index start = cache.len;
  const int hd = cfg.head_dim();
  const float scale = 1.0f / std::sqrt(static_cast<float>(hd));

  Mat<float> x(m, cfg.d_model);
  for (Eigen::Index i = 0; i < m; ++i) {
    x.row(i) = params.tok_emb.row(chunk[static_cast<std::size_t>(i)]) +
               params.pos_emb.row(start + i);
  }

  for (int l = 0; l < cfg.n_layers; ++l) {
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    const Mat<float> xn = detail::rmsnorm<float>(x, layer.attn_norm_gain, nullptr);
    const Mat<float> q = xn * layer.wq;
    cache.k[static_cast<std::size_t>(l)].middleRows(start, m) = xn * layer.wk;
    cache.v[static_cast<std::size_t>(l)].middleRows(start, m) = xn * layer.wv;
    const auto k_all = cache.k[static_cast<std::size_t>(l)].topRows(start + m);
    const auto v_all = cache.v[static_cast<std::size_t>(l)].topRows(start + m);

    Mat<float> ctx = Mat<float>::Zero(m, cfg.d_model);
    for (int h = 0; h < cfg.n_heads; ++h) {
      const bool off =
          !ablated.empty() &&
          ablated[static_cast<std::size_t>(l * cfg.n_heads + h)] != 0;
      if (off) continue;
      const auto qh = q.middleCols(h * hd, hd);
      const auto kh = k_all.middleCols(h * hd, hd);
      const auto vh = v_all.middleCols(h * hd, hd);
      Mat<float> scores = qh * kh.transpose() * scale;  // m x (start+m)
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index visible = start + i + 1;
        const float mx = scores.row(i).head(visible).maxCoeff();
        Eigen::ArrayXf e = (scores.row(i).head(visible).array() - mx).exp();
        const float denom = e.sum();
        ctx.middleCols(h * hd, hd).row(i) =
            (e / denom).matrix() * vh.topRows(visible);
      }
    }
    x += ctx * layer.wo;
    x += ff_block(cfg, layer, x);
  }
  cache.len = start + m;

  const Mat<float> xf =
      detail::rmsnorm<float>(x, params.final_norm_gain, nullptr);
  return xf.row(m - 1) * params.unembed;
}

bool ends_with(const std::vector<int>& seq, const std::vector<int>& suffix) {
  if (suffix.empty() || seq.size() < suffix.size()) return false;
  return std::equal(suffix.begin(), suffix.end(),
                    seq.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

}  // namespace

std::vector<int> generate(const Parameters<float>& params,
                          std::span<const int> prompt,
                          const GenerateOptions& options) {
  const ModelConfig& cfg = params.config;
  cfg.validate();
  if (prompt.empty()) throw DataError("empty prompt");
  if (static_cast<int>(prompt.size()) + 1 > cfg.max_context) {
    throw DataError("prompt leaves no room for generation within max_context");
  }
  for (int id : prompt) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw DataError("token id out of range: " + std::to_string(id));
    }
  }
  if (options.max_new_tokens < 0) throw DataError("negative max_new_tokens");

  const std::vector<char> ablated = detail::ablation_mask(cfg, options.ablate);
  const int budget =
      std::min<int>(options.max_new_tokens,
                    cfg.max_context - static_cast<int>(prompt.size()));

  std::vector<int> out;
  if (budget == 0) return out;

  KvCache cache(cfg, static_cast<Eigen::Index>(prompt.size()) + budget);
  Eigen::RowVectorXf logits = forward_cached(params, prompt, ablated, cache);

  for (int t = 0; t < budget; ++t) {
    Eigen::Index best = 0;
    logits.maxCoeff(&best);  // first maximum wins: deterministic greedy
    const int token = static_cast<int>(best);
    out.push_back(token);
    if (ends_with(out, options.stop_sequence)) break;
    if (t + 1 == budget) break;
    const int chunk[1] = {token};
    logits = forward_cached(params, std::span<const int>(chunk, 1), ablated, cache);
  }
  return out;
}

TrainResult train(const ModelConfig& config,
                  const std::vector<TrainSequence>& sequences,
                  const TrainOptions& options) {
  config.validate();
  if (sequences.empty()) throw DataError("empty training corpus");
  for (const auto& seq : sequences) {
    if (static_cast<int>(seq.tokens.size()) > config.max_context) {
      throw DataError("training sequence exceeds max_context");
    }
  }
  if (options.steps < 0 || options.batch_size < 1) {
    throw DataError("bad training hyperparameters");
  }

  TrainResult result;
  result.params = init_parameters<float>(config);

  // Adam moments, one buffer per tensor in declaration order.
  std::vector<Mat<float>> m_buf, v_buf;
  result.params.for_each_tensor([&](const std::string&, Mat<float>& t) {
    m_buf.push_back(Mat<float>::Zero(t.rows(), t.cols()));
    v_buf.push_back(Mat<float>::Zero(t.rows(), t.cols()));
  });

  Rng rng(mix_seed(options.seed ^ config.seed, 0xad0a));
  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t cursor = 0;

  auto next_sequence = [&]() -> const TrainSequence& {
    if (cursor == order.size()) {
      rng.shuffle(order);
      cursor = 0;
    }
    return sequences[order[cursor++]];
  };

  for (int step = 1; step <= options.steps; ++step) {
    Parameters<float> grads = result.params.zeros_like();
    double batch_loss = 0;
    for (int b = 0; b < options.batch_size; ++b) {
      const TrainSequence& seq = next_sequence();
      LossResult<float> lr = loss_and_grads<float>(
          result.params, seq.tokens, seq.loss_mask);
      batch_loss += static_cast<double>(lr.loss);
      const float w = 1.0f / static_cast<float>(options.batch_size);
      // Walk both parameter trees in lockstep.
      std::vector<Mat<float>*> dst;
      grads.for_each_tensor(
          [&](const std::string&, Mat<float>& t) { dst.push_back(&t); });
      std::size_t i = 0;
      lr.grads.for_each_tensor([&](const std::string&, Mat<float>& t) {
        *dst[i++] += t * w;
      });
    }
    batch_loss /= options.batch_size;
    if (!std::isfinite(batch_loss)) {
      throw NumericError("training diverged: non-finite loss at step " +
                         std::to_string(step));
    }

    // Global gradient-norm clip.
    double norm_sq = 0;
    grads.for_each_tensor([&](const std::string&, Mat<float>& t) {
      norm_sq += static_cast<double>(t.squaredNorm());
    });
    const double norm = std::sqrt(norm_sq);
    if (options.grad_clip > 0 && norm > options.grad_clip) {
      const float s = static_cast<float>(options.grad_clip / norm);
      grads.for_each_tensor(
          [&](const std::string&, Mat<float>& t) { t *= s; });
    }

    // Adam update with bias correction.
    const float bc1 =
        1.0f - std::pow(options.beta1, static_cast<float>(step));
    const float bc2 =
        1.0f - std::pow(options.beta2, static_cast<float>(step));
    std::vector<Mat<float>*> gs;
    grads.for_each_tensor(
        [&](const std::string&, Mat<float>& t) { gs.push_back(&t); });
    std::size_t ti = 0;
    result.params.for_each_tensor([&](const std::string&, Mat<float>& p) {
      Mat<float>& gm = *gs[ti];
      Mat<float>& m = m_buf[ti];
      Mat<float>& v = v_buf[ti];
      m = options.beta1 * m + (1.0f - options.beta1) * gm;
      v = options.beta2 * v.array().matrix() +
          (1.0f - options.beta2) * gm.array().square().matrix();
      const auto m_hat = m.array() / bc1;
      const auto v_hat = v.array() / bc2;
      p.array() -= options.lr * m_hat / (v_hat.sqrt() + options.adam_eps);
      ++ti;
    });

    result.loss_curve.emplace_back(step, batch_loss);
    if (options.on_step) options.on_step(step, batch_loss);
  }

  result.step = options.steps;
  result.rng_state = rng.serialize();
  result.params.check_finite();
  return result;
}

}  // namespace sulm
