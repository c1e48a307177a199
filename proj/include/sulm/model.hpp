#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sulm/common.hpp"

namespace sulm {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelConfig {
  int n_layers = 4;
  int n_heads = 4;
  int d_model = 128;
  int d_ff = 512;
  int max_context = 512;
  int vocab_size = 0;
  std::uint64_t seed = 0;

  int head_dim() const { return d_model / n_heads; }

  void validate() const {
    if (n_layers < 1 || n_heads < 1 || d_model < 1 || d_ff < 1 ||
        max_context < 1 || vocab_size < 1) {
      throw DataError("model config: all counts must be >= 1");
    }
    if (d_model % n_heads != 0) {
      throw DataError("model config: d_model must be divisible by n_heads");
    }
  }

  bool operator==(const ModelConfig&) const = default;
};

struct HeadRef {
  int layer = 0;
  int head = 0;
  auto operator<=>(const HeadRef&) const = default;
};

// Row-stochastic causal attention, one matrix per (layer, head).
struct AttentionRecord {
  int n_layers = 0;
  int n_heads = 0;
  std::vector<Mat<double>> matrices;  // layer * n_heads + head

  const Mat<double>& at(int layer, int head) const {
    return matrices.at(static_cast<std::size_t>(layer * n_heads + head));
  }
  Mat<double>& at(int layer, int head) {
    return matrices.at(static_cast<std::size_t>(layer * n_heads + head));
  }
};

template <typename S>
struct LayerParams {
  Mat<S> attn_norm_gain;  // 1 x d_model
  Mat<S> wq, wk, wv, wo;  // d_model x d_model
  Mat<S> ff_norm_gain;    // 1 x d_model
  Mat<S> w1;              // d_model x d_ff
  Mat<S> w2;              // d_ff x d_model
};

template <typename S>
struct Parameters {
  ModelConfig config;
  Mat<S> tok_emb;  // vocab_size x d_model
  Mat<S> pos_emb;  // max_context x d_model
  std::vector<LayerParams<S>> layers;
  Mat<S> final_norm_gain;  // 1 x d_model
  Mat<S> unembed;          // d_model x vocab_size

  template <typename F>
  void for_each_tensor(F&& f) {
    f("tok_emb", tok_emb);
    f("pos_emb", pos_emb);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string p = "layers." + std::to_string(i) + ".";
      f(p + "attn_norm.gain", layers[i].attn_norm_gain);
      f(p + "attn.wq", layers[i].wq);
      f(p + "attn.wk", layers[i].wk);
      f(p + "attn.wv", layers[i].wv);
      f(p + "attn.wo", layers[i].wo);
      f(p + "ff_norm.gain", layers[i].ff_norm_gain);
      f(p + "ff.w1", layers[i].w1);
      f(p + "ff.w2", layers[i].w2);
    }
    f("final_norm.gain", final_norm_gain);
    f("unembed", unembed);
  }

  template <typename F>
  void for_each_tensor(F&& f) const {
    const_cast<Parameters<S>*>(this)->for_each_tensor(
        [&](const std::string& name, Mat<S>& m) {
          f(name, static_cast<const Mat<S>&>(m));
        });
  }

  Parameters<S> zeros_like() const {
    Parameters<S> z;
    z.config = config;
    z.tok_emb = Mat<S>::Zero(tok_emb.rows(), tok_emb.cols());
    z.pos_emb = Mat<S>::Zero(pos_emb.rows(), pos_emb.cols());
    for (const auto& l : layers) {
      LayerParams<S> zl;
      zl.attn_norm_gain = Mat<S>::Zero(1, l.attn_norm_gain.cols());
      zl.wq = Mat<S>::Zero(l.wq.rows(), l.wq.cols());
      zl.wk = Mat<S>::Zero(l.wk.rows(), l.wk.cols());
      zl.wv = Mat<S>::Zero(l.wv.rows(), l.wv.cols());
      zl.wo = Mat<S>::Zero(l.wo.rows(), l.wo.cols());
      zl.ff_norm_gain = Mat<S>::Zero(1, l.ff_norm_gain.cols());
      zl.w1 = Mat<S>::Zero(l.w1.rows(), l.w1.cols());
      zl.w2 = Mat<S>::Zero(l.w2.rows(), l.w2.cols());
      z.layers.push_back(std::move(zl));
    }
    z.final_norm_gain = Mat<S>::Zero(1, final_norm_gain.cols());
    z.unembed = Mat<S>::Zero(unembed.rows(), unembed.cols());
    return z;
  }

  void check_finite() const {
    bool ok = true;
    for_each_tensor([&](const std::string&, const Mat<S>& m) {
      if (!m.allFinite()) ok = false;
    });
    if (!ok) throw NumericError("parameters contain non-finite values");
  }

  template <typename T>
  Parameters<T> cast() const {
    Parameters<T> out;
    out.config = config;
    out.tok_emb = tok_emb.template cast<T>();
    out.pos_emb = pos_emb.template cast<T>();
    for (const auto& l : layers) {
      LayerParams<T> ol;
      ol.attn_norm_gain = l.attn_norm_gain.template cast<T>();
      ol.wq = l.wq.template cast<T>();
      ol.wk = l.wk.template cast<T>();
      ol.wv = l.wv.template cast<T>();
      ol.wo = l.wo.template cast<T>();
      ol.ff_norm_gain = l.ff_norm_gain.template cast<T>();
      ol.w1 = l.w1.template cast<T>();
      ol.w2 = l.w2.template cast<T>();
      out.layers.push_back(std::move(ol));
    }
    out.final_norm_gain = final_norm_gain.template cast<T>();
    out.unembed = unembed.template cast<T>();
    return out;
  }
};

namespace detail {

constexpr double kNormEps = 1e-5;

template <typename S>
Mat<S> random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double std_dev) {
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = static_cast<S>(rng.normal() * std_dev);
    }
  }
  return m;
}

template <typename S>
S gelu(S x) {
  const S c = static_cast<S>(0.7978845608028654);  // sqrt(2/pi)
  const S x3 = static_cast<S>(0.044715) * x * x * x;
  return static_cast<S>(0.5) * x * (static_cast<S>(1) + std::tanh(c * (x + x3)));
}

template <typename S>
S gelu_grad(S x) {
  const S c = static_cast<S>(0.7978845608028654);
  const S a = static_cast<S>(0.044715);
  const S t = std::tanh(c * (x + a * x * x * x));
  const S sech2 = static_cast<S>(1) - t * t;
  return static_cast<S>(0.5) * (static_cast<S>(1) + t) +
         static_cast<S>(0.5) * x * sech2 * c *
             (static_cast<S>(1) + static_cast<S>(3) * a * x * x);
}

// y = x .* gain / rms(x); returns per-row 1/rms when inv_rms is given.
template <typename S>
Mat<S> rmsnorm(const Mat<S>& x, const Mat<S>& gain, std::vector<S>* inv_rms) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Mat<S> y(n, d);
  if (inv_rms) inv_rms->resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const S ms = x.row(i).squaredNorm() / static_cast<S>(d);
    const S inv = static_cast<S>(1) / std::sqrt(ms + static_cast<S>(kNormEps));
    y.row(i) = x.row(i).cwiseProduct(gain.row(0)) * inv;
    if (inv_rms) (*inv_rms)[static_cast<std::size_t>(i)] = inv;
  }
  return y;
}

template <typename S>
Mat<S> rmsnorm_backward(const Mat<S>& dy, const Mat<S>& x, const Mat<S>& gain,
                        const std::vector<S>& inv_rms, Mat<S>& dgain) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Mat<S> dx(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const S inv = inv_rms[static_cast<std::size_t>(i)];
    dgain.row(0) += dy.row(i).cwiseProduct(x.row(i)) * inv;
    const S s = dy.row(i).cwiseProduct(gain.row(0)).cwiseProduct(x.row(i)).sum();
    dx.row(i) = dy.row(i).cwiseProduct(gain.row(0)) * inv -
                x.row(i) * (inv * inv * inv * s / static_cast<S>(d));
  }
  return dx;
}

// Dense (layer, head) lookup for ablated heads; validates ranges.
inline std::vector<char> ablation_mask(const ModelConfig& cfg,
                                       std::span<const HeadRef> refs) {
  std::vector<char> mask(
      static_cast<std::size_t>(cfg.n_layers) * cfg.n_heads, 0);
  for (const auto& r : refs) {
    if (r.layer < 0 || r.layer >= cfg.n_layers || r.head < 0 ||
        r.head >= cfg.n_heads) {
      throw DataError("head reference out of range: layer " +
                      std::to_string(r.layer) + " head " +
                      std::to_string(r.head));
    }
    mask[static_cast<std::size_t>(r.layer * cfg.n_heads + r.head)] = 1;
  }
  return mask;
}

}  // namespace detail

template <typename S>
Parameters<S> init_parameters(const ModelConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, 0x9a9a));
  const double base = 0.02;
  const double resid = base / std::sqrt(2.0 * config.n_layers);
  Parameters<S> p;
  p.config = config;
  p.tok_emb = detail::random_matrix<S>(rng, config.vocab_size, config.d_model, base);
  p.pos_emb = detail::random_matrix<S>(rng, config.max_context, config.d_model, base);
  for (int l = 0; l < config.n_layers; ++l) {
    LayerParams<S> lp;
    lp.attn_norm_gain = Mat<S>::Ones(1, config.d_model);
    lp.wq = detail::random_matrix<S>(rng, config.d_model, config.d_model, base);
    lp.wk = detail::random_matrix<S>(rng, config.d_model, config.d_model, base);
    lp.wv = detail::random_matrix<S>(rng, config.d_model, config.d_model, base);
    lp.wo = detail::random_matrix<S>(rng, config.d_model, config.d_model, resid);
    lp.ff_norm_gain = Mat<S>::Ones(1, config.d_model);
    lp.w1 = detail::random_matrix<S>(rng, config.d_model, config.d_ff, base);
    lp.w2 = detail::random_matrix<S>(rng, config.d_ff, config.d_model, resid);
    p.layers.push_back(std::move(lp));
  }
  p.final_norm_gain = Mat<S>::Ones(1, config.d_model);
  p.unembed = detail::random_matrix<S>(rng, config.d_model, config.vocab_size, base);
  return p;
}

struct ForwardOptions {
  bool record_attention = false;
  std::vector<HeadRef> ablate;
};

template <typename S>
struct ForwardResult {
  Mat<S> logits;  // len x vocab_size
  std::optional<AttentionRecord> attention;
};

// Attention sublayer (pre-norm included): returns the block output that is
// added to the residual stream. Exposed separately so per-head contributions
// can be probed directly.
template <typename S>
Mat<S> attention_block(const ModelConfig& cfg, const LayerParams<S>& layer,
                       const Mat<S>& x, const std::vector<char>& ablated,
                       int layer_index, AttentionRecord* record) {
  const Eigen::Index n = x.rows();
  const int hd = cfg.head_dim();
  const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(hd)));

  const Mat<S> xn = detail::rmsnorm<S>(x, layer.attn_norm_gain, nullptr);
  const Mat<S> q = xn * layer.wq;
  const Mat<S> k = xn * layer.wk;
  const Mat<S> v = xn * layer.wv;

  Mat<S> ctx = Mat<S>::Zero(n, cfg.d_model);
  for (int h = 0; h < cfg.n_heads; ++h) {
    const auto qh = q.middleCols(h * hd, hd);
    const auto kh = k.middleCols(h * hd, hd);
    const auto vh = v.middleCols(h * hd, hd);
    Mat<S> scores = qh * kh.transpose() * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        scores(i, j) = -std::numeric_limits<S>::infinity();
      }
    }
    Mat<S> attn(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const S m = scores.row(i).head(i + 1).maxCoeff();
      Eigen::Array<S, 1, Eigen::Dynamic> e =
          (scores.row(i).head(i + 1).array() - m).exp();
      const S denom = e.sum();
      attn.row(i).setZero();
      attn.row(i).head(i + 1) = (e / denom).matrix();
    }
    if (record) {
      record->at(layer_index, h) = attn.template cast<double>();
    }
    const bool off =
        !ablated.empty() &&
        ablated[static_cast<std::size_t>(layer_index * cfg.n_heads + h)] != 0;
    if (!off) {
      ctx.middleCols(h * hd, hd) = attn * vh;
    }
  }
  return ctx * layer.wo;
}

template <typename S>
Mat<S> ff_block(const ModelConfig&, const LayerParams<S>& layer, const Mat<S>& x) {
  const Mat<S> xn = detail::rmsnorm<S>(x, layer.ff_norm_gain, nullptr);
  Mat<S> h = xn * layer.w1;
  h = h.unaryExpr([](S v) { return detail::gelu(v); });
  return h * layer.w2;
}

template <typename S>
ForwardResult<S> forward(const Parameters<S>& params,
                         std::span<const int> tokens,
                         const ForwardOptions& options = {}) {
  const ModelConfig& cfg = params.config;
  cfg.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(tokens.size());
  if (n == 0) throw DataError("empty token sequence");
  if (n > cfg.max_context) {
    throw DataError("sequence length " + std::to_string(n) +
                    " exceeds max_context " + std::to_string(cfg.max_context));
  }
  for (int id : tokens) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw DataError("token id out of range: " + std::to_string(id));
    }
  }
  const std::vector<char> ablated = detail::ablation_mask(cfg, options.ablate);

  ForwardResult<S> result;
  if (options.record_attention) {
    AttentionRecord rec;
    rec.n_layers = cfg.n_layers;
    rec.n_heads = cfg.n_heads;
    rec.matrices.assign(
        static_cast<std::size_t>(cfg.n_layers) * cfg.n_heads, Mat<double>());
    result.attention = std::move(rec);
  }

  Mat<S> x(n, cfg.d_model);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = params.tok_emb.row(tokens[static_cast<std::size_t>(i)]) +
               params.pos_emb.row(i);
  }
  for (int l = 0; l < cfg.n_layers; ++l) {
    x += attention_block(cfg, params.layers[static_cast<std::size_t>(l)], x,
                         ablated, l,
                         result.attention ? &*result.attention : nullptr);
    x += ff_block(cfg, params.layers[static_cast<std::size_t>(l)], x);
  }
  const Mat<S> xf = detail::rmsnorm<S>(x, params.final_norm_gain, nullptr);
  result.logits = xf * params.unembed;
  return result;
}

template <typename S>
struct LossResult {
  S loss = 0;
  Parameters<S> grads;
};

// Mean next-token cross-entropy. loss_mask[j] gates the prediction of
// tokens[j] (from the logits at j-1); index 0 never contributes.
template <typename S>
LossResult<S> loss_and_grads(const Parameters<S>& params,
                             std::span<const int> tokens,
                             std::span<const std::uint8_t> loss_mask) {
  const ModelConfig& cfg = params.config;
  cfg.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(tokens.size());
  if (n < 2) throw DataError("need at least two tokens for a loss");
  if (tokens.size() != loss_mask.size()) {
    throw DataError("loss mask length mismatch");
  }
  if (n > cfg.max_context) throw DataError("sequence exceeds max_context");
  for (int id : tokens) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw DataError("token id out of range: " + std::to_string(id));
    }
  }
  Eigen::Index n_masked = 0;
  for (std::size_t j = 1; j < tokens.size(); ++j) {
    if (loss_mask[j]) ++n_masked;
  }
  if (n_masked == 0) throw DataError("loss mask excludes every position");

  const int hd = cfg.head_dim();
  const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(hd)));

  // Forward pass, keeping what the backward pass needs.
  struct LayerStash {
    Mat<S> x_attn_in, xn1, q, k, v, ctx;
    std::vector<Mat<S>> attn;  // per head
    std::vector<S> inv1;
    Mat<S> x_ff_in, xn2, h_pre, h;
    std::vector<S> inv2;
  };
  std::vector<LayerStash> stash(static_cast<std::size_t>(cfg.n_layers));

  Mat<S> x(n, cfg.d_model);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = params.tok_emb.row(tokens[static_cast<std::size_t>(i)]) +
               params.pos_emb.row(i);
  }

  for (int l = 0; l < cfg.n_layers; ++l) {
    auto& st = stash[static_cast<std::size_t>(l)];
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    st.x_attn_in = x;
    st.xn1 = detail::rmsnorm<S>(x, layer.attn_norm_gain, &st.inv1);
    st.q = st.xn1 * layer.wq;
    st.k = st.xn1 * layer.wk;
    st.v = st.xn1 * layer.wv;
    st.ctx = Mat<S>::Zero(n, cfg.d_model);
    st.attn.resize(static_cast<std::size_t>(cfg.n_heads));
    for (int h = 0; h < cfg.n_heads; ++h) {
      const auto qh = st.q.middleCols(h * hd, hd);
      const auto kh = st.k.middleCols(h * hd, hd);
      const auto vh = st.v.middleCols(h * hd, hd);
      Mat<S> scores = qh * kh.transpose() * scale;
      Mat<S>& attn = st.attn[static_cast<std::size_t>(h)];
      attn = Mat<S>::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const S m = scores.row(i).head(i + 1).maxCoeff();
        Eigen::Array<S, 1, Eigen::Dynamic> e =
            (scores.row(i).head(i + 1).array() - m).exp();
        attn.row(i).head(i + 1) = (e / e.sum()).matrix();
      }
      st.ctx.middleCols(h * hd, hd) = attn * vh;
    }
    x += st.ctx * layer.wo;
    st.x_ff_in = x;
    st.xn2 = detail::rmsnorm<S>(x, layer.ff_norm_gain, &st.inv2);
    st.h_pre = st.xn2 * layer.w1;
    st.h = st.h_pre.unaryExpr([](S v) { return detail::gelu(v); });
    x += st.h * layer.w2;
  }

  std::vector<S> inv_f;
  const Mat<S> x_final = x;
  const Mat<S> xf = detail::rmsnorm<S>(x_final, params.final_norm_gain, &inv_f);
  const Mat<S> logits = xf * params.unembed;

  LossResult<S> result;
  result.grads = params.zeros_like();
  auto& g = result.grads;

  // Cross entropy and dlogits.
  Mat<S> dlogits = Mat<S>::Zero(n, cfg.vocab_size);
  S loss = 0;
  const S inv_count = static_cast<S>(1) / static_cast<S>(n_masked);
  for (Eigen::Index j = 1; j < n; ++j) {
    if (!loss_mask[static_cast<std::size_t>(j)]) continue;
    const Eigen::Index i = j - 1;
    const int target = tokens[static_cast<std::size_t>(j)];
    const S m = logits.row(i).maxCoeff();
    Eigen::Array<S, 1, Eigen::Dynamic> e = (logits.row(i).array() - m).exp();
    const S denom = e.sum();
    loss += (std::log(denom) + m - logits(i, target)) * inv_count;
    dlogits.row(i) = (e / denom).matrix() * inv_count;
    dlogits(i, target) -= inv_count;
  }
  result.loss = loss;

  // Backward.
  g.unembed = xf.transpose() * dlogits;
  Mat<S> dxf = dlogits * params.unembed.transpose();
  Mat<S> dx = detail::rmsnorm_backward(dxf, x_final, params.final_norm_gain,
                                       inv_f, g.final_norm_gain);

  for (int l = cfg.n_layers - 1; l >= 0; --l) {
    auto& st = stash[static_cast<std::size_t>(l)];
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    auto& gl = g.layers[static_cast<std::size_t>(l)];

    // Feed-forward block.
    Mat<S> dh = dx * layer.w2.transpose();
    gl.w2 = st.h.transpose() * dx;
    Mat<S> dh_pre(n, cfg.d_ff);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < cfg.d_ff; ++c) {
        dh_pre(i, c) = dh(i, c) * detail::gelu_grad(st.h_pre(i, c));
      }
    }
    Mat<S> dxn2 = dh_pre * layer.w1.transpose();
    gl.w1 = st.xn2.transpose() * dh_pre;
    dx += detail::rmsnorm_backward(dxn2, st.x_ff_in, layer.ff_norm_gain,
                                   st.inv2, gl.ff_norm_gain);

    // Attention block.
    Mat<S> dctx = dx * layer.wo.transpose();
    gl.wo = st.ctx.transpose() * dx;
    Mat<S> dq = Mat<S>::Zero(n, cfg.d_model);
    Mat<S> dk = Mat<S>::Zero(n, cfg.d_model);
    Mat<S> dv = Mat<S>::Zero(n, cfg.d_model);
    for (int h = 0; h < cfg.n_heads; ++h) {
      const auto vh = st.v.middleCols(h * hd, hd);
      const auto qh = st.q.middleCols(h * hd, hd);
      const auto kh = st.k.middleCols(h * hd, hd);
      const Mat<S>& attn = st.attn[static_cast<std::size_t>(h)];
      const auto dctx_h = dctx.middleCols(h * hd, hd);
      Mat<S> dattn = dctx_h * vh.transpose();
      dv.middleCols(h * hd, hd) = attn.transpose() * dctx_h;
      Mat<S> dscores(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const S dot = attn.row(i).cwiseProduct(dattn.row(i)).sum();
        dscores.row(i) =
            attn.row(i).cwiseProduct((dattn.row(i).array() - dot).matrix());
      }
      dq.middleCols(h * hd, hd) = dscores * kh * scale;
      dk.middleCols(h * hd, hd) = dscores.transpose() * qh * scale;
    }
    Mat<S> dxn1 = dq * layer.wq.transpose() + dk * layer.wk.transpose() +
                  dv * layer.wv.transpose();
    gl.wq = st.xn1.transpose() * dq;
    gl.wk = st.xn1.transpose() * dk;
    gl.wv = st.xn1.transpose() * dv;
    dx += detail::rmsnorm_backward(dxn1, st.x_attn_in, layer.attn_norm_gain,
                                   st.inv1, gl.attn_norm_gain);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    g.tok_emb.row(tokens[static_cast<std::size_t>(i)]) += dx.row(i);
    g.pos_emb.row(i) += dx.row(i);
  }
  return result;
}

// ---- generation ----

struct GenerateOptions {
  int max_new_tokens = 50;
  std::vector<int> stop_sequence;  // early stop when the tail matches
  std::vector<HeadRef> ablate;
};

std::vector<int> generate(const Parameters<float>& params,
                          std::span<const int> prompt,
                          const GenerateOptions& options = {});

// ---- training ----

struct TrainSequence {
  std::vector<int> tokens;
  std::vector<std::uint8_t> loss_mask;
};

struct TrainOptions {
  int steps = 1500;
  int batch_size = 4;
  float lr = 3e-4f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float adam_eps = 1e-8f;
  float grad_clip = 1.0f;
  std::uint64_t seed = 0;
  std::function<void(int, double)> on_step;  // (step, mean batch loss)
};

struct TrainResult {
  Parameters<float> params;
  int step = 0;
  std::string rng_state;
  std::vector<std::pair<int, double>> loss_curve;
};

TrainResult train(const ModelConfig& config,
                  const std::vector<TrainSequence>& sequences,
                  const TrainOptions& options);

}  // namespace sulm
