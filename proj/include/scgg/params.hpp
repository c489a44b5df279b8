#pragma once

#include <array>
#include <cmath>
#include <string>

#include "scgg/matrix.hpp"
#include "scgg/rng.hpp"

namespace scgg {

// Model dimensions. Feature width 32 = GCN width 16 + transformer width 16.
inline constexpr int kInitialFeatureWidth = 2;
inline constexpr int kGcnWidth = 16;
inline constexpr int kFeatureWidth = 2 * kGcnWidth;
inline constexpr int kHeads = 8;
inline constexpr int kHeadDim = kGcnWidth / kHeads;
inline constexpr int kFfHidden = 4 * kGcnWidth;
inline constexpr int kGruLayers = 4;
inline constexpr int kHiddenWidth = 128;
inline constexpr int kMlpHidden = 64;

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;
inline constexpr double kLayerNormEps = 1e-5;
inline constexpr double kBceEps = 1e-7;

enum class Mode { train, eval };

// A learnable tensor and its gradient accumulator.
template <typename Real>
struct Param {
  Matrix<Real> value;
  Matrix<Real> grad;

  void init_shape(int rows, int cols) {
    value = Matrix<Real>(rows, cols);
    grad = Matrix<Real>(rows, cols);
  }
  void zero_grad() { grad.fill(Real(0)); }
};

namespace detail {

template <typename Real>
void xavier_uniform(Matrix<Real>& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / (w.rows() + w.cols()));
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = static_cast<Real>(rng.uniform(-limit, limit));
}

template <typename Real>
void uniform_pm(Matrix<Real>& w, double limit, Rng& rng) {
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = static_cast<Real>(rng.uniform(-limit, limit));
}

}  // namespace detail

// Feature network: two GCN layers (ReLU + batch norm between them) and a
// single transformer encoder layer over the GCN output.
template <typename Real>
struct FeatNetParams {
  Param<Real> gcn_w1;  // kInitialFeatureWidth x kGcnWidth
  Param<Real> gcn_w2;  // kGcnWidth x kGcnWidth
  Param<Real> bn_gamma, bn_beta;
  Matrix<Real> bn_running_mean, bn_running_var;

  Param<Real> wq, wk, wv, wo;  // kGcnWidth x kGcnWidth
  Param<Real> bq, bk, bv, bo;
  Param<Real> ln1_gamma, ln1_beta;
  Param<Real> ff_w1, ff_b1;  // kGcnWidth x kFfHidden
  Param<Real> ff_w2, ff_b2;  // kFfHidden x kGcnWidth
  Param<Real> ln2_gamma, ln2_beta;

  Real dropout_rate = Real(0.1);

  static FeatNetParams init(Rng& rng) {
    FeatNetParams p;
    p.gcn_w1.init_shape(kInitialFeatureWidth, kGcnWidth);
    p.gcn_w2.init_shape(kGcnWidth, kGcnWidth);
    detail::xavier_uniform(p.gcn_w1.value, rng);
    detail::xavier_uniform(p.gcn_w2.value, rng);
    p.bn_gamma.init_shape(1, kGcnWidth);
    p.bn_beta.init_shape(1, kGcnWidth);
    p.bn_gamma.value.fill(Real(1));
    p.bn_running_mean = Matrix<Real>(1, kGcnWidth);
    p.bn_running_var = Matrix<Real>::filled(1, kGcnWidth, Real(1));
    for (Param<Real>* w : {&p.wq, &p.wk, &p.wv, &p.wo}) {
      w->init_shape(kGcnWidth, kGcnWidth);
      detail::xavier_uniform(w->value, rng);
    }
    for (Param<Real>* b : {&p.bq, &p.bk, &p.bv, &p.bo}) b->init_shape(1, kGcnWidth);
    p.ln1_gamma.init_shape(1, kGcnWidth);
    p.ln1_beta.init_shape(1, kGcnWidth);
    p.ln1_gamma.value.fill(Real(1));
    p.ff_w1.init_shape(kGcnWidth, kFfHidden);
    p.ff_b1.init_shape(1, kFfHidden);
    p.ff_w2.init_shape(kFfHidden, kGcnWidth);
    p.ff_b2.init_shape(1, kGcnWidth);
    detail::xavier_uniform(p.ff_w1.value, rng);
    detail::xavier_uniform(p.ff_w2.value, rng);
    p.ln2_gamma.init_shape(1, kGcnWidth);
    p.ln2_beta.init_shape(1, kGcnWidth);
    p.ln2_gamma.value.fill(Real(1));
    return p;
  }

  template <typename F>
  void visit_trainable(F&& f) {
    f("featnet.gcn.w1", gcn_w1);
    f("featnet.gcn.w2", gcn_w2);
    f("featnet.bn.gamma", bn_gamma);
    f("featnet.bn.beta", bn_beta);
    f("featnet.attn.wq", wq);
    f("featnet.attn.bq", bq);
    f("featnet.attn.wk", wk);
    f("featnet.attn.bk", bk);
    f("featnet.attn.wv", wv);
    f("featnet.attn.bv", bv);
    f("featnet.attn.wo", wo);
    f("featnet.attn.bo", bo);
    f("featnet.ln1.gamma", ln1_gamma);
    f("featnet.ln1.beta", ln1_beta);
    f("featnet.ff.w1", ff_w1);
    f("featnet.ff.b1", ff_b1);
    f("featnet.ff.w2", ff_w2);
    f("featnet.ff.b2", ff_b2);
    f("featnet.ln2.gamma", ln2_gamma);
    f("featnet.ln2.beta", ln2_beta);
  }

  template <typename F>
  void visit_buffers(F&& f) {
    f("featnet.bn.running_mean", bn_running_mean);
    f("featnet.bn.running_var", bn_running_var);
  }
};

// Autoregressive head: 4-layer GRU stack plus the sigmoid output MLP.
// The GRU input is a node feature row concatenated with the previous step's
// link vector zero-padded to m_max.
template <typename Real>
struct GeneratorParams {
  struct GruLayer {
    Param<Real> w_ih;  // input x 3*hidden, gate order (r, z, n)
    Param<Real> w_hh;  // hidden x 3*hidden
    Param<Real> b_ih, b_hh;
  };

  std::array<GruLayer, kGruLayers> gru;
  Param<Real> mlp_w1, mlp_b1;  // kHiddenWidth x kMlpHidden
  Param<Real> mlp_w2, mlp_b2;  // kMlpHidden x m_max
  int m_max = 0;

  int input_width() const { return kFeatureWidth + m_max; }

  static GeneratorParams init(int m_max, Rng& rng) {
    GeneratorParams p;
    p.m_max = m_max;
    const double k = 1.0 / std::sqrt(static_cast<double>(kHiddenWidth));
    for (int l = 0; l < kGruLayers; ++l) {
      const int in = l == 0 ? p.input_width() : kHiddenWidth;
      auto& layer = p.gru[static_cast<std::size_t>(l)];
      layer.w_ih.init_shape(in, 3 * kHiddenWidth);
      layer.w_hh.init_shape(kHiddenWidth, 3 * kHiddenWidth);
      layer.b_ih.init_shape(1, 3 * kHiddenWidth);
      layer.b_hh.init_shape(1, 3 * kHiddenWidth);
      detail::uniform_pm(layer.w_ih.value, k, rng);
      detail::uniform_pm(layer.w_hh.value, k, rng);
      detail::uniform_pm(layer.b_ih.value, k, rng);
      detail::uniform_pm(layer.b_hh.value, k, rng);
    }
    p.mlp_w1.init_shape(kHiddenWidth, kMlpHidden);
    p.mlp_b1.init_shape(1, kMlpHidden);
    p.mlp_w2.init_shape(kMlpHidden, m_max);
    p.mlp_b2.init_shape(1, m_max);
    detail::xavier_uniform(p.mlp_w1.value, rng);
    detail::xavier_uniform(p.mlp_w2.value, rng);
    return p;
  }

  template <typename F>
  void visit_trainable(F&& f) {
    for (int l = 0; l < kGruLayers; ++l) {
      const std::string prefix = "generator.gru" + std::to_string(l);
      auto& layer = gru[static_cast<std::size_t>(l)];
      f(prefix + ".w_ih", layer.w_ih);
      f(prefix + ".w_hh", layer.w_hh);
      f(prefix + ".b_ih", layer.b_ih);
      f(prefix + ".b_hh", layer.b_hh);
    }
    f("generator.mlp.w1", mlp_w1);
    f("generator.mlp.b1", mlp_b1);
    f("generator.mlp.w2", mlp_w2);
    f("generator.mlp.b2", mlp_b2);
  }
};

template <typename Real>
struct ModelParams {
  FeatNetParams<Real> featnet;
  GeneratorParams<Real> generator;

  static ModelParams init(int m_max, Rng& rng) {
    ModelParams p;
    p.featnet = FeatNetParams<Real>::init(rng);
    p.generator = GeneratorParams<Real>::init(m_max, rng);
    return p;
  }

  int m_max() const { return generator.m_max; }

  template <typename F>
  void visit_trainable(F&& f) {
    featnet.visit_trainable(f);
    generator.visit_trainable(f);
  }

  template <typename F>
  void visit_buffers(F&& f) {
    featnet.visit_buffers(f);
  }

  void zero_grad() {
    visit_trainable([](const std::string&, Param<Real>& p) { p.zero_grad(); });
  }

  bool all_finite() {
    bool ok = true;
    visit_trainable([&](const std::string&, Param<Real>& p) { ok = ok && p.value.all_finite(); });
    visit_buffers([&](const std::string&, Matrix<Real>& b) { ok = ok && b.all_finite(); });
    return ok;
  }
};

}  // namespace scgg
