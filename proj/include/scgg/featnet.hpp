#pragma once

#include <cmath>
#include <stdexcept>

#include "scgg/graph.hpp"
#include "scgg/params.hpp"
#include "scgg/tape.hpp"

namespace scgg {

// Initial node features: [1, degree / max degree]. Structure-only and
// permutation-equivariant, and well-defined for freshly added nodes whose
// degree comes from inter-links alone.
template <typename Real>
Matrix<Real> initial_features(const Graph& g) {
  const auto deg = g.degrees();
  const Real scale = Real(1) / static_cast<Real>(std::max(1, g.max_degree()));
  Matrix<Real> x(g.num_nodes(), kInitialFeatureWidth);
  for (int i = 0; i < g.num_nodes(); ++i) {
    x(i, 0) = Real(1);
    x(i, 1) = static_cast<Real>(deg[static_cast<std::size_t>(i)]) * scale;
  }
  return x;
}

// Symmetric-normalized adjacency with self-loops: D^{-1/2} (A + I) D^{-1/2}.
template <typename Real>
Matrix<Real> normalized_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  const auto deg = g.degrees();
  std::vector<Real> inv_sqrt(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    inv_sqrt[static_cast<std::size_t>(i)] = Real(1) / std::sqrt(static_cast<Real>(deg[static_cast<std::size_t>(i)] + 1));
  Matrix<Real> a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(i)];
  for (const auto& [u, w] : g.edges()) {
    const Real v = inv_sqrt[static_cast<std::size_t>(u)] * inv_sqrt[static_cast<std::size_t>(w)];
    a(u, w) = v;
    a(w, u) = v;
  }
  return a;
}

// One propagation step without the activation: Ahat * x * w.
template <typename Real>
Matrix<Real> gcn_propagate(const Matrix<Real>& x, const Graph& g, const Matrix<Real>& w) {
  if (x.rows() != g.num_nodes()) throw std::logic_error("gcn_propagate: row count != node count");
  if (x.cols() != w.rows()) throw std::logic_error("gcn_propagate: feature/weight width mismatch");
  return matmul(matmul(normalized_adjacency<Real>(g), x), w);
}

template <typename Real>
Matrix<Real> gcn_layer(const Matrix<Real>& x, const Graph& g, const Matrix<Real>& w) {
  Matrix<Real> out = gcn_propagate(x, g, w);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::max(out.data()[i], Real(0));
  return out;
}

namespace detail {

template <typename Real>
struct FeatNetVars {
  Var<Real> gcn_w1, gcn_w2, bn_gamma, bn_beta;
  Var<Real> wq, bq, wk, bk, wv, bv, wo, bo;
  Var<Real> ln1_gamma, ln1_beta, ff_w1, ff_b1, ff_w2, ff_b2, ln2_gamma, ln2_beta;

  static FeatNetVars bind(Tape<Real>& tape, FeatNetParams<Real>& p) {
    auto bindp = [&](Param<Real>& param) { return tape.param(param.value, &param.grad); };
    FeatNetVars v;
    v.gcn_w1 = bindp(p.gcn_w1);
    v.gcn_w2 = bindp(p.gcn_w2);
    v.bn_gamma = bindp(p.bn_gamma);
    v.bn_beta = bindp(p.bn_beta);
    v.wq = bindp(p.wq);
    v.bq = bindp(p.bq);
    v.wk = bindp(p.wk);
    v.bk = bindp(p.bk);
    v.wv = bindp(p.wv);
    v.bv = bindp(p.bv);
    v.wo = bindp(p.wo);
    v.bo = bindp(p.bo);
    v.ln1_gamma = bindp(p.ln1_gamma);
    v.ln1_beta = bindp(p.ln1_beta);
    v.ff_w1 = bindp(p.ff_w1);
    v.ff_b1 = bindp(p.ff_b1);
    v.ff_w2 = bindp(p.ff_w2);
    v.ff_b2 = bindp(p.ff_b2);
    v.ln2_gamma = bindp(p.ln2_gamma);
    v.ln2_beta = bindp(p.ln2_beta);
    return v;
  }
};

inline void require_train_rng(Mode mode, const Rng* rng) {
  if (mode == Mode::train && rng == nullptr)
    throw std::invalid_argument("train-mode forward pass needs an rng for dropout");
}

// One encoder layer: 8-head unmasked self-attention over all node rows,
// residual + layer norm, position-wise feedforward, residual + layer norm.
// No positional encoding: node order carries no meaning.
template <typename Real>
Var<Real> transformer_encode_t(Tape<Real>& tape, Var<Real> x, const FeatNetVars<Real>& v, Real dropout_rate,
                               Mode mode, Rng* rng) {
  const bool train = mode == Mode::train;
  auto drop = [&](Var<Real> a) { return train ? tape.dropout(a, dropout_rate, *rng) : a; };

  auto q = tape.add_rowwise(tape.matmul(x, v.wq), v.bq);
  auto k = tape.add_rowwise(tape.matmul(x, v.wk), v.bk);
  auto val = tape.add_rowwise(tape.matmul(x, v.wv), v.bv);

  const Real inv_sqrt_dk = Real(1) / std::sqrt(static_cast<Real>(kHeadDim));
  Var<Real> heads;
  for (int h = 0; h < kHeads; ++h) {
    auto qh = tape.slice_cols(q, h * kHeadDim, kHeadDim);
    auto kh = tape.slice_cols(k, h * kHeadDim, kHeadDim);
    auto vh = tape.slice_cols(val, h * kHeadDim, kHeadDim);
    auto attn = tape.softmax_rows(tape.scale(tape.matmul_nt(qh, kh), inv_sqrt_dk));
    attn = drop(attn);
    auto oh = tape.matmul(attn, vh);
    heads = h == 0 ? oh : tape.concat_cols(heads, oh);
  }
  auto attn_out = drop(tape.add_rowwise(tape.matmul(heads, v.wo), v.bo));
  auto res1 = tape.layernorm_rows(tape.add(x, attn_out), v.ln1_gamma, v.ln1_beta, Real(kLayerNormEps));

  auto ff = drop(tape.relu(tape.add_rowwise(tape.matmul(res1, v.ff_w1), v.ff_b1)));
  auto ff_out = drop(tape.add_rowwise(tape.matmul(ff, v.ff_w2), v.ff_b2));
  return tape.layernorm_rows(tape.add(res1, ff_out), v.ln2_gamma, v.ln2_beta, Real(kLayerNormEps));
}

}  // namespace detail

// Full feature-network forward on the tape: GCN layer 1 -> ReLU -> batch
// norm -> GCN layer 2 -> transformer encoder; output rows are the width-32
// concatenation of the GCN and transformer features. Train mode updates the
// batch-norm running statistics on `params`.
template <typename Real>
Var<Real> embed_t(Tape<Real>& tape, const Graph& g, FeatNetParams<Real>& params, Mode mode, Rng* rng = nullptr) {
  if (g.num_nodes() < 1) throw std::invalid_argument("embed: empty graph");
  detail::require_train_rng(mode, rng);
  auto v = detail::FeatNetVars<Real>::bind(tape, params);

  auto ahat = tape.leaf(normalized_adjacency<Real>(g));
  auto x0 = tape.leaf(initial_features<Real>(g));
  auto h1 = tape.relu(tape.matmul(tape.matmul(ahat, x0), v.gcn_w1));

  // Normalization always uses the current graph's row statistics, so train
  // and eval forwards agree; running averages are only bookkeeping carried
  // in the checkpoint.
  Matrix<Real> batch_mean, batch_var;
  auto bn = tape.batchnorm(h1, v.bn_gamma, v.bn_beta, Real(kBatchNormEps), &batch_mean, &batch_var);
  if (mode == Mode::train) {
    const Real mom = Real(kBatchNormMomentum);
    for (int j = 0; j < kGcnWidth; ++j) {
      params.bn_running_mean(0, j) = (Real(1) - mom) * params.bn_running_mean(0, j) + mom * batch_mean(0, j);
      params.bn_running_var(0, j) = (Real(1) - mom) * params.bn_running_var(0, j) + mom * batch_var(0, j);
    }
  }

  auto gcn_out = tape.relu(tape.matmul(tape.matmul(ahat, bn), v.gcn_w2));
  auto t_out = detail::transformer_encode_t(tape, gcn_out, v, params.dropout_rate, mode, rng);
  return tape.concat_cols(gcn_out, t_out);
}

template <typename Real>
Matrix<Real> embed(const Graph& g, FeatNetParams<Real>& params, Mode mode = Mode::eval, Rng* rng = nullptr) {
  Tape<Real> tape;
  tape.grad_enabled = false;
  return embed_t(tape, g, params, mode, rng).value();
}

template <typename Real>
Matrix<Real> transformer_encode(const Matrix<Real>& x, FeatNetParams<Real>& params, Mode mode = Mode::eval,
                                Rng* rng = nullptr) {
  if (x.cols() != kGcnWidth) throw std::logic_error("transformer_encode: input width must be " + std::to_string(kGcnWidth));
  detail::require_train_rng(mode, rng);
  Tape<Real> tape;
  tape.grad_enabled = false;
  auto v = detail::FeatNetVars<Real>::bind(tape, params);
  return detail::transformer_encode_t(tape, tape.leaf(x), v, params.dropout_rate, mode, rng).value();
}

}  // namespace scgg
