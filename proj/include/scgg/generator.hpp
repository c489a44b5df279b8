#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "scgg/params.hpp"
#include "scgg/prepare.hpp"
#include "scgg/tape.hpp"

namespace scgg {

// Hidden state of the GRU stack, one row per layer.
template <typename Real>
using StepState = Matrix<Real>;

template <typename Real>
Matrix<Real> zero_state() {
  return Matrix<Real>(kGruLayers, kHiddenWidth);
}

// Start-of-sequence link vector: all ones, distinguishable from any sparse
// first step. The initial hidden state is all zeros.
template <typename Real>
Matrix<Real> sos_vector(int m) {
  if (m < 1) throw std::invalid_argument("sos_vector: m must be positive");
  return Matrix<Real>::filled(1, m, Real(1));
}

template <typename Real>
Matrix<Real> to_row(const LinkVector& s) {
  Matrix<Real> r(1, static_cast<int>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) r(0, k) = static_cast<Real>(s[k]);
  return r;
}

// Zero-pads a length-m link row to m_max. Padding is always zero so that a
// model evaluated below its capacity sees the same inputs regardless of m_max.
template <typename Real>
Matrix<Real> pad_links(const Matrix<Real>& s, int m_max) {
  if (s.cols() > m_max) throw std::invalid_argument("pad_links: link vector longer than m_max");
  Matrix<Real> out(1, m_max);
  for (int k = 0; k < s.cols(); ++k) out(0, k) = s(0, k);
  return out;
}

// Mean binary cross entropy between a probability row and 0/1 labels,
// with probabilities clamped to [eps, 1-eps].
template <typename Real>
Real step_loss(const Matrix<Real>& phi, const LinkVector& s) {
  if (phi.rows() != 1 || phi.cols() != static_cast<int>(s.size()) || s.empty())
    throw std::invalid_argument("step_loss: phi/target length mismatch");
  const Real eps = Real(kBceEps);
  Real loss(0);
  for (int k = 0; k < phi.cols(); ++k) {
    const Real p = std::min(std::max(phi(0, k), eps), Real(1) - eps);
    const Real sk = static_cast<Real>(s[static_cast<std::size_t>(k)]);
    loss -= sk * std::log(p) + (Real(1) - sk) * std::log(Real(1) - p);
  }
  return loss / static_cast<Real>(phi.cols());
}

namespace detail {

template <typename Real>
struct GeneratorVars {
  struct GruLayer {
    Var<Real> w_ih, w_hh, b_ih, b_hh;
  };
  std::array<GruLayer, kGruLayers> gru;
  Var<Real> mlp_w1, mlp_b1, mlp_w2, mlp_b2;

  static GeneratorVars bind(Tape<Real>& tape, GeneratorParams<Real>& p) {
    auto bindp = [&](Param<Real>& param) { return tape.param(param.value, &param.grad); };
    GeneratorVars v;
    for (int l = 0; l < kGruLayers; ++l) {
      auto& src = p.gru[static_cast<std::size_t>(l)];
      auto& dst = v.gru[static_cast<std::size_t>(l)];
      dst.w_ih = bindp(src.w_ih);
      dst.w_hh = bindp(src.w_hh);
      dst.b_ih = bindp(src.b_ih);
      dst.b_hh = bindp(src.b_hh);
    }
    v.mlp_w1 = bindp(p.mlp_w1);
    v.mlp_b1 = bindp(p.mlp_b1);
    v.mlp_w2 = bindp(p.mlp_w2);
    v.mlp_b2 = bindp(p.mlp_b2);
    return v;
  }
};

template <typename Real>
struct StepVars {
  Var<Real> phi;
  std::array<Var<Real>, kGruLayers> h;
};

template <typename Real>
std::array<Var<Real>, kGruLayers> zero_state_vars(Tape<Real>& tape) {
  std::array<Var<Real>, kGruLayers> h;
  for (auto& hl : h) hl = tape.leaf(Matrix<Real>(1, kHiddenWidth));
  return h;
}

// One autoregressive step: x = [r, s_prev_padded] through the GRU stack,
// then the sigmoid MLP; phi is truncated to the first m entries.
template <typename Real>
StepVars<Real> step_t(Tape<Real>& tape, Var<Real> r, Var<Real> s_prev_padded,
                      const std::array<Var<Real>, kGruLayers>& h_prev, const GeneratorVars<Real>& v, int m,
                      int m_max) {
  if (m < 1 || m > m_max) throw std::invalid_argument("step: m out of range [1, m_max]");
  if (r.cols() != kFeatureWidth) throw std::invalid_argument("step: feature row must have width 32");

  constexpr int H = kHiddenWidth;
  auto x = tape.concat_cols(r, s_prev_padded);
  StepVars<Real> out;
  for (int l = 0; l < kGruLayers; ++l) {
    const auto& layer = v.gru[static_cast<std::size_t>(l)];
    auto h = h_prev[static_cast<std::size_t>(l)];
    auto gx = tape.add_rowwise(tape.matmul(x, layer.w_ih), layer.b_ih);
    auto gh = tape.add_rowwise(tape.matmul(h, layer.w_hh), layer.b_hh);
    auto reset = tape.sigmoid(tape.add(tape.slice_cols(gx, 0, H), tape.slice_cols(gh, 0, H)));
    auto update = tape.sigmoid(tape.add(tape.slice_cols(gx, H, H), tape.slice_cols(gh, H, H)));
    auto cand = tape.tanh_op(tape.add(tape.slice_cols(gx, 2 * H, H), tape.hadamard(reset, tape.slice_cols(gh, 2 * H, H))));
    // h' = (1 - update) * cand + update * h
    auto hn = tape.add(cand, tape.hadamard(update, tape.sub(h, cand)));
    out.h[static_cast<std::size_t>(l)] = hn;
    x = hn;
  }
  auto hid = tape.relu(tape.add_rowwise(tape.matmul(x, v.mlp_w1), v.mlp_b1));
  auto full = tape.sigmoid(tape.add_rowwise(tape.matmul(hid, v.mlp_w2), v.mlp_b2));
  out.phi = m == m_max ? full : tape.slice_cols(full, 0, m);
  return out;
}

}  // namespace detail

// Plain single-step forward; returns (phi, new hidden state).
template <typename Real>
std::pair<Matrix<Real>, StepState<Real>> step(const Matrix<Real>& r, const Matrix<Real>& s_prev,
                                              const StepState<Real>& h_prev, GeneratorParams<Real>& params,
                                              int m) {
  if (s_prev.rows() != 1 || s_prev.cols() != m) throw std::invalid_argument("step: s_prev must be 1 x m");
  Tape<Real> tape;
  tape.grad_enabled = false;
  auto v = detail::GeneratorVars<Real>::bind(tape, params);
  std::array<Var<Real>, kGruLayers> h;
  for (int l = 0; l < kGruLayers; ++l) {
    Matrix<Real> row(1, kHiddenWidth);
    for (int j = 0; j < kHiddenWidth; ++j) row(0, j) = h_prev(l, j);
    h[static_cast<std::size_t>(l)] = tape.leaf(std::move(row));
  }
  auto out = detail::step_t(tape, tape.leaf(r), tape.leaf(pad_links(s_prev, params.m_max)), h, v, m, params.m_max);
  StepState<Real> hn = zero_state<Real>();
  for (int l = 0; l < kGruLayers; ++l)
    for (int j = 0; j < kHiddenWidth; ++j) hn(l, j) = out.h[static_cast<std::size_t>(l)].value()(0, j);
  return {out.phi.value(), hn};
}

}  // namespace scgg
