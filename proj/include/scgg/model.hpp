#pragma once

#include "scgg/featnet.hpp"
#include "scgg/generator.hpp"
#include "scgg/prepare.hpp"

namespace scgg {

// Node representations fed to the recurrent head: rows 0..n-1 come from
// embedding g0, rows n..n+m-1 from embedding g_prime. The g0 rows describe
// the conditioning graph exactly as it looks at inference time; the new-node
// rows use the richest graph available before intra-links exist.
template <typename Real>
Matrix<Real> splice_representations(const PreparedSample& sample, ModelParams<Real>& params, Mode mode,
                                    Rng* rng = nullptr) {
  const Matrix<Real> r0 = embed(sample.g0, params.featnet, mode, rng);
  const Matrix<Real> rp = embed(sample.g_prime, params.featnet, mode, rng);
  const int n = sample.n(), m = sample.m();
  Matrix<Real> out(n + m, kFeatureWidth);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < kFeatureWidth; ++j) out(i, j) = r0(i, j);
  for (int i = n; i < n + m; ++i)
    for (int j = 0; j < kFeatureWidth; ++j) out(i, j) = rp(i, j);
  return out;
}

// Teacher-forced sequence loss over all n+m steps (Algorithm: s_0 = sos,
// then the ground-truth link vector of the previous step). Returns the mean
// of the per-step BCE losses.
template <typename Real>
Var<Real> graph_loss_t(Tape<Real>& tape, const PreparedSample& sample, ModelParams<Real>& params, Mode mode,
                       Rng* rng = nullptr) {
  const int n = sample.n(), m = sample.m();
  const int m_max = params.m_max();
  if (m > m_max) throw std::invalid_argument("graph_loss: sample m exceeds model m_max");

  auto r0 = embed_t(tape, sample.g0, params.featnet, mode, rng);
  auto rp = embed_t(tape, sample.g_prime, params.featnet, mode, rng);
  auto gen = detail::GeneratorVars<Real>::bind(tape, params.generator);

  auto h = detail::zero_state_vars(tape);
  auto s_prev = tape.leaf(pad_links(sos_vector<Real>(m), m_max));
  Var<Real> total;
  for (int i = 0; i < n + m; ++i) {
    auto r = i < n ? tape.row(r0, i) : tape.row(rp, i);
    auto st = detail::step_t(tape, r, s_prev, h, gen, m, m_max);
    h = st.h;
    const auto target = to_row<Real>(sample.targets[static_cast<std::size_t>(i)]);
    auto li = tape.bce_mean(st.phi, target, Real(kBceEps));
    total = i == 0 ? li : tape.add(total, li);
    s_prev = tape.leaf(pad_links(target, m_max));
  }
  return tape.scale(total, Real(1) / static_cast<Real>(n + m));
}

template <typename Real>
Real graph_loss(const PreparedSample& sample, ModelParams<Real>& params, Mode mode, Rng* rng = nullptr) {
  Tape<Real> tape;
  tape.grad_enabled = false;
  return graph_loss_t(tape, sample, params, mode, rng).value()(0, 0);
}

}  // namespace scgg
