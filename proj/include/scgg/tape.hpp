#pragma once

#include <cassert>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "scgg/matrix.hpp"
#include "scgg/rng.hpp"

namespace scgg {

template <typename Real>
class Tape;

// Handle to a node on a Tape. Cheap to copy; values live on the tape.
template <typename Real>
struct Var {
  Tape<Real>* tape = nullptr;
  int idx = -1;

  bool valid() const { return tape != nullptr; }
  const Matrix<Real>& value() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
};

// Reverse-mode autodiff tape over dense matrices. Operations compute their
// value eagerly and record a backward closure; backward() replays the
// closures in reverse creation order, which is a valid topological order
// because operations only consume earlier nodes. With grad_enabled=false the
// tape degrades to eager forward evaluation (used for inference).
template <typename Real>
class Tape {
 public:
  bool grad_enabled = true;

  const Matrix<Real>& value(Var<Real> v) const { return nodes_[static_cast<std::size_t>(v.idx)].value; }
  const Matrix<Real>& grad(Var<Real> v) const { return nodes_[static_cast<std::size_t>(v.idx)].grad; }
  std::size_t num_nodes() const { return nodes_.size(); }

  Var<Real> leaf(Matrix<Real> v) { return make(std::move(v)); }

  // Leaf whose gradient is added into *grad_sink on backward.
  Var<Real> param(const Matrix<Real>& v, Matrix<Real>* grad_sink) {
    Var<Real> out = make(v);
    record(out, [this, oi = out.idx, grad_sink] { *grad_sink += nodes_[idx(oi)].grad; });
    return out;
  }

  Var<Real> add(Var<Real> a, Var<Real> b) {
    assert(val(a).same_shape(val(b)));
    Matrix<Real> out = val(a);
    out += val(b);
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx] {
      g(ai) += g(ci);
      g(bi) += g(ci);
    });
    return c;
  }

  Var<Real> sub(Var<Real> a, Var<Real> b) {
    assert(val(a).same_shape(val(b)));
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= val(b).data()[i];
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx] {
      g(ai) += g(ci);
      const auto& gc = g(ci);
      auto& gb = g(bi);
      for (std::size_t i = 0; i < gc.size(); ++i) gb.data()[i] -= gc.data()[i];
    });
    return c;
  }

  Var<Real> hadamard(Var<Real> a, Var<Real> b) {
    assert(val(a).same_shape(val(b)));
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= val(b).data()[i];
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx] {
      const auto& gc = g(ci);
      const auto& va = v(ai);
      const auto& vb = v(bi);
      auto& ga = g(ai);
      auto& gb = g(bi);
      for (std::size_t i = 0; i < gc.size(); ++i) {
        ga.data()[i] += gc.data()[i] * vb.data()[i];
        gb.data()[i] += gc.data()[i] * va.data()[i];
      }
    });
    return c;
  }

  Var<Real> scale(Var<Real> a, Real s) {
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= s;
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx, s] {
      const auto& gc = g(ci);
      auto& ga = g(ai);
      for (std::size_t i = 0; i < gc.size(); ++i) ga.data()[i] += s * gc.data()[i];
    });
    return c;
  }

  // out(i, :) = a(i, :) + bias(0, :)
  Var<Real> add_rowwise(Var<Real> a, Var<Real> bias) {
    assert(val(bias).rows() == 1 && val(bias).cols() == val(a).cols());
    Matrix<Real> out = val(a);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) out(i, j) += val(bias)(0, j);
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, bi = bias.idx, ci = c.idx] {
      const auto& gc = g(ci);
      g(ai) += gc;
      auto& gb = g(bi);
      for (int i = 0; i < gc.rows(); ++i)
        for (int j = 0; j < gc.cols(); ++j) gb(0, j) += gc(i, j);
    });
    return c;
  }

  Var<Real> matmul(Var<Real> a, Var<Real> b) {
    Var<Real> c = make(scgg::matmul(val(a), val(b)));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx] {
      mm_nt_acc(g(ai), g(ci), v(bi));  // dA += dC B^T
      mm_tn_acc(g(bi), v(ai), g(ci));  // dB += A^T dC
    });
    return c;
  }

  Var<Real> matmul_nt(Var<Real> a, Var<Real> b) {
    Var<Real> c = make(scgg::matmul_nt(val(a), val(b)));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx] {
      mm_acc(g(ai), g(ci), v(bi));     // dA += dC B
      mm_tn_acc(g(bi), g(ci), v(ai));  // dB += dC^T A
    });
    return c;
  }

  Var<Real> relu(Var<Real> a) {
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::max(out.data()[i], Real(0));
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx] {
      const auto& gc = g(ci);
      const auto& va = v(ai);
      auto& ga = g(ai);
      for (std::size_t i = 0; i < gc.size(); ++i)
        if (va.data()[i] > Real(0)) ga.data()[i] += gc.data()[i];
    });
    return c;
  }

  Var<Real> sigmoid(Var<Real> a) {
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = Real(1) / (Real(1) + std::exp(-out.data()[i]));
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx] {
      const auto& gc = g(ci);
      const auto& vc = v(ci);
      auto& ga = g(ai);
      for (std::size_t i = 0; i < gc.size(); ++i) {
        const Real y = vc.data()[i];
        ga.data()[i] += gc.data()[i] * y * (Real(1) - y);
      }
    });
    return c;
  }

  Var<Real> tanh_op(Var<Real> a) {
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::tanh(out.data()[i]);
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx] {
      const auto& gc = g(ci);
      const auto& vc = v(ci);
      auto& ga = g(ai);
      for (std::size_t i = 0; i < gc.size(); ++i) {
        const Real y = vc.data()[i];
        ga.data()[i] += gc.data()[i] * (Real(1) - y * y);
      }
    });
    return c;
  }

  Var<Real> softmax_rows(Var<Real> a) {
    Matrix<Real> out = val(a);
    for (int i = 0; i < out.rows(); ++i) {
      Real* r = out.row(i);
      Real mx = r[0];
      for (int j = 1; j < out.cols(); ++j) mx = std::max(mx, r[j]);
      Real sum(0);
      for (int j = 0; j < out.cols(); ++j) {
        r[j] = std::exp(r[j] - mx);
        sum += r[j];
      }
      for (int j = 0; j < out.cols(); ++j) r[j] /= sum;
    }
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx] {
      const auto& gc = g(ci);
      const auto& y = v(ci);
      auto& ga = g(ai);
      for (int i = 0; i < gc.rows(); ++i) {
        Real dot(0);
        for (int j = 0; j < gc.cols(); ++j) dot += gc(i, j) * y(i, j);
        for (int j = 0; j < gc.cols(); ++j) ga(i, j) += y(i, j) * (gc(i, j) - dot);
      }
    });
    return c;
  }

  // Per-row normalization over columns, then affine with gamma/beta rows.
  Var<Real> layernorm_rows(Var<Real> a, Var<Real> gamma, Var<Real> beta, Real eps) {
    const auto& x = val(a);
    const int n = x.rows(), cdim = x.cols();
    Matrix<Real> xhat(n, cdim), inv_std(n, 1), out(n, cdim);
    for (int i = 0; i < n; ++i) {
      Real mean(0);
      for (int j = 0; j < cdim; ++j) mean += x(i, j);
      mean /= Real(cdim);
      Real var(0);
      for (int j = 0; j < cdim; ++j) {
        const Real d = x(i, j) - mean;
        var += d * d;
      }
      var /= Real(cdim);
      const Real inv = Real(1) / std::sqrt(var + eps);
      inv_std(i, 0) = inv;
      for (int j = 0; j < cdim; ++j) {
        xhat(i, j) = (x(i, j) - mean) * inv;
        out(i, j) = xhat(i, j) * val(gamma)(0, j) + val(beta)(0, j);
      }
    }
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, gi = gamma.idx, bi = beta.idx, ci = c.idx, xhat = std::move(xhat),
               inv_std = std::move(inv_std)] {
      const auto& gc = g(ci);
      const auto& vg = v(gi);
      auto& ga = g(ai);
      auto& gg = g(gi);
      auto& gb = g(bi);
      const int n = gc.rows(), cdim = gc.cols();
      for (int i = 0; i < n; ++i) {
        Real sum_dxhat(0), sum_dxhat_xhat(0);
        for (int j = 0; j < cdim; ++j) {
          const Real dxh = gc(i, j) * vg(0, j);
          sum_dxhat += dxh;
          sum_dxhat_xhat += dxh * xhat(i, j);
          gg(0, j) += gc(i, j) * xhat(i, j);
          gb(0, j) += gc(i, j);
        }
        const Real inv = inv_std(i, 0);
        for (int j = 0; j < cdim; ++j) {
          const Real dxh = gc(i, j) * vg(0, j);
          ga(i, j) += inv / Real(cdim) * (Real(cdim) * dxh - sum_dxhat - xhat(i, j) * sum_dxhat_xhat);
        }
      }
    });
    return c;
  }

  // Batch normalization over rows (per column): normalizes by the statistics
  // of the current rows and differentiates through them. Biased variance.
  // The batch statistics are written to *mean_out / *var_out for the caller's
  // running-average bookkeeping.
  Var<Real> batchnorm(Var<Real> a, Var<Real> gamma, Var<Real> beta, Real eps, Matrix<Real>* mean_out,
                      Matrix<Real>* var_out) {
    const auto& x = val(a);
    const int n = x.rows(), cdim = x.cols();
    Matrix<Real> mean(1, cdim), var(1, cdim), inv_std(1, cdim), xhat(n, cdim), out(n, cdim);
    for (int j = 0; j < cdim; ++j) {
      Real mu(0);
      for (int i = 0; i < n; ++i) mu += x(i, j);
      mu /= Real(n);
      Real sq(0);
      for (int i = 0; i < n; ++i) {
        const Real d = x(i, j) - mu;
        sq += d * d;
      }
      mean(0, j) = mu;
      var(0, j) = sq / Real(n);
      inv_std(0, j) = Real(1) / std::sqrt(var(0, j) + eps);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < cdim; ++j) {
        xhat(i, j) = (x(i, j) - mean(0, j)) * inv_std(0, j);
        out(i, j) = xhat(i, j) * val(gamma)(0, j) + val(beta)(0, j);
      }
    if (mean_out) *mean_out = mean;
    if (var_out) *var_out = var;
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, gi = gamma.idx, bi = beta.idx, ci = c.idx, xhat = std::move(xhat),
               inv_std = std::move(inv_std)] {
      const auto& gc = g(ci);
      const auto& vg = v(gi);
      auto& ga = g(ai);
      auto& gg = g(gi);
      auto& gb = g(bi);
      const int n = gc.rows(), cdim = gc.cols();
      for (int j = 0; j < cdim; ++j) {
        Real sum_dxhat(0), sum_dxhat_xhat(0);
        for (int i = 0; i < n; ++i) {
          const Real dxh = gc(i, j) * vg(0, j);
          sum_dxhat += dxh;
          sum_dxhat_xhat += dxh * xhat(i, j);
          gg(0, j) += gc(i, j) * xhat(i, j);
          gb(0, j) += gc(i, j);
        }
        const Real inv = inv_std(0, j);
        for (int i = 0; i < n; ++i) {
          const Real dxh = gc(i, j) * vg(0, j);
          ga(i, j) += inv / Real(n) * (Real(n) * dxh - sum_dxhat - xhat(i, j) * sum_dxhat_xhat);
        }
      }
    });
    return c;
  }

  // Inverted dropout; identity when rate == 0.
  Var<Real> dropout(Var<Real> a, Real rate, Rng& rng) {
    if (rate <= Real(0)) return a;
    const Real keep = Real(1) - rate;
    Matrix<Real> mask(val(a).rows(), val(a).cols());
    for (std::size_t i = 0; i < mask.size(); ++i)
      mask.data()[i] = rng.bernoulli(static_cast<double>(keep)) ? Real(1) / keep : Real(0);
    Matrix<Real> out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= mask.data()[i];
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx, mask = std::move(mask)] {
      const auto& gc = g(ci);
      auto& ga = g(ai);
      for (std::size_t i = 0; i < gc.size(); ++i) ga.data()[i] += gc.data()[i] * mask.data()[i];
    });
    return c;
  }

  Var<Real> concat_cols(Var<Real> a, Var<Real> b) {
    assert(val(a).rows() == val(b).rows());
    const int n = val(a).rows(), ca = val(a).cols(), cb = val(b).cols();
    Matrix<Real> out(n, ca + cb);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < ca; ++j) out(i, j) = val(a)(i, j);
      for (int j = 0; j < cb; ++j) out(i, ca + j) = val(b)(i, j);
    }
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, bi = b.idx, ci = c.idx, ca] {
      const auto& gc = g(ci);
      auto& ga = g(ai);
      auto& gb = g(bi);
      for (int i = 0; i < gc.rows(); ++i) {
        for (int j = 0; j < ga.cols(); ++j) ga(i, j) += gc(i, j);
        for (int j = 0; j < gb.cols(); ++j) gb(i, j) += gc(i, ca + j);
      }
    });
    return c;
  }

  Var<Real> slice_cols(Var<Real> a, int c0, int len) {
    assert(c0 >= 0 && c0 + len <= val(a).cols());
    const int n = val(a).rows();
    Matrix<Real> out(n, len);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < len; ++j) out(i, j) = val(a)(i, c0 + j);
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx, c0] {
      const auto& gc = g(ci);
      auto& ga = g(ai);
      for (int i = 0; i < gc.rows(); ++i)
        for (int j = 0; j < gc.cols(); ++j) ga(i, c0 + j) += gc(i, j);
    });
    return c;
  }

  Var<Real> row(Var<Real> a, int i) {
    Matrix<Real> out(1, val(a).cols());
    for (int j = 0; j < out.cols(); ++j) out(0, j) = val(a)(i, j);
    Var<Real> c = make(std::move(out));
    record(c, [this, ai = a.idx, ci = c.idx, i] {
      const auto& gc = g(ci);
      auto& ga = g(ai);
      for (int j = 0; j < gc.cols(); ++j) ga(i, j) += gc(0, j);
    });
    return c;
  }

  // Mean binary cross entropy of a probability row against 0/1 targets.
  // Probabilities are clamped to [eps, 1-eps]; the gradient vanishes where
  // the clamp is active, matching the value's flat region.
  Var<Real> bce_mean(Var<Real> phi, const Matrix<Real>& target, Real eps) {
    const auto& p = val(phi);
    assert(p.rows() == 1 && target.rows() == 1 && p.cols() == target.cols());
    const int m = p.cols();
    Real loss(0);
    for (int k = 0; k < m; ++k) {
      const Real pk = std::min(std::max(p(0, k), eps), Real(1) - eps);
      const Real s = target(0, k);
      loss -= s * std::log(pk) + (Real(1) - s) * std::log(Real(1) - pk);
    }
    Matrix<Real> out(1, 1);
    out(0, 0) = loss / Real(m);
    Var<Real> c = make(std::move(out));
    record(c, [this, pi = phi.idx, ci = c.idx, target, eps] {
      const Real gc = g(ci)(0, 0);
      const auto& p = v(pi);
      auto& gp = g(pi);
      const int m = p.cols();
      for (int k = 0; k < m; ++k) {
        const Real pk = p(0, k);
        if (pk <= eps || pk >= Real(1) - eps) continue;
        const Real s = target(0, k);
        gp(0, k) += gc * (-(s / pk) + (Real(1) - s) / (Real(1) - pk)) / Real(m);
      }
    });
    return c;
  }

  // Seeds d(root)/d(root) = seed_grad and runs all closures in reverse order.
  void backward(Var<Real> root, Real seed_grad = Real(1)) {
    assert(grad_enabled);
    assert(val(root).rows() == 1 && val(root).cols() == 1);
    nodes_[static_cast<std::size_t>(root.idx)].grad(0, 0) = seed_grad;
    for (int i = root.idx; i >= 0; --i)
      if (nodes_[static_cast<std::size_t>(i)].back) nodes_[static_cast<std::size_t>(i)].back();
  }

 private:
  struct Node {
    Matrix<Real> value;
    Matrix<Real> grad;
    std::function<void()> back;
  };

  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  const Matrix<Real>& val(Var<Real> a) const { return nodes_[idx(a.idx)].value; }
  const Matrix<Real>& v(int i) const { return nodes_[idx(i)].value; }
  Matrix<Real>& g(int i) { return nodes_[idx(i)].grad; }

  Var<Real> make(Matrix<Real> val) {
    Node node;
    node.value = std::move(val);
    if (grad_enabled) node.grad = Matrix<Real>(node.value.rows(), node.value.cols());
    nodes_.push_back(std::move(node));
    return Var<Real>{this, static_cast<int>(nodes_.size()) - 1};
  }

  template <typename F>
  void record(Var<Real> out, F&& back) {
    if (grad_enabled) nodes_[idx(out.idx)].back = std::forward<F>(back);
  }

  std::vector<Node> nodes_;
};

template <typename Real>
const Matrix<Real>& Var<Real>::value() const {
  return tape->value(*this);
}

}  // namespace scgg
