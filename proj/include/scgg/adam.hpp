#pragma once

#include <cmath>
#include <vector>

#include "scgg/params.hpp"

namespace scgg {

// Adam with bias correction. The parameter set is captured by pointer at
// construction; visit order fixes the moment-buffer layout.
template <typename Real>
class Adam {
 public:
  explicit Adam(ModelParams<Real>& params, Real lr, Real beta1 = Real(0.9), Real beta2 = Real(0.999),
                Real eps = Real(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    params.visit_trainable([&](const std::string&, Param<Real>& p) {
      params_.push_back(&p);
      m_.emplace_back(p.value.rows(), p.value.cols());
      v_.emplace_back(p.value.rows(), p.value.cols());
    });
  }

  void step() {
    ++t_;
    const Real bc1 = Real(1) - std::pow(beta1_, Real(t_));
    const Real bc2 = Real(1) - std::pow(beta2_, Real(t_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Param<Real>& p = *params_[i];
      Real* m = m_[i].data();
      Real* v = v_[i].data();
      const Real* grad = p.grad.data();
      Real* val = p.value.data();
      for (std::size_t k = 0; k < p.value.size(); ++k) {
        m[k] = beta1_ * m[k] + (Real(1) - beta1_) * grad[k];
        v[k] = beta2_ * v[k] + (Real(1) - beta2_) * grad[k] * grad[k];
        const Real mhat = m[k] / bc1;
        const Real vhat = v[k] / bc2;
        val[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  int steps_taken() const { return t_; }

 private:
  Real lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::vector<Param<Real>*> params_;
  std::vector<Matrix<Real>> m_, v_;
};

}  // namespace scgg
