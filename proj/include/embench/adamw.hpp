#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace embench {

/// Adam with decoupled weight decay. `trainable` masks frozen entries (they
/// are left bit-identical); `decay` selects entries that receive weight decay.
class AdamW {
 public:
  AdamW(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& p, const std::vector<double>& g, double lr, double weight_decay,
            const std::vector<char>& trainable, const std::vector<char>& decay) {
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!trainable[i]) continue;
      m_[i] = b1_ * m_[i] + (1.0 - b1_) * g[i];
      v_[i] = b2_ * v_[i] + (1.0 - b2_) * g[i] * g[i];
      const double mh = m_[i] / c1;
      const double vh = v_[i] / c2;
      if (decay[i]) p[i] -= lr * weight_decay * p[i];
      p[i] -= lr * mh / (std::sqrt(vh) + eps_);
    }
  }

  long steps() const { return t_; }

 private:
  double b1_, b2_, eps_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

/// Cosine decay from `lr` at step 0 to zero at `total`.
inline double cosine_lr(double lr, std::size_t step, std::size_t total) {
  if (total == 0) return lr;
  return 0.5 * lr * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / static_cast<double>(total)));
}

}  // namespace embench
