#pragma once

#include <cmath>

namespace stance {

// Classical momentum: v <- mu*v - lr*g; theta <- theta + v.
template <class P, class G>
void sgd_momentum_step(P& theta, const G& grad, P& velocity, double lr,
                       double mu) {
  using S = typename P::Scalar;
  velocity = static_cast<S>(mu) * velocity - static_cast<S>(lr) * grad;
  theta += velocity;
}

// AdaDelta (Zeiler): accumulate squared gradients and squared updates with
// decay rho; the step is -sqrt((E[dx^2]+eps)/(E[g^2]+eps)) * g.
template <class P, class G>
void adadelta_step(P& theta, const G& grad, P& sq_grad, P& sq_update,
                   double rho, double eps) {
  using S = typename P::Scalar;
  const S r = static_cast<S>(rho);
  const S e = static_cast<S>(eps);
  sq_grad =
      (r * sq_grad.array() + (S(1) - r) * grad.array().square()).matrix();
  P delta = (-((sq_update.array() + e) / (sq_grad.array() + e)).sqrt() *
             grad.array())
                .matrix();
  sq_update =
      (r * sq_update.array() + (S(1) - r) * delta.array().square()).matrix();
  theta += delta;
}

}  // namespace stance
