#include "stance/nn/seqnet.hpp"

#include "stance/nn/gradcheck.hpp"

namespace stance {

double seqnet_gradient_check(const SeqNet<double>& net,
                             const std::vector<int>& ids, int gold,
                             double weight, bool train_mode, double eps) {
  if (train_mode && net.dropout > 0.0) {
    throw DataError("non-deterministic loss");
  }
  SeqNetGrads<double> grads = SeqNetGrads<double>::zero_like(net);
  SeqNet<double> probe = net;
  const double base =
      probe.example_loss(ids, gold, weight, false, nullptr, grads);
  (void)base;
  const VecD analytic = seqnet_flatten_grads(net, grads);
  const VecD point = seqnet_flatten(net);
  auto loss = [&](const VecD& flat) {
    SeqNet<double> candidate = net;
    seqnet_set_params(candidate, flat);
    SeqNetCache<double> cache;
    const VecD probs = candidate.forward(ids, false, nullptr, &cache);
    return weighted_cross_entropy<double>(probs, gold, weight);
  };
  return max_relative_error(loss, point, analytic, eps);
}

}  // namespace stance
