#include "quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace jdisc::detail {

namespace {

GaussRule compute_rule(int q) {
  // legendre_p_zeros returns the nonnegative zeros in increasing order.
  const auto half = boost::math::legendre_p_zeros<double>(q);
  GaussRule rule;
  for (double x : half) {
    const double dp = boost::math::legendre_p_prime<double>(q, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
    if (x != 0.0) {
      rule.nodes.push_back(-x);
      rule.weights.push_back(w);
    }
  }
  std::vector<std::size_t> order(rule.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  GaussRule sorted;
  for (auto i : order) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  return sorted;
}

}  // namespace

GaussRule gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_rule(q)).first;
  return it->second;
}

}  // namespace jdisc::detail
