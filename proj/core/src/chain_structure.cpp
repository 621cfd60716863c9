#include <algorithm>
#include <numeric>
#include <queue>
#include <vector>

#include "mlsa/stationary.hpp"

namespace mlsa::oracle {

namespace {

// Iterative Kosaraju: returns the component id of every vertex.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& succ,
                                            std::size_t& n_components) {
  const std::size_t n = succ.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : succ[u]) pred[v].push_back(u);

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.emplace_back(s, 0);
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < succ[u].size()) {
        const std::size_t v = succ[u][i++];
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  n_components = 0;
  std::vector<std::size_t> work;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != unset) continue;
    work.push_back(*it);
    comp[*it] = n_components;
    while (!work.empty()) {
      const std::size_t u = work.back();
      work.pop_back();
      for (std::size_t v : pred[u]) {
        if (comp[v] == unset) {
          comp[v] = n_components;
          work.push_back(v);
        }
      }
    }
    ++n_components;
  }
  return comp;
}

}  // namespace

ChainStructure analyze_structure(const std::vector<std::vector<std::size_t>>& successors) {
  const std::size_t n = successors.size();
  ChainStructure out;
  if (n == 0) return out;

  std::size_t nc = 0;
  const auto comp = strongly_connected(successors, nc);
  std::vector<char> closed(nc, 1);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : successors[u])
      if (comp[v] != comp[u]) closed[comp[u]] = 0;
  out.closed_classes = static_cast<std::size_t>(std::count(closed.begin(), closed.end(), 1));

  std::size_t first = 0;
  while (first < nc && !closed[first]) ++first;
  if (first == nc) return out;
  for (std::size_t u = 0; u < n; ++u)
    if (comp[u] == first) out.recurrent_states.push_back(u);

  // Period: gcd over edges inside the class of depth(u) + 1 - depth(v).
  constexpr long unset = -1;
  std::vector<long> depth(n, unset);
  std::queue<std::size_t> q;
  depth[out.recurrent_states.front()] = 0;
  q.push(out.recurrent_states.front());
  long g = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : successors[u]) {
      if (comp[v] != first) continue;
      if (depth[v] == unset) {
        depth[v] = depth[u] + 1;
        q.push(v);
      } else {
        g = std::gcd(g, std::labs(depth[u] + 1 - depth[v]));
      }
    }
  }
  out.period = g == 0 ? 1 : static_cast<std::size_t>(g);
  return out;
}

ChainStructure analyze_structure(const Eigen::MatrixXd& K, double threshold) {
  const auto n = static_cast<std::size_t>(K.rows());
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > threshold)
        succ[i].push_back(j);
  return analyze_structure(succ);
}

ChainStructure analyze_structure(const model::CoupledKernelMatrix& K) {
  const auto n = static_cast<std::size_t>(K.rows());
  std::vector<std::vector<std::size_t>> succ(n);
  for (Eigen::Index r = 0; r < K.outerSize(); ++r)
    for (model::CoupledKernelMatrix::InnerIterator it(K, r); it; ++it)
      if (it.value() > 0.0) succ[static_cast<std::size_t>(r)].push_back(static_cast<std::size_t>(it.col()));
  return analyze_structure(succ);
}

}  // namespace mlsa::oracle
