// Internal: iterative Tarjan SCC over adjacency lists.

#ifndef MUSAT_SRC_SCC_UTIL_HPP
#define MUSAT_SRC_SCC_UTIL_HPP

#include <algorithm>
#include <utility>
#include <vector>

namespace musat {
namespace internal {

struct SccResult {
  std::vector<int> comp;  // node -> component id (reverse topological order)
  int count = 0;
};

inline SccResult strongly_connected_components(const std::vector<std::vector<int>>& succ) {
  int n = static_cast<int>(succ.size());
  SccResult r;
  r.comp.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> frames;  // (node, next child index)
  int next_index = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    frames.emplace_back(root, 0);
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      auto sv = static_cast<std::size_t>(v);
      if (pos == 0) {
        index[sv] = low[sv] = next_index++;
        stack.push_back(v);
        on_stack[sv] = true;
      }
      bool descended = false;
      while (pos < succ[sv].size()) {
        int w = succ[sv][pos++];
        auto sw = static_cast<std::size_t>(w);
        if (index[sw] == -1) {
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[sw]) low[sv] = std::min(low[sv], index[sw]);
      }
      if (descended) continue;
      if (low[sv] == index[sv]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          r.comp[static_cast<std::size_t>(w)] = r.count;
          if (w == v) break;
        }
        ++r.count;
      }
      int done_low = low[sv];
      frames.pop_back();
      if (!frames.empty()) {
        auto sp = static_cast<std::size_t>(frames.back().first);
        low[sp] = std::min(low[sp], done_low);
      }
    }
  }
  return r;
}

// True per component iff it contains an edge (size > 1 or a self-loop).
inline std::vector<bool> cyclic_components(const std::vector<std::vector<int>>& succ,
                                           const SccResult& sccs) {
  std::vector<int> comp_size(static_cast<std::size_t>(sccs.count), 0);
  for (int c : sccs.comp) comp_size[static_cast<std::size_t>(c)]++;
  std::vector<bool> cyclic(static_cast<std::size_t>(sccs.count), false);
  for (std::size_t v = 0; v < succ.size(); ++v) {
    auto c = static_cast<std::size_t>(sccs.comp[v]);
    if (comp_size[c] > 1) { cyclic[c] = true; continue; }
    for (int w : succ[v])
      if (w == static_cast<int>(v)) cyclic[c] = true;
  }
  return cyclic;
}

}  // namespace internal
}  // namespace musat

#endif  // MUSAT_SRC_SCC_UTIL_HPP
