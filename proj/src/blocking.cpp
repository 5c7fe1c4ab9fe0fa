#include "cflow/blocking.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace cflow {

Augmentation maximal_disjoint_paths(const EligibleGraph& g) {
  for (const EligibleArc& a : g.arcs)
    if (a.capacity != 1.0)
      throw std::logic_error("maximal_disjoint_paths needs unit arcs");

  Augmentation aug;
  aug.arc_flow.assign(g.arcs.size(), 0.0);
  std::vector<size_t> next(g.vertex_count, 0);  // per-vertex arc cursor
  std::vector<char> used(g.arcs.size(), 0);

  std::vector<int> path;  // arc ids from the source to the current vertex
  int v = g.source;
  while (true) {
    if (v == g.sink) {
      for (int a : path) {
        used[a] = 1;
        aug.arc_flow[a] = 1.0;
      }
      aug.paths.push_back({1.0, path});
      aug.value += 1.0;
      path.clear();
      v = g.source;
      continue;
    }
    bool advanced = false;
    while (next[v] < g.out[v].size()) {
      int a = g.out[v][next[v]];
      ++next[v];  // an explored arc is never retried: either used or dead
      if (!used[a]) {
        path.push_back(a);
        v = g.arcs[a].to;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;
    if (path.empty()) break;  // source exhausted
    v = g.arcs[path.back()].from;
    path.pop_back();
  }
  return aug;
}

namespace {

struct Dinic {
  const EligibleGraph& g;
  double zero_tol;
  std::vector<double> remaining;
  std::vector<int> dist;
  std::vector<size_t> cursor;
  Augmentation aug;

  explicit Dinic(const EligibleGraph& graph, double tol)
      : g(graph), zero_tol(tol) {
    remaining.resize(g.arcs.size());
    for (size_t a = 0; a < g.arcs.size(); ++a) remaining[a] = g.arcs[a].capacity;
    aug.arc_flow.assign(g.arcs.size(), 0.0);
  }

  bool layer() {
    dist.assign(g.vertex_count, -1);
    dist[g.source] = 0;
    std::deque<int> queue{g.source};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int a : g.out[v]) {
        int to = g.arcs[a].to;
        if (remaining[a] > zero_tol && dist[to] < 0) {
          dist[to] = dist[v] + 1;
          queue.push_back(to);
        }
      }
    }
    return dist[g.sink] >= 0;
  }

  // depth-first saturation along level-increasing arcs with a per-vertex
  // cursor; pushes whole bottleneck amounts path by path
  bool find_path(std::vector<int>& path) {
    int v = path.empty() ? g.source : g.arcs[path.back()].to;
    while (true) {
      if (v == g.sink) return true;
      bool advanced = false;
      while (cursor[v] < g.out[v].size()) {
        int a = g.out[v][cursor[v]];
        int to = g.arcs[a].to;
        if (remaining[a] > zero_tol && dist[to] == dist[v] + 1) {
          path.push_back(a);
          v = to;
          advanced = true;
          break;
        }
        ++cursor[v];
      }
      if (advanced) continue;
      if (path.empty()) return false;
      int back = path.back();
      path.pop_back();
      v = g.arcs[back].from;
      ++cursor[v];  // the arc we came through leads to a dead end
    }
  }

  void run() {
    const size_t phase_guard = g.arcs.size() + 2;
    size_t phases = 0;
    while (layer()) {
      if (++phases > phase_guard)
        throw std::logic_error("blocking flow failed to terminate");
      cursor.assign(g.vertex_count, 0);
      std::vector<int> path;
      while (find_path(path)) {
        double amount = std::numeric_limits<double>::infinity();
        for (int a : path) amount = std::min(amount, remaining[a]);
        for (int a : path) {
          remaining[a] -= amount;
          aug.arc_flow[a] += amount;
        }
        aug.paths.push_back({amount, path});
        aug.value += amount;
        // resume from the shallowest saturated arc
        size_t keep = 0;
        while (keep < path.size() && remaining[path[keep]] > zero_tol) ++keep;
        path.resize(keep);
      }
    }
  }
};

}  // namespace

Augmentation blocking_flow(const EligibleGraph& g, double zero_tol) {
  Dinic d(g, zero_tol);
  d.run();
  return d.aug;
}

bool is_blocked(const EligibleGraph& g, const Augmentation& aug,
                double zero_tol) {
  std::vector<char> seen(g.vertex_count, 0);
  std::deque<int> queue{g.source};
  seen[g.source] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int a : g.out[v]) {
      if (g.arcs[a].capacity - aug.arc_flow[a] <= zero_tol) continue;
      int to = g.arcs[a].to;
      if (!seen[to]) {
        if (to == g.sink) return false;
        seen[to] = 1;
        queue.push_back(to);
      }
    }
  }
  return true;
}

}  // namespace cflow
