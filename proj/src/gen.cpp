#include "cflow/gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace cflow {
namespace gen {

namespace {

// explicit helpers keep the streams identical across standard libraries
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

WeightPtr draw_weight(std::mt19937_64& rng, const DagSpec& spec, double cap,
                      bool carrier_negative) {
  switch (spec.family) {
    case Family::Linear:
      return make_linear(draw_int(rng, spec.w_low, spec.w_high), cap);
    case Family::SignedLinear: {
      double w = draw_int(rng, spec.w_low, spec.w_high);
      return make_linear(carrier_negative ? -w : w, cap);
    }
    case Family::PwlGrid: {
      // strictly decreasing multiples of the grid unit over dyadic cuts
      long levels = std::lround((spec.w_high - spec.w_low) / spec.grid_unit);
      int segments = std::min<long>(1 + draw(rng, 3), levels + 1);
      std::set<long> picks;
      while (static_cast<int>(picks.size()) < segments)
        picks.insert(draw(rng, levels + 1));
      std::vector<double> grads;
      for (long p : picks) grads.push_back(spec.w_low + p * spec.grid_unit);
      std::reverse(grads.begin(), grads.end());
      std::vector<double> cuts;
      static const double fractions[] = {0.25, 0.5, 0.75};
      std::set<double> chosen;
      while (static_cast<int>(chosen.size()) < segments - 1)
        chosen.insert(fractions[draw(rng, 3)]);
      for (double f : chosen) cuts.push_back(f * cap);
      cuts.push_back(cap);
      return make_piecewise(std::move(cuts), std::move(grads), cap);
    }
    case Family::Quadratic: {
      double a = draw_int(rng, spec.w_low + 1, spec.w_high);
      static const double shares[] = {0.25, 0.5, 0.75, 1.0};
      double b = shares[draw(rng, 4)] * (a - spec.w_low) / (2.0 * cap);
      return make_quadratic(a, b, cap);
    }
  }
  return nullptr;
}

}  // namespace

Network random_dag(const DagSpec& spec) {
  std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ull + 1);
  const int depth = std::max(1, spec.depth);

  // layer sizes: one vertex per interior layer, spread the rest randomly
  std::vector<int> layer_size(depth + 1, 1);  // layer 0 = s, depth = t
  int spare = std::max(0, spec.max_interior - (depth - 1));
  for (int i = 0; i < spare; ++i) {
    if (depth < 2) break;
    ++layer_size[1 + static_cast<int>(draw(rng, depth - 1))];
  }

  std::vector<std::vector<std::string>> layers(depth + 1);
  layers[0] = {"s"};
  layers[depth] = {"t"};
  int id = 0;
  for (int l = 1; l < depth; ++l)
    for (int i = 0; i < layer_size[l]; ++i)
      layers[l].push_back("v" + std::to_string(id++));

  RawNetwork raw;
  raw.signed_mode = spec.family == Family::SignedLinear;
  raw.declared_bounds = {{static_cast<double>(spec.w_low),
                          static_cast<double>(spec.w_high)}};

  auto add_edge = [&](const std::string& u, const std::string& v) {
    RawEdge e;
    e.tail = u;
    e.head = v;
    e.capacity = spec.unit_caps
                     ? 1.0
                     : static_cast<double>(draw_int(rng, spec.cap_low,
                                                    spec.cap_high));
    e.weight = draw_weight(rng, spec, e.capacity, draw(rng, 4) == 0);
    raw.edges.push_back(std::move(e));
  };

  // skeleton: every interior vertex gets a predecessor and a successor,
  // which also lays a full-depth spine
  for (int l = 1; l <= depth; ++l)
    for (const std::string& v : layers[l]) {
      if (l == depth && layers[l - 1].empty()) break;
      add_edge(layers[l - 1][draw(rng, layers[l - 1].size())], v);
    }
  for (int l = 1; l < depth; ++l)
    for (const std::string& v : layers[l])
      add_edge(v, layers[l + 1][draw(rng, layers[l + 1].size())]);

  for (int i = 0; i < spec.extra_edges; ++i) {
    int lu = static_cast<int>(draw(rng, depth));  // 0..depth-1
    int lv = spec.strict_layered
                 ? lu + 1
                 : lu + 1 + static_cast<int>(draw(rng, depth - lu));
    const auto& from = layers[lu];
    const auto& to = layers[lv];
    add_edge(from[draw(rng, from.size())], to[draw(rng, to.size())]);
  }

  return validate_and_level(raw);
}

std::vector<double> random_conserving_flow(const Network& net,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0xD1B54A32D192ED03ull + 7);
  std::vector<double> flow(net.edge_count(), 0.0);
  int attempts = 2 + static_cast<int>(draw(rng, 6));
  for (int round = 0; round < attempts; ++round) {
    // random walk to the sink (every vertex keeps an outgoing edge)
    std::vector<int> path;
    int v = net.source();
    while (v != net.sink()) {
      const auto& out = net.out_edges(v);
      int e = out[draw(rng, out.size())];
      path.push_back(e);
      v = net.edge(e).head;
    }
    double room = std::numeric_limits<double>::infinity();
    for (int e : path)
      room = std::min(room, net.edge(e).capacity - flow[e]);
    if (room < 1.0) continue;
    double amount = 1 + static_cast<double>(draw(rng, static_cast<std::uint64_t>(room)));
    for (int e : path) flow[e] += amount;
  }
  return flow;
}

std::vector<std::int64_t> random_grid_potentials(const Network& net,
                                                 std::uint64_t seed,
                                                 std::int64_t unit_count,
                                                 std::int64_t magnitude) {
  std::mt19937_64 rng(seed * 0xA0761D6478BD642Full + 3);
  std::vector<std::int64_t> p(net.vertex_count());
  for (int v = 0; v < net.vertex_count(); ++v)
    p[v] = unit_count * (static_cast<std::int64_t>(draw(rng, 2 * magnitude + 1)) -
                         magnitude);
  p[net.sink()] = p[net.source()];
  return p;
}

}  // namespace gen
}  // namespace cflow
