#include "cflow/eligibility.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace cflow {

namespace {

double snap_to_grid(double w, double unit) {
  double q = w / unit;
  double r = std::nearbyint(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q)))
    return r * unit;
  return std::floor(q) * unit;
}

}  // namespace

FlowState initial_state(const Network& net, const WeightGrid& grid,
                        RuleSet rules) {
  FlowState st;
  st.rules = rules;
  st.grid = grid;
  // the Simple rules run one phase at the base step
  st.scale = rules == RuleSet::Simple ? grid.levels : 0;
  st.flow.assign(net.edge_count(), 0.0);
  st.forward_scale.assign(net.edge_count(), -1);
  st.potential.resize(net.vertex_count());
  for (int v = 0; v < net.vertex_count(); ++v)
    st.potential[v] = grid.upper_units() * net.level(v);
  st.weights.assign(net.edge_count(), 0.0);
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    if (!ed.weight->is_linear()) continue;
    double w = ed.weight->linear_weight();
    st.weights[e] = rules == RuleSet::Simple ? snap_to_grid(w, grid.unit) : w;
  }
  return st;
}

double reduced_gradient(const Network& net, const FlowState& state, int e,
                        double x) {
  const Edge& ed = net.edge(e);
  double w = state.rules == RuleSet::Concave ? ed.weight->gradient(x)
                                             : state.weights[e];
  return w + static_cast<double>(state.potential[ed.tail] -
                                 state.potential[ed.head]) *
                 state.grid.unit;
}

double reduced_gradient(const Network& net, const FlowState& state, int e) {
  return reduced_gradient(net, state, e, state.flow[e]);
}

EligibleGraph build_eligible_graph(const Network& net, const FlowState& state) {
  if (static_cast<int>(state.flow.size()) != net.edge_count() ||
      static_cast<int>(state.potential.size()) != net.vertex_count())
    throw std::logic_error("flow state does not match the network");

  EligibleGraph g;
  g.vertex_count = net.vertex_count();
  g.source = net.source();
  g.sink = net.sink();
  g.out.assign(g.vertex_count, {});
  const double tol = flow_tolerance(net);
  const double step = state.step();

  auto add = [&](int e, bool forward, double cap) {
    const Edge& ed = net.edge(e);
    EligibleArc arc;
    arc.edge = e;
    arc.forward = forward;
    arc.from = forward ? ed.tail : ed.head;
    arc.to = forward ? ed.head : ed.tail;
    arc.capacity = cap;
    g.out[arc.from].push_back(static_cast<int>(g.arcs.size()));
    g.arcs.push_back(arc);
    (forward ? g.forward_count : g.backward_count)++;
  };

  // forward arcs in edge order
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    double x = state.flow[e];
    switch (state.rules) {
      case RuleSet::Simple:
        if (x == 0.0 && reduced_gradient(net, state, e) == step)
          add(e, true, 1.0);
        break;
      case RuleSet::Scaling:
        if (ed.capacity - x > tol && reduced_gradient(net, state, e) >= step)
          add(e, true, ed.capacity - x);
        break;
      case RuleSet::Concave: {
        double shift = static_cast<double>(state.potential[ed.tail] -
                                           state.potential[ed.head]) *
                       state.grid.unit;
        double cap = ed.weight->forward_headroom(x, step - shift);
        if (cap > tol) add(e, true, cap);
        break;
      }
    }
  }
  // backward arcs in reverse edge order, after all forward arcs, so the
  // highest-weight parallel piece of a multiedge expansion empties last
  for (int e = net.edge_count() - 1; e >= 0; --e) {
    const Edge& ed = net.edge(e);
    double x = state.flow[e];
    switch (state.rules) {
      case RuleSet::Simple:
        if (x == 1.0 && reduced_gradient(net, state, e) == 0.0)
          add(e, false, 1.0);
        break;
      case RuleSet::Scaling:
        if (x > tol && reduced_gradient(net, state, e) <= 0.0)
          add(e, false, x);
        break;
      case RuleSet::Concave: {
        double shift = static_cast<double>(state.potential[ed.tail] -
                                           state.potential[ed.head]) *
                       state.grid.unit;
        double cap = ed.weight->backward_headroom(x, -shift);
        if (cap > tol) add(e, false, cap);
        break;
      }
    }
  }

  g.reachable.assign(g.vertex_count, 0);
  std::deque<int> queue{g.source};
  g.reachable[g.source] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int a : g.out[v]) {
      int to = g.arcs[a].to;
      if (!g.reachable[to]) {
        g.reachable[to] = 1;
        queue.push_back(to);
      }
    }
  }
  return g;
}

}  // namespace cflow
