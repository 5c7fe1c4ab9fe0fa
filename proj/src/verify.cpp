#include "cflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace cflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double floor_to_grid(double w, double unit) {
  double q = w / unit;
  double r = std::nearbyint(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return r * unit;
  return std::floor(q) * unit;
}

}  // namespace

ExpandedNetwork expand_multiedges(const Network& net, double unit,
                                  long max_edges) {
  if (!(unit > 0.0)) throw InputError("expansion needs a positive grid unit");

  RawNetwork raw;
  raw.signed_mode = false;
  if (net.has_declared_bounds())
    raw.declared_bounds = {net.weight_lower(), net.weight_upper()};
  raw.source_name = net.name(net.source());
  raw.sink_name = net.name(net.sink());

  ExpandedNetwork out;
  out.pieces.resize(net.edge_count());
  long total = 0;
  std::vector<std::vector<std::pair<double, double>>> piece_specs(
      net.edge_count());  // (weight, capacity)

  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    const WeightFunction& wf = *ed.weight;
    double top = floor_to_grid(wf.gradient(0.0), unit);
    double bottom = floor_to_grid(wf.gradient(ed.capacity), unit);
    long k = std::llround((top - bottom) / unit) + 1;
    if ((total += k) > max_edges)
      throw InputError("multiedge expansion exceeds the edge cap of " +
                       std::to_string(max_edges));
    double prev = 0.0;
    const double drop_tol = 1e-12 * ed.capacity;
    for (long j = 0; j < k; ++j) {
      double w = top - static_cast<double>(j) * unit;
      // upper boundary of this piece: all mass with gradient >= w sits
      // below it
      double boundary =
          j + 1 == k ? ed.capacity : wf.forward_headroom(0.0, w);
      double cap = boundary - prev;
      if (cap > drop_tol) piece_specs[e].push_back({w, cap});
      prev = std::max(prev, boundary);
    }
    if (piece_specs[e].empty())
      throw InputError("edge expands to no pieces; capacity too small");
  }

  int next_id = 0;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    for (auto& [w, cap] : piece_specs[e]) {
      RawEdge re;
      re.tail = net.name(ed.tail);
      re.head = net.name(ed.head);
      re.capacity = cap;
      re.weight = make_linear(w, cap);
      raw.edges.push_back(std::move(re));
      out.pieces[e].push_back(next_id++);
    }
  }
  out.network = validate_and_level(raw);
  if (out.network.edge_count() != next_id)
    throw std::logic_error("expansion must not prune anything");
  return out;
}

std::vector<double> well_ordered_fill(const ExpandedNetwork& expanded,
                                      int original_edge, double x) {
  std::vector<double> fill;
  for (int id : expanded.pieces[original_edge]) {
    double cap = expanded.network.edge(id).capacity;
    double take = std::min(x, cap);
    fill.push_back(take);
    x -= take;
  }
  if (x > 1e-9)
    throw InputError("flow exceeds the expanded capacity");
  return fill;
}

OracleCaps OracleCaps::from_env() {
  OracleCaps caps;
  if (const char* env = std::getenv("CFLOW_ORACLE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) {
      caps.max_edges = v;
      caps.max_total_capacity = static_cast<double>(v);
    }
  }
  return caps;
}

OracleResult exact_linear_opt(const Network& net, const OracleCaps& caps) {
  if (!net.all_linear())
    throw InputError("the exact oracle requires linear weights");
  if (net.edge_count() > caps.max_edges)
    throw InputError("oracle cap exceeded: " + std::to_string(net.edge_count()) +
                     " edges > " + std::to_string(caps.max_edges));
  if (net.total_capacity() > caps.max_total_capacity)
    throw InputError("oracle cap exceeded: total capacity " +
                     fmt(net.total_capacity()) + " > " +
                     fmt(caps.max_total_capacity));

  const int n = net.vertex_count();
  const int m = net.edge_count();
  std::vector<double> weight(m), flow(m, 0.0);
  double scale = 1.0;
  for (int e = 0; e < m; ++e) {
    weight[e] = net.edge(e).weight->linear_weight();
    scale = std::max(scale, std::abs(weight[e]));
  }
  const double ctol = flow_tolerance(net);
  const double wtol = 1e-12 * scale * n;

  OracleResult result;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  while (true) {
    if (++result.augmentations > caps.max_augmentations)
      throw InputError("oracle cap exceeded: too many augmentations");

    // longest path in the residual graph; negative arcs are fine because
    // maximum-weight augmentation never creates a positive cycle, and the
    // hop count tie-break keeps the predecessor structure acyclic
    std::vector<double> dist(n, neg_inf);
    std::vector<int> hops(n, 0), pred_edge(n, -1);
    std::vector<char> pred_forward(n, 0);
    dist[net.source()] = 0.0;

    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (int e = 0; e < m; ++e) {
        const Edge& ed = net.edge(e);
        if (dist[ed.tail] > neg_inf &&
            ed.capacity - flow[e] > ctol) {  // forward residual arc
          double cand = dist[ed.tail] + weight[e];
          if (cand > dist[ed.head] + wtol ||
              (cand > dist[ed.head] - wtol && hops[ed.tail] + 1 < hops[ed.head])) {
            dist[ed.head] = cand;
            hops[ed.head] = hops[ed.tail] + 1;
            pred_edge[ed.head] = e;
            pred_forward[ed.head] = 1;
            changed = true;
          }
        }
        if (dist[ed.head] > neg_inf && flow[e] > ctol) {  // backward
          double cand = dist[ed.head] - weight[e];
          if (cand > dist[ed.tail] + wtol ||
              (cand > dist[ed.tail] - wtol && hops[ed.head] + 1 < hops[ed.tail])) {
            dist[ed.tail] = cand;
            hops[ed.tail] = hops[ed.head] + 1;
            pred_edge[ed.tail] = e;
            pred_forward[ed.tail] = 0;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    if (dist[net.sink()] <= wtol) break;  // no profitable path remains

    // walk predecessors and push the bottleneck
    double bottleneck = std::numeric_limits<double>::infinity();
    long guard = 0;
    for (int v = net.sink(); v != net.source();) {
      if (++guard > 4L * n)
        throw std::logic_error("oracle predecessor chain cycles");
      int e = pred_edge[v];
      if (e < 0) throw std::logic_error("broken oracle predecessor chain");
      const Edge& ed = net.edge(e);
      if (pred_forward[v]) {
        bottleneck = std::min(bottleneck, ed.capacity - flow[e]);
        v = ed.tail;
      } else {
        bottleneck = std::min(bottleneck, flow[e]);
        v = ed.head;
      }
    }
    for (int v = net.sink(); v != net.source();) {
      int e = pred_edge[v];
      const Edge& ed = net.edge(e);
      if (pred_forward[v]) {
        flow[e] += bottleneck;
        v = ed.tail;
      } else {
        flow[e] -= bottleneck;
        v = ed.head;
      }
    }
  }

  result.flow = flow;
  result.value = 0.0;
  for (int e = 0; e < m; ++e) result.value += weight[e] * flow[e];
  return result;
}

Certificate certify(const SolveResult& result, const Network& net,
                    const OracleCaps& caps) {
  Certificate cert;
  cert.objective = result.objective;
  const double eps = result.grid.eps;

  switch (result.rules) {
    case RuleSet::Simple:
      cert.bound = 1.0 - eps;
      cert.bound_claimed = true;
      break;
    case RuleSet::Scaling:
      cert.bound = 1.0 - 8.0 * eps;
      cert.bound_claimed = eps < 0.1;
      break;
    case RuleSet::Concave:
      cert.bound = 1.0 - 9.0 * eps;
      cert.bound_claimed = eps < 0.1;
      break;
  }
  if (!cert.bound_claimed)
    cert.note = "eps >= 0.1: approximation bound not claimed; ";

  try {
    OracleResult oracle;
    if (result.rules == RuleSet::Concave) {
      ExpandedNetwork expanded = expand_multiedges(net, result.grid.unit);
      oracle = exact_linear_opt(expanded.network, caps);
      cert.reference_kind = "expansion-lb";
      cert.note += "reference is the below-step expansion optimum, a lower "
                   "bound on the true optimum";
    } else {
      oracle = exact_linear_opt(net, caps);
      cert.reference_kind = "oracle";
    }
    cert.reference = oracle.value;
    cert.certified = true;

    if (net.signed_mode()) {
      cert.signed_mode = true;
      for (int e = 0; e < net.edge_count(); ++e) {
        double part = net.edge(e).weight->linear_weight() * oracle.flow[e];
        (part >= 0.0 ? cert.positive_part : cert.negative_part) += part;
      }
      cert.signed_rhs = (1.0 - 8.0 * eps) * cert.positive_part +
                        (1.0 + 8.0 * eps) * cert.negative_part;
    }
  } catch (const InputError& err) {
    cert.certified = false;
    cert.note += std::string("uncertified: ") + err.what();
    return cert;
  }

  const double slack = 1e-9 * (std::abs(cert.reference) + 1.0);
  cert.ratio = cert.reference > 0.0 ? cert.objective / cert.reference : 1.0;
  if (cert.signed_mode)
    cert.pass = cert.objective >= cert.signed_rhs - slack;
  else
    cert.pass = cert.objective >= cert.bound * cert.reference - slack;
  return cert;
}

}  // namespace cflow
