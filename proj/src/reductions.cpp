#include "cflow/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace cflow {

namespace {

struct Builder {
  RawNetwork raw;
  std::vector<std::string> entities;
  double carrier_floor = std::numeric_limits<double>::infinity();
  double carrier_ceil = 0.0;
  long aux_count = 0;
  double aux_cap_total = 0.0;

  void carrier(const std::string& u, const std::string& v, WeightPtr w,
               const std::string& entity) {
    RawEdge e;
    e.tail = u;
    e.head = v;
    e.capacity = w->cap();
    e.weight = std::move(w);
    carrier_floor = std::min(carrier_floor, e.weight->min_gradient());
    carrier_ceil = std::max(carrier_ceil, e.weight->max_gradient());
    raw.edges.push_back(std::move(e));
    entities.push_back(entity);
  }

  // weight filled in once the aux weight is known
  void aux(const std::string& u, const std::string& v, double cap) {
    RawEdge e;
    e.tail = u;
    e.head = v;
    e.capacity = cap;
    raw.edges.push_back(std::move(e));
    entities.push_back("aux");
    ++aux_count;
    aux_cap_total += cap;
  }

  ReductionMap finish(double eps, double aux_weight) {
    if (!(carrier_floor > 0.0))
      throw InputError("application weights must be positive");
    double aux_w = aux_weight;
    if (aux_w < 0.0)
      aux_w = aux_count > 0 ? eps * carrier_floor / static_cast<double>(aux_count)
                            : 0.0;
    for (size_t i = 0; i < raw.edges.size(); ++i) {
      if (raw.edges[i].weight) continue;
      if (aux_w > 0.0)
        raw.edges[i].weight = make_linear(aux_w, raw.edges[i].capacity);
      else
        raw.edges[i].weight = make_linear(0.0, raw.edges[i].capacity);
    }
    if (aux_w > 0.0)
      raw.declared_bounds = {{std::min(aux_w, carrier_floor), carrier_ceil}};

    ReductionMap map;
    map.network = validate_and_level(raw);
    map.aux_weight = aux_w;
    map.aux_slack = aux_w * aux_cap_total;
    map.transform = ObjectiveTransform::Identity;
    // pruning may drop edges; re-align the entity list
    if (map.network.edge_count() != static_cast<int>(entities.size())) {
      std::vector<std::string> kept;
      size_t j = 0;
      for (int e = 0; e < map.network.edge_count(); ++e) {
        const Edge& ned = map.network.edge(e);
        while (j < raw.edges.size() &&
               !(raw.edges[j].tail == map.network.name(ned.tail) &&
                 raw.edges[j].head == map.network.name(ned.head) &&
                 raw.edges[j].capacity == ned.capacity))
          ++j;
        kept.push_back(entities[j++]);
      }
      map.edge_entity = std::move(kept);
    } else {
      map.edge_entity = std::move(entities);
    }
    return map;
  }
};

}  // namespace

double ReductionMap::application_objective(
    const std::vector<double>& flow) const {
  double total = 0.0;
  for (int e = 0; e < network.edge_count(); ++e) {
    if (edge_entity[e] == "aux") continue;
    total += network.edge(e).weight->value(
        std::min(flow[e], network.edge(e).capacity));
  }
  return transform == ObjectiveTransform::NegateCost ? -total : total;
}

ReductionMap assignment_to_network(const std::vector<long>& left_caps,
                                   const std::vector<long>& right_caps,
                                   const std::vector<AssignmentPair>& pairs,
                                   double eps, double aux_weight) {
  if (pairs.empty()) throw InputError("empty pair set");
  for (long c : left_caps)
    if (c <= 0) throw InputError("side capacities must be positive");
  for (long c : right_caps)
    if (c <= 0) throw InputError("side capacities must be positive");

  Builder b;
  auto lname = [](int i) { return "l" + std::to_string(i); };
  auto rname = [](int j) { return "r" + std::to_string(j); };
  for (size_t i = 0; i < left_caps.size(); ++i)
    b.aux("s", lname(static_cast<int>(i) + 1),
          static_cast<double>(left_caps[i]));
  for (const AssignmentPair& p : pairs) {
    if (p.left < 1 || p.left > static_cast<int>(left_caps.size()) ||
        p.right < 1 || p.right > static_cast<int>(right_caps.size()))
      throw InputError("pair indices out of range");
    b.carrier(lname(p.left), rname(p.right), p.utility,
              "pair:" + std::to_string(p.left) + ":" + std::to_string(p.right));
  }
  for (size_t j = 0; j < right_caps.size(); ++j)
    b.aux(rname(static_cast<int>(j) + 1), "t",
          static_cast<double>(right_caps[j]));
  return b.finish(eps, aux_weight);
}

ReductionMap chained_matching_to_network(const std::vector<ChainEdgeXY>& xy,
                                         const std::vector<ChainEdgeYZ>& yz,
                                         double eps, double aux_weight) {
  if (xy.empty() || yz.empty()) throw InputError("empty edge set");

  Builder b;
  std::set<std::string> xs, ys, zs;
  for (const auto& e : xy) {
    xs.insert(e.x);
    ys.insert(e.y);
  }
  for (const auto& e : yz) {
    ys.insert(e.y);
    zs.insert(e.z);
  }
  for (const std::string& x : xs) b.aux("s", "x:" + x, 1.0);
  for (const std::string& y : ys) b.aux("y:" + y + ":in", "y:" + y + ":out", 1.0);
  for (const auto& e : xy)
    b.carrier("x:" + e.x, "y:" + e.y + ":in", make_linear(e.w, 1.0),
              "xy:" + e.x + ":" + e.y);
  for (const auto& e : yz)
    b.carrier("y:" + e.y + ":out", "z:" + e.z, make_linear(e.w, 1.0),
              "yz:" + e.y + ":" + e.z);
  for (const std::string& z : zs) b.aux("z:" + z, "t", 1.0);
  return b.finish(eps, aux_weight);
}

ReductionMap scheduling_to_network(const std::vector<Job>& jobs,
                                   const std::vector<long>& day_caps,
                                   double eps, double aux_weight) {
  const int days = static_cast<int>(day_caps.size());
  if (days < 1) throw InputError("need at least one day");
  if (jobs.empty()) throw InputError("empty job set");
  for (long u : day_caps)
    if (u <= 0) throw InputError("day capacities must be positive");

  Builder b;
  auto day = [](int d) { return "d" + std::to_string(d); };
  std::vector<int> ending(days + 1, 0);
  for (const Job& j : jobs) {
    if (j.start < 1 || j.end < j.start || j.end > days)
      throw InputError("job window outside day range");
    if (!(j.gain > 0.0)) throw InputError("job gains must be positive");
    ++ending[j.end];
  }
  for (size_t k = 0; k < jobs.size(); ++k) {
    std::string jn = "job" + std::to_string(k + 1);
    b.aux("s", jn, 1.0);
    b.carrier(jn, day(jobs[k].start), make_linear(jobs[k].gain, 1.0),
              "job:" + std::to_string(k + 1));
    b.aux(jn, day(jobs[k].end), 1.0);  // skip lane for an undone job
  }
  for (int d = 1; d < days; ++d)
    b.aux(day(d), day(d + 1), static_cast<double>(day_caps[d - 1]));
  for (int d = 1; d <= days; ++d)
    if (ending[d] > 0) b.aux(day(d), "t", static_cast<double>(ending[d]));
  return b.finish(eps, aux_weight);
}

ReductionMap mincost_with_reward(const Network& cost_net, double reward) {
  if (!(reward > 0.0)) throw InputError("reward must be positive");
  if (!cost_net.all_linear())
    throw InputError("cost network must have linear costs");

  RawNetwork raw;
  raw.signed_mode = true;
  std::vector<std::string> entities;

  auto rename = [&](int v) {
    return v == cost_net.sink() ? std::string("thub") : cost_net.name(v);
  };

  double cost_floor = std::numeric_limits<double>::infinity();
  double cost_ceil = 0.0;
  for (int e = 0; e < cost_net.edge_count(); ++e) {
    const Edge& ed = cost_net.edge(e);
    double q = ed.weight->linear_weight();
    if (!(q > 0.0)) throw InputError("costs must be positive");
    cost_floor = std::min(cost_floor, q);
    cost_ceil = std::max(cost_ceil, q);
    RawEdge re;
    re.tail = rename(ed.tail);
    re.head = rename(ed.head);
    re.capacity = ed.capacity;
    re.weight = make_linear(-q, ed.capacity);
    raw.edges.push_back(std::move(re));
    entities.push_back("edge:" + std::to_string(e));
  }
  // reward edge; any source cut bounds the usable capacity
  double reward_cap = 0.0;
  for (int e : cost_net.out_edges(cost_net.source()))
    reward_cap += cost_net.edge(e).capacity;
  {
    RawEdge re;
    re.tail = "thub";
    re.head = "t";
    re.capacity = reward_cap;
    re.weight = make_linear(reward, reward_cap);
    raw.edges.push_back(std::move(re));
    entities.push_back("reward");
  }
  raw.declared_bounds = {{std::min(cost_floor, reward),
                          std::max(cost_ceil, reward)}};
  raw.source_name = cost_net.name(cost_net.source());

  ReductionMap map;
  map.network = validate_and_level(raw);
  map.edge_entity = std::move(entities);
  map.transform = ObjectiveTransform::NegateCost;
  if (map.network.edge_count() != static_cast<int>(map.edge_entity.size()))
    throw InputError("cost network lost edges in the reward reduction");
  return map;
}

ReductionMap multisource_concave_to_network(
    const RawNetwork& interior, const std::vector<SourceSpec>& sources,
    double eps, double aux_weight) {
  if (sources.empty()) throw InputError("need at least one source");

  Builder b;
  std::map<std::string, double> out_cap;
  for (const RawEdge& e : interior.edges) {
    if (e.tail == "s" || e.head == "s")
      throw InputError("the interior network must not use the reserved "
                       "super-source name 's'");
    out_cap[e.tail] += e.capacity;
    b.aux(e.tail, e.head, e.capacity);
  }
  for (const SourceSpec& src : sources) {
    if (!out_cap.count(src.name))
      throw InputError("source '" + src.name + "' has no outgoing edges");
    double expect = out_cap[src.name];
    if (std::abs(src.utility->cap() - expect) > 1e-9 * (1.0 + expect))
      throw InputError("utility for source '" + src.name +
                       "' must cover capacity " + std::to_string(expect));
    b.carrier("s", src.name, src.utility, "source:" + src.name);
  }
  return b.finish(eps, aux_weight);
}

}  // namespace cflow
