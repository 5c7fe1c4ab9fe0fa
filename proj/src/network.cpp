#include "cflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace cflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  if (line > 0)
    throw InputError("line " + std::to_string(line) + ": " + msg);
  throw InputError(msg);
}

void validate_edge_weight(const RawEdge& e, bool signed_mode,
                          const std::optional<std::pair<double, double>>& bounds) {
  const WeightFunction& wf = *e.weight;
  double lo = wf.min_gradient();
  double hi = wf.max_gradient();
  if (signed_mode && wf.is_linear()) {
    double w = wf.linear_weight();
    if (bounds) {
      if (std::abs(w) < bounds->first - 1e-12 ||
          std::abs(w) > bounds->second + 1e-12)
        fail_line(e.line, "weight outside declared bounds");
    }
    return;
  }
  if (wf.is_linear() && wf.linear_weight() < 0.0 && !signed_mode)
    fail_line(e.line, "negative weight requires signed mode");
  if (lo < 0.0)
    fail_line(e.line, signed_mode
                          ? "negative gradients allowed for linear edges only"
                          : "negative weight requires signed mode");
  if (bounds) {
    if (lo < bounds->first - 1e-12 || hi > bounds->second + 1e-12)
      fail_line(e.line, "weight outside declared bounds");
  }
}

}  // namespace

Network validate_and_level(const RawNetwork& raw) {
  if (raw.source_name == raw.sink_name)
    throw InputError("source and sink must differ");

  // intern vertex names in first-seen order
  std::vector<std::string> names;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& token) {
    auto it = index.find(token);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(token);
    index.emplace(token, id);
    return id;
  };
  intern(raw.source_name);
  intern(raw.sink_name);

  struct E {
    int tail, head, line;
    const RawEdge* raw;
  };
  std::vector<E> edges;
  edges.reserve(raw.edges.size());
  for (const RawEdge& re : raw.edges) {
    if (!re.weight) fail_line(re.line, "edge has no weight function");
    if (!(re.capacity > 0.0) || !std::isfinite(re.capacity))
      fail_line(re.line, "capacity must be positive");
    if (re.capacity != re.weight->cap())
      fail_line(re.line, "weight function domain must match the capacity");
    validate_edge_weight(re, raw.signed_mode, raw.declared_bounds);
    edges.push_back({intern(re.tail), intern(re.head), re.line, &re});
  }

  if (raw.declared_vertices >= 0 &&
      raw.declared_vertices != static_cast<int>(names.size()))
    throw InputError("header vertex count " +
                     std::to_string(raw.declared_vertices) +
                     " does not match the " + std::to_string(names.size()) +
                     " distinct vertices");
  if (raw.declared_edges >= 0 &&
      raw.declared_edges != static_cast<int>(edges.size()))
    throw InputError("header edge count mismatch");

  const int n = static_cast<int>(names.size());
  std::vector<std::vector<int>> out(n), in(n);
  for (size_t e = 0; e < edges.size(); ++e) {
    out[edges[e].tail].push_back(static_cast<int>(e));
    in[edges[e].head].push_back(static_cast<int>(e));
  }

  // cycle check over the full graph (Kahn); name an offending edge
  {
    std::vector<int> indeg(n, 0);
    for (const E& e : edges) ++indeg[e.head];
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) queue.push_back(v);
    int seen = 0;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      ++seen;
      for (int e : out[v])
        if (--indeg[edges[e].head] == 0) queue.push_back(edges[e].head);
    }
    if (seen != n) {
      // every unprocessed vertex keeps an unprocessed predecessor; walking
      // predecessors must close a cycle
      int v = 0;
      while (indeg[v] == 0) ++v;
      std::vector<char> mark(n, 0);
      int via = -1;
      while (!mark[v]) {
        mark[v] = 1;
        for (int e : in[v]) {
          if (indeg[edges[e].tail] > 0) {
            via = e;
            v = edges[e].tail;
            break;
          }
        }
      }
      fail_line(edges[via].line, "cycle detected involving edge " +
                                     names[edges[via].tail] + "->" +
                                     names[edges[via].head]);
    }
  }

  // keep only vertices on some source-sink path
  std::vector<char> from_s(n, 0), to_t(n, 0);
  {
    std::deque<int> queue{0};
    from_s[0] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : out[v])
        if (!from_s[edges[e].head]) {
          from_s[edges[e].head] = 1;
          queue.push_back(edges[e].head);
        }
    }
    queue = {1};
    to_t[1] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : in[v])
        if (!to_t[edges[e].tail]) {
          to_t[edges[e].tail] = 1;
          queue.push_back(edges[e].tail);
        }
    }
  }
  std::vector<int> keep(n, -1);
  Network net;
  for (int v = 0; v < n; ++v) {
    if (from_s[v] && to_t[v]) {
      keep[v] = static_cast<int>(net.names_.size());
      net.names_.push_back(names[v]);
    }
  }
  if (keep[0] < 0 || keep[1] < 0) throw InputError("empty network");
  net.source_ = keep[0];
  net.sink_ = keep[1];

  for (const E& e : edges) {
    if (keep[e.tail] < 0 || keep[e.head] < 0) continue;
    net.edges_.push_back(
        {keep[e.tail], keep[e.head], e.raw->capacity, e.raw->weight});
  }
  if (net.edges_.empty()) throw InputError("empty network");

  const int kept = static_cast<int>(net.names_.size());
  net.out_.assign(kept, {});
  net.in_.assign(kept, {});
  for (size_t e = 0; e < net.edges_.size(); ++e) {
    net.out_[net.edges_[e].tail].push_back(static_cast<int>(e));
    net.in_[net.edges_[e].head].push_back(static_cast<int>(e));
  }

  // longest-path levels over a topological order
  {
    std::vector<int> indeg(kept, 0), order;
    for (const Edge& e : net.edges_) ++indeg[e.head];
    std::deque<int> queue;
    for (int v = 0; v < kept; ++v)
      if (indeg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int e : net.out_[v])
        if (--indeg[net.edges_[e].head] == 0)
          queue.push_back(net.edges_[e].head);
    }
    net.level_.assign(kept, 0);
    for (int v : order)
      for (int e : net.out_[v]) {
        int h = net.edges_[e].head;
        net.level_[h] = std::max(net.level_[h], net.level_[v] + 1);
      }
  }

  net.signed_mode_ = raw.signed_mode;
  net.declared_bounds_ = raw.declared_bounds;
  if (raw.declared_bounds) {
    net.bounds_ = *raw.declared_bounds;
    if (!(net.bounds_.first > 0.0) || net.bounds_.second < net.bounds_.first)
      throw InputError("declared bounds must satisfy 0 < w_min <= w_max");
  } else {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Edge& e : net.edges_) {
      double a = e.weight->min_gradient(), b = e.weight->max_gradient();
      if (net.signed_mode_ && e.weight->is_linear())
        a = b = std::abs(e.weight->linear_weight());
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    net.bounds_ = {lo, hi};
  }
  return net;
}

bool Network::all_linear() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight->is_linear(); });
}

bool Network::all_unit_capacity() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.capacity == 1.0; });
}

double Network::max_capacity() const {
  double m = 0.0;
  for (const Edge& e : edges_) m = std::max(m, e.capacity);
  return m;
}

double Network::total_capacity() const {
  double m = 0.0;
  for (const Edge& e : edges_) m += e.capacity;
  return m;
}

double flow_tolerance(const Network& net) { return 1e-9 * net.max_capacity(); }

std::string Network::serialize() const {
  std::ostringstream os;
  os << "net " << vertex_count() << " " << edge_count();
  if (signed_mode_) os << " signed";
  os << "\n";
  if (declared_bounds_)
    os << "bounds " << fmt(declared_bounds_->first) << " "
       << fmt(declared_bounds_->second) << "\n";
  for (const Edge& e : edges_)
    os << "e " << names_[e.tail] << " " << names_[e.head] << " "
       << fmt(e.capacity) << " " << e.weight->spec() << "\n";
  return os.str();
}

namespace {

WeightPtr parse_weight_spec(std::istringstream& in, double cap, int line) {
  std::string family;
  if (!(in >> family)) fail_line(line, "missing weight spec");
  auto want = [&](const char* what) -> double {
    double v;
    if (!(in >> v)) throw InputError(std::string("missing ") + what);
    return v;
  };
  auto build = [&]() -> WeightPtr {
    if (family == "lin") return make_linear(want("weight"), cap);
    if (family == "quad") {
      double a = want("quad coefficient");
      double b = want("quad curvature");
      return make_quadratic(a, b, cap);
    }
    if (family == "pwl") {
      int k = static_cast<int>(want("segment count"));
      if (k < 1 || k > 1 << 20) throw InputError("bad pwl segment count");
      std::vector<double> bp(k), g(k);
      for (int i = 0; i < k; ++i) {
        bp[i] = want("pwl breakpoint");
        g[i] = want("pwl gradient");
      }
      return make_piecewise(std::move(bp), std::move(g), cap);
    }
    throw InputError("unknown weight family tag '" + family + "'");
  };
  try {
    return build();
  } catch (const InputError& err) {
    fail_line(line, err.what());
  }
}

}  // namespace

Network parse_network(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  RawNetwork raw;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "net") {
      if (saw_header) fail_line(lineno, "duplicate net header");
      saw_header = true;
      if (!(ls >> raw.declared_vertices >> raw.declared_edges))
        fail_line(lineno, "malformed net header");
      std::string flag;
      if (ls >> flag) {
        if (flag != "signed") fail_line(lineno, "unknown header flag '" + flag + "'");
        raw.signed_mode = true;
      }
    } else if (tag == "bounds") {
      double lo, hi;
      if (!(ls >> lo >> hi)) fail_line(lineno, "malformed bounds line");
      raw.declared_bounds = {lo, hi};
    } else if (tag == "e") {
      RawEdge e;
      e.line = lineno;
      if (!(ls >> e.tail >> e.head >> e.capacity))
        fail_line(lineno, "malformed edge line");
      if (!(e.capacity > 0.0)) fail_line(lineno, "capacity must be positive");
      e.weight = parse_weight_spec(ls, e.capacity, lineno);
      std::string extra;
      if (ls >> extra) fail_line(lineno, "trailing tokens on edge line");
      raw.edges.push_back(std::move(e));
    } else {
      fail_line(lineno, "unknown line tag '" + tag + "'");
    }
  }
  if (!saw_header) throw InputError("missing net header");
  return validate_and_level(raw);
}

Network parse_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_network(os.str());
}

Network pad_gradients(const Network& net, double eps, PaddingReport* report) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  const double m = net.edge_count();
  double total_cap = 0.0;
  for (const Edge& e : net.edges()) {
    double rounded = std::round(e.capacity);
    if (std::abs(e.capacity - rounded) > 1e-9 || rounded < 1.0)
      throw InputError("gradient padding requires integer capacities");
    total_cap += rounded;
    if (e.weight->min_gradient() < 0.0 || !(e.weight->value(e.capacity) > 0.0))
      throw InputError("non-monotone f_e: padding requires non-negative "
                       "increasing weight functions");
  }

  const double knee = eps / (m * m);
  double reference = 0.0;  // largest f_e at the knee
  for (const Edge& e : net.edges())
    reference = std::max(reference, e.weight->value(std::min(knee, e.capacity)));
  const double bump = eps * reference / total_cap;

  RawNetwork raw;
  raw.signed_mode = false;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Edge& e : net.edges()) {
    RawEdge re;
    re.tail = net.name(e.tail);
    re.head = net.name(e.head);
    re.capacity = e.capacity;
    const WeightFunction& wf = *e.weight;
    if (wf.is_linear()) {
      // the ramp of a linear function is the function itself
      re.weight = make_linear(wf.linear_weight() + bump, e.capacity);
    } else {
      re.weight = make_padded(e.weight, bump, knee);
    }
    lo = std::min(lo, re.weight->min_gradient());
    hi = std::max(hi, re.weight->max_gradient());
    raw.edges.push_back(std::move(re));
  }
  raw.declared_bounds = {lo, hi};
  raw.source_name = net.name(net.source());
  raw.sink_name = net.name(net.sink());

  if (report) {
    report->reference = reference;
    report->bump = bump;
    report->knee = knee;
    report->lower = lo;
    report->upper = hi;
    // every gradient is >= bump and every ramp slope is at most
    // (reference + knee * bump) / knee, giving this explicit ratio bound
    report->ratio_bound = m * m * total_cap / (eps * eps) + 1.0;
  }
  return validate_and_level(raw);
}

}  // namespace cflow
