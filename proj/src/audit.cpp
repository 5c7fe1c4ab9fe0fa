#include "cflow/audit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

long AuditReport::violations() const {
  long total = 0;
  for (const AuditCheck& c : checks) total += c.violations;
  return total;
}

AuditCheck& AuditReport::at(const std::string& name) {
  for (AuditCheck& c : checks)
    if (c.name == name) return c;
  checks.push_back({name, 0, 0});
  return checks.back();
}

void AuditReport::merge(const AuditReport& other, const std::string& context) {
  points += other.points;
  for (const AuditCheck& c : other.checks) {
    AuditCheck& mine = at(c.name);
    mine.checked += c.checked;
    mine.violations += c.violations;
  }
  if (first_violation.empty() && !other.first_violation.empty())
    first_violation = context.empty() ? other.first_violation
                                      : context + " " + other.first_violation;
  for (const std::string& f : other.flags) flags.push_back(f);
  flow_tol = std::max(flow_tol, other.flow_tol);
  weight_slack = std::max(weight_slack, other.weight_slack);
}

AuditReport check_invariants(const Network& net, const FlowState& state) {
  AuditReport report;
  report.points = 1;
  report.flow_tol = flow_tolerance(net);
  const bool concave = state.rules == RuleSet::Concave;
  report.weight_slack = concave ? 1e-9 * state.grid.upper : 0.0;

  auto record = [&](const std::string& check, bool ok, int e,
                    const std::string& detail) {
    AuditCheck& c = report.at(check);
    ++c.checked;
    if (ok) return;
    ++c.violations;
    if (report.first_violation.empty()) {
      std::ostringstream os;
      os << "check=" << check;
      if (e >= 0)
        os << " edge=" << net.name(net.edge(e).tail) << "->"
           << net.name(net.edge(e).head) << "#" << e;
      os << " " << detail;
      report.first_violation = os.str();
    }
  };

  const double tol = report.flow_tol;
  const double slack = report.weight_slack;
  const double step = state.step();

  // flow bounds
  for (int e = 0; e < net.edge_count(); ++e) {
    double x = state.flow[e];
    record("capacity", x >= -tol && x <= net.edge(e).capacity + tol, e,
           "x=" + fmt(x) + " cap=" + fmt(net.edge(e).capacity));
  }

  // conservation away from the terminals
  {
    std::vector<double> balance(net.vertex_count(), 0.0);
    for (int e = 0; e < net.edge_count(); ++e) {
      balance[net.edge(e).tail] -= state.flow[e];
      balance[net.edge(e).head] += state.flow[e];
    }
    double ctol = std::max(tol, 1e-12 * (1.0 + net.total_capacity()));
    for (int v = 0; v < net.vertex_count(); ++v) {
      if (v == net.source() || v == net.sink()) continue;
      record("conservation", std::abs(balance[v]) <= ctol, -1,
             "vertex=" + net.name(v) + " balance=" + fmt(balance[v]));
    }
  }

  record("source_potential", state.potential[net.source()] == 0, -1,
         "p_s=" + fmt(state.potential_weight(net.source())));

  {
    const std::int64_t step_units = state.step_units();
    for (int v = 0; v < net.vertex_count(); ++v)
      record("grid", state.potential[v] % step_units == 0, -1,
             "vertex=" + net.name(v) +
                 " p_units=" + std::to_string(state.potential[v]));
  }

  if (state.rules == RuleSet::Simple) {
    for (int e = 0; e < net.edge_count(); ++e) {
      double x = state.flow[e];
      double wp = reduced_gradient(net, state, e);
      if (x == 1.0)
        record("carried_lower", wp >= 0.0, e, "wp=" + fmt(wp));
      if (x == 0.0)
        record("residual_upper", wp <= step, e,
               "wp=" + fmt(wp) + " step=" + fmt(step));
    }
    return report;
  }

  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    double x = state.flow[e];
    int span = net.level_span(e);
    if (x > tol) {
      int pushed_at = state.forward_scale[e];
      if (pushed_at < 0) {
        record("carried_lower", false, e, "positive flow but never pushed");
      } else {
        // lower bound loosens with the age of the last forward push
        double step_then = state.grid.step(pushed_at);
        double bound = -3.0 * span * (step_then - step) - step;
        double wp = concave ? ed.weight->gradient_before(x) +
                                  (state.potential[ed.tail] -
                                   state.potential[ed.head]) *
                                      state.grid.unit
                            : reduced_gradient(net, state, e);
        record("carried_lower", wp >= bound - slack, e,
               "wp=" + fmt(wp) + " bound=" + fmt(bound) +
                   " pushed_at=" + std::to_string(pushed_at));
      }
    }
    if (x < ed.capacity - tol) {
      double wp = reduced_gradient(net, state, e);
      record("residual_upper", wp <= 2.0 * step + slack, e,
             "wp=" + fmt(wp) + " step=" + fmt(step));
    }
  }
  return report;
}

std::pair<double, double> reduced_cost_identity(
    const Network& net, const std::vector<double>& flow,
    const std::vector<double>& potential) {
  if (!net.all_linear())
    throw InputError("reduced-weight identity requires linear weights");
  if (static_cast<int>(flow.size()) != net.edge_count() ||
      static_cast<int>(potential.size()) != net.vertex_count())
    throw InputError("flow/potential sizes do not match the network");

  std::vector<double> balance(net.vertex_count(), 0.0);
  for (int e = 0; e < net.edge_count(); ++e) {
    balance[net.edge(e).tail] -= flow[e];
    balance[net.edge(e).head] += flow[e];
  }
  double ctol = std::max(flow_tolerance(net),
                         1e-12 * (1.0 + net.total_capacity()));
  for (int v = 0; v < net.vertex_count(); ++v) {
    if (v == net.source() || v == net.sink()) continue;
    if (std::abs(balance[v]) > ctol)
      throw InputError("flow is not conserving at vertex " + net.name(v));
  }
  if (potential[net.source()] != potential[net.sink()])
    throw InputError("terminal potentials must coincide");

  double plain = 0.0, reduced = 0.0;
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& ed = net.edge(e);
    double w = ed.weight->linear_weight();
    plain += w * flow[e];
    reduced += (w + potential[ed.tail] - potential[ed.head]) * flow[e];
  }
  return {plain, reduced};
}

}  // namespace cflow
