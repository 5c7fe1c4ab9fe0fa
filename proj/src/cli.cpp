#include "cflow/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "cflow/gen.hpp"
#include "cflow/reductions.hpp"
#include "cflow/verify.hpp"

namespace cflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

AuditMode audit_mode(const std::string& name) {
  if (name == "every") return AuditMode::EveryIteration;
  if (name == "scale") return AuditMode::PerScale;
  if (name == "off") return AuditMode::Off;
  throw InputError("unknown audit mode '" + name + "'");
}

SolveResult dispatch(const Network& net, const std::string& algo,
                     const SolveOptions& opt) {
  if (algo == "simple") return simple_flow(net, opt);
  if (algo == "scaling") return scaling_flow(net, opt);
  if (algo == "concave") return concave_flow(net, opt);
  throw InputError("unknown algorithm '" + algo + "'");
}

void print_flow(std::ostream& out, const Network& net,
                const std::vector<double>& flow) {
  for (int e = 0; e < net.edge_count(); ++e)
    out << "f " << net.name(net.edge(e).tail) << " "
        << net.name(net.edge(e).head) << " " << fmt(flow[e]) << "\n";
}

void print_scales(std::ostream& out, const SolveResult& r) {
  out << "scales " << r.scales.size() << "\n";
  for (const ScaleStats& s : r.scales) {
    std::string key = "scale." + std::to_string(s.scale);
    out << key << ".step " << fmt(s.step) << "\n";
    out << key << ".iterations " << s.iterations << "\n";
    out << key << ".pushed " << fmt(s.pushed) << "\n";
  }
}

void print_audit(std::ostream& out, const AuditReport& audit) {
  out << "audit.points " << audit.points << "\n";
  out << "audit.violations " << audit.violations() << "\n";
  for (const AuditCheck& c : audit.checks)
    out << "audit.check." << c.name << " " << c.checked << " " << c.violations
        << "\n";
  if (!audit.first_violation.empty())
    out << "audit.first " << audit.first_violation << "\n";
  for (const std::string& f : audit.flags) out << "audit.flag " << f << "\n";
}

void print_certificate(std::ostream& out, const Certificate& cert) {
  out << "certificate.certified " << (cert.certified ? "yes" : "no") << "\n";
  if (cert.certified) {
    out << "certificate.reference_kind " << cert.reference_kind << "\n";
    out << "certificate.reference " << fmt(cert.reference) << "\n";
    out << "certificate.objective " << fmt(cert.objective) << "\n";
    out << "certificate.ratio " << fmt(cert.ratio) << "\n";
    out << "certificate.bound " << fmt(cert.bound) << "\n";
    out << "certificate.bound_claimed " << (cert.bound_claimed ? "yes" : "no")
        << "\n";
    if (cert.signed_mode) {
      out << "certificate.positive_part " << fmt(cert.positive_part) << "\n";
      out << "certificate.negative_part " << fmt(cert.negative_part) << "\n";
      out << "certificate.signed_rhs " << fmt(cert.signed_rhs) << "\n";
    }
    out << "certificate.pass " << (cert.pass ? "yes" : "no") << "\n";
  }
  if (!cert.note.empty()) out << "certificate.note " << cert.note << "\n";
}

int solve_command(const RunConfig& config, std::ostream& out,
                  std::ostream& err, bool force_verify) {
  Network net = parse_network_file(config.input_path);

  SolveOptions opt;
  opt.eps = config.eps;
  opt.audit = force_verify ? AuditMode::EveryIteration
                           : audit_mode(config.audit);
  std::ostringstream trace;
  if (config.trace) opt.trace = &trace;

  SolveResult result = dispatch(net, config.algo, opt);

  out << "algo " << config.algo << "\n";
  out << "eps " << fmt(result.grid.eps) << "\n";
  out << "n " << net.vertex_count() << "\n";
  out << "m " << net.edge_count() << "\n";
  out << "depth " << net.depth() << "\n";
  out << "objective " << fmt(result.objective) << "\n";
  print_flow(out, net, result.flow);
  print_scales(out, result);
  print_audit(out, result.audit);

  bool cert_failed = false;
  if (config.oracle || force_verify) {
    Certificate cert = certify(result, net);
    print_certificate(out, cert);
    if (!cert.certified && config.oracle) {
      err << "uncertified: oracle cap\n";
      return 2;
    }
    cert_failed = cert.certified && !cert.pass;
  }
  if (config.trace) out << trace.str();
  err << "# wall_ms " << fmt(result.wall_ms) << "\n";
  return (!result.audit.clean() || cert_failed) ? 1 : 0;
}

WeightPtr parse_weight_token(std::istringstream& ls, double cap) {
  std::string family;
  if (!(ls >> family)) throw InputError("missing weight spec");
  if (family == "lin") {
    double w;
    if (!(ls >> w)) throw InputError("missing weight");
    return make_linear(w, cap);
  }
  if (family == "quad") {
    double a, b;
    if (!(ls >> a >> b)) throw InputError("malformed quad spec");
    return make_quadratic(a, b, cap);
  }
  if (family == "pwl") {
    int k;
    if (!(ls >> k) || k < 1) throw InputError("malformed pwl spec");
    std::vector<double> bp(k), g(k);
    for (int i = 0; i < k; ++i)
      if (!(ls >> bp[i] >> g[i])) throw InputError("malformed pwl spec");
    return make_piecewise(std::move(bp), std::move(g), cap);
  }
  throw InputError("unknown weight family tag '" + family + "'");
}

ReductionMap build_reduction(const RunConfig& config) {
  std::ifstream in(config.input_path);
  if (!in) throw InputError("cannot read '" + config.input_path + "'");

  std::string line, tag;
  const std::string& kind = config.reduce_kind;

  if (kind == "assignment") {
    std::vector<long> lcap, rcap;
    std::vector<AssignmentPair> pairs;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (!(ls >> tag)) continue;
      if (tag == "assign") {
        int l, r;
        if (!(ls >> l >> r) || l < 1 || r < 1)
          throw InputError("malformed assign header");
        lcap.assign(l, 1);
        rcap.assign(r, 1);
      } else if (tag == "lcap" || tag == "rcap") {
        int i;
        long c;
        if (!(ls >> i >> c)) throw InputError("malformed cap line");
        auto& caps = tag == "lcap" ? lcap : rcap;
        if (i < 1 || i > static_cast<int>(caps.size()))
          throw InputError("cap index out of range");
        caps[i - 1] = c;
      } else if (tag == "pair") {
        AssignmentPair p;
        if (!(ls >> p.left >> p.right)) throw InputError("malformed pair line");
        p.utility = parse_weight_token(ls, 1.0);
        pairs.push_back(std::move(p));
      } else {
        throw InputError("line " + std::to_string(lineno) +
                         ": unknown tag '" + tag + "'");
      }
    }
    return assignment_to_network(lcap, rcap, pairs, config.eps);
  }

  if (kind == "chain") {
    std::vector<ChainEdgeXY> xy;
    std::vector<ChainEdgeYZ> yz;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (!(ls >> tag)) continue;
      if (tag == "chain") continue;
      if (tag == "xy") {
        ChainEdgeXY e;
        if (!(ls >> e.x >> e.y >> e.w)) throw InputError("malformed xy line");
        xy.push_back(std::move(e));
      } else if (tag == "yz") {
        ChainEdgeYZ e;
        if (!(ls >> e.y >> e.z >> e.w)) throw InputError("malformed yz line");
        yz.push_back(std::move(e));
      } else {
        throw InputError("unknown tag '" + tag + "'");
      }
    }
    return chained_matching_to_network(xy, yz, config.eps);
  }

  if (kind == "schedule") {
    std::vector<long> day_caps;
    std::vector<Job> jobs;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (!(ls >> tag)) continue;
      if (tag == "schedule") {
        int days;
        if (!(ls >> days) || days < 1)
          throw InputError("malformed schedule header");
        day_caps.assign(days, 1);
      } else if (tag == "daycap") {
        int d;
        long u;
        if (!(ls >> d >> u)) throw InputError("malformed daycap line");
        if (d < 1 || d > static_cast<int>(day_caps.size()))
          throw InputError("daycap index out of range");
        day_caps[d - 1] = u;
      } else if (tag == "job") {
        Job j;
        if (!(ls >> j.start >> j.end >> j.gain))
          throw InputError("malformed job line");
        jobs.push_back(j);
      } else {
        throw InputError("unknown tag '" + tag + "'");
      }
    }
    return scheduling_to_network(jobs, day_caps, config.eps);
  }

  if (kind == "mincost") {
    double reward = 0.0;
    RawNetwork raw;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (!(ls >> tag)) continue;
      if (tag == "mincost") {
        if (!(ls >> reward)) throw InputError("malformed mincost header");
      } else if (tag == "e") {
        RawEdge e;
        double q;
        if (!(ls >> e.tail >> e.head >> e.capacity >> q))
          throw InputError("malformed edge line");
        e.weight = make_linear(q, e.capacity);
        raw.edges.push_back(std::move(e));
      } else {
        throw InputError("unknown tag '" + tag + "'");
      }
    }
    return mincost_with_reward(validate_and_level(raw), reward);
  }

  if (kind == "multisource") {
    RawNetwork interior;
    struct Pending {
      std::string name, family;
      std::vector<double> params;
    };
    std::vector<Pending> pending;
    std::map<std::string, double> out_cap;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (!(ls >> tag)) continue;
      if (tag == "multisource") continue;
      if (tag == "source") {
        Pending p;
        if (!(ls >> p.name >> p.family)) throw InputError("malformed source line");
        double v;
        while (ls >> v) p.params.push_back(v);
        pending.push_back(std::move(p));
      } else if (tag == "e") {
        RawEdge e;
        if (!(ls >> e.tail >> e.head >> e.capacity))
          throw InputError("malformed edge line");
        out_cap[e.tail] += e.capacity;
        interior.edges.push_back(std::move(e));
      } else {
        throw InputError("unknown tag '" + tag + "'");
      }
    }
    std::vector<SourceSpec> sources;
    for (const Pending& p : pending) {
      if (!out_cap.count(p.name))
        throw InputError("source '" + p.name + "' has no outgoing edges");
      double cap = out_cap[p.name];
      SourceSpec s;
      s.name = p.name;
      if (p.family == "lin" && p.params.size() == 1)
        s.utility = make_linear(p.params[0], cap);
      else if (p.family == "quad" && p.params.size() == 2)
        s.utility = make_quadratic(p.params[0], p.params[1], cap);
      else
        throw InputError("source utilities must be 'lin <w>' or 'quad <a> <b>'");
      sources.push_back(std::move(s));
    }
    return multisource_concave_to_network(interior, sources, config.eps);
  }

  throw InputError("unknown reduction kind '" + kind + "'");
}

int reduce_command(const RunConfig& config, std::ostream& out,
                   std::ostream& err) {
  ReductionMap map = build_reduction(config);
  out << map.network.serialize();
  out << "map.transform "
      << (map.transform == ObjectiveTransform::NegateCost ? "negate"
                                                          : "identity")
      << "\n";
  out << "map.aux_weight " << fmt(map.aux_weight) << "\n";
  out << "map.aux_slack " << fmt(map.aux_slack) << "\n";
  for (int e = 0; e < map.network.edge_count(); ++e)
    out << "map.edge." << e << " " << map.edge_entity[e] << "\n";
  if (!config.reduce_solve) return 0;

  SolveOptions opt;
  opt.eps = config.eps;
  opt.audit = audit_mode(config.audit);
  bool concave = !map.network.all_linear();
  SolveResult result = concave
                           ? concave_flow(map.network, opt)
                           : scaling_flow(map.network, opt);
  out << "objective " << fmt(result.objective) << "\n";
  out << "application_objective "
      << fmt(map.application_objective(result.flow)) << "\n";
  for (int e = 0; e < map.network.edge_count(); ++e) {
    if (map.edge_entity[e] == "aux" || result.flow[e] == 0.0) continue;
    out << "app." << map.edge_entity[e] << " " << fmt(result.flow[e]) << "\n";
  }
  print_audit(out, result.audit);
  err << "# wall_ms " << fmt(result.wall_ms) << "\n";
  return result.audit.clean() ? 0 : 1;
}

int bench_command(const RunConfig& config, std::ostream& out,
                  std::ostream& err) {
  gen::DagSpec base;
  base.depth = 5;
  base.max_interior = 12;
  base.extra_edges = 16;
  std::string algo = "scaling";
  if (config.bench_kind == "linear") {
    base.family = gen::Family::Linear;
  } else if (config.bench_kind == "unit") {
    base.family = gen::Family::Linear;
    base.unit_caps = true;
    algo = "simple";
  } else if (config.bench_kind == "signed") {
    base.family = gen::Family::SignedLinear;
  } else if (config.bench_kind == "pwl") {
    base.family = gen::Family::PwlGrid;
    base.w_high = 8;
    base.grid_unit = 0.0625;
    algo = "concave";
  } else if (config.bench_kind == "quad") {
    base.family = gen::Family::Quadratic;
    base.w_high = 16;
    algo = "concave";
  } else {
    throw InputError("unknown bench kind '" + config.bench_kind + "'");
  }

  struct Row {
    int index;
    std::string csv;
    double ms;
  };
  auto run_one = [&](int i) -> Row {
    gen::DagSpec spec = base;
    spec.seed = config.seed + static_cast<std::uint64_t>(i);
    Network net = gen::random_dag(spec);
    SolveOptions opt;
    opt.eps = config.eps;
    opt.audit = audit_mode(config.audit);
    SolveResult r = dispatch(net, algo, opt);
    long iterations = 0;
    for (const ScaleStats& s : r.scales) iterations += s.iterations;
    std::ostringstream row;
    row << i << "," << net.vertex_count() << "," << net.edge_count() << ","
        << net.depth() << "," << r.scales.size() << "," << iterations << ","
        << fmt(r.objective) << "," << r.audit.violations();
    if (config.oracle) {
      Certificate cert = certify(r, net);
      row << "," << (cert.certified ? fmt(cert.ratio) : "na");
    }
    return {i, row.str(), r.wall_ms};
  };

  out << "index,n,m,depth,scales,iterations,objective,audit_violations";
  if (config.oracle) out << ",ratio";
  out << "\n";

  std::vector<Row> rows(config.bench_count);
  if (config.bench_jobs > 1) {
    std::vector<std::future<Row>> futures;
    futures.reserve(config.bench_count);
    for (int i = 0; i < config.bench_count; ++i)
      futures.push_back(std::async(std::launch::async, run_one, i));
    for (int i = 0; i < config.bench_count; ++i) rows[i] = futures[i].get();
  } else {
    for (int i = 0; i < config.bench_count; ++i) rows[i] = run_one(i);
  }
  double total_ms = 0.0;
  for (const Row& r : rows) {
    out << r.csv << "\n";
    total_ms += r.ms;
  }
  err << "# total_wall_ms " << fmt(total_ms) << "\n";
  return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.output_path.empty()) {
      file.open(config.output_path);
      if (!file) throw InputError("cannot write '" + config.output_path + "'");
      sink = &file;
    }
    if (config.command == "solve") return solve_command(config, *sink, err, false);
    if (config.command == "verify") return solve_command(config, *sink, err, true);
    if (config.command == "reduce") return reduce_command(config, *sink, err);
    if (config.command == "bench") return bench_command(config, *sink, err);
    throw InputError("unknown command '" + config.command + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int main_cli(int argc, const char* const* argv) {
  CLI::App app{"approximate maximum-weight flow on small-depth DAGs"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("input", config.input_path, "instance file")->required();
    cmd->add_option("--eps", config.eps, "accuracy target in (0,1)");
    cmd->add_option("--audit", config.audit, "every | scale | off");
    cmd->add_flag("--oracle", config.oracle, "compare against the exact oracle");
    cmd->add_flag("--trace", config.trace, "emit per-iteration trace lines");
    cmd->add_option("--out", config.output_path, "write the report here");
    cmd->add_option("--seed", config.seed, "generator seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  add_common(solve, true);
  solve->add_option("--algo", config.algo, "simple | scaling | concave");

  CLI::App* verify = app.add_subcommand(
      "verify", "solve with full auditing and a certificate");
  add_common(verify, true);
  verify->add_option("--algo", config.algo, "simple | scaling | concave");

  CLI::App* reduce = app.add_subcommand("reduce", "build an application network");
  reduce->add_option("kind", config.reduce_kind,
                     "assignment | chain | schedule | mincost | multisource")
      ->required();
  add_common(reduce, true);
  reduce->add_flag("--solve", config.reduce_solve, "also solve and back-map");

  CLI::App* bench = app.add_subcommand("bench", "run seeded random instances");
  add_common(bench, false);
  bench->add_option("--count", config.bench_count, "instances to run");
  bench->add_option("--kind", config.bench_kind,
                    "linear | unit | signed | pwl | quad");
  bench->add_option("--jobs", config.bench_jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  config.command = app.get_subcommands().front()->get_name();
  return run(config, std::cout, std::cerr);
}

}  // namespace cflow
