#include <doctest.h>

#include <cmath>

#include <cstdlib>

#include "brute_force.hpp"
#include "cflow/gen.hpp"
#include "cflow/solver.hpp"
#include "cflow/verify.hpp"

using namespace cflow;

TEST_CASE("fresh state passes the audit") {
  Network net = parse_network("net 3 2\ne s a 2 lin 3\ne a t 2 lin 5\n");
  WeightGrid grid = WeightGrid::normalize(0.25, 3.0, 5.0);
  FlowState st = initial_state(net, grid, RuleSet::Scaling);
  AuditReport report = check_invariants(net, st);
  INFO(report.first_violation);
  CHECK(report.clean());
}

TEST_CASE("hand-built violations are reported") {
  Network net = parse_network("net 2 1\ne s t 1 lin 4\n");
  WeightGrid grid = WeightGrid::normalize(0.25, 4.0, 4.0);
  FlowState st = initial_state(net, grid, RuleSet::Simple);
  // carried edge with reduced weight -step
  st.flow[0] = 1.0;
  st.potential[net.source()] = 0;
  st.potential[net.sink()] = std::llround(4.0 / grid.unit) + 1;
  AuditReport report = check_invariants(net, st);
  CHECK(report.violations() == 1);
  CHECK(report.first_violation.find("carried_lower") != std::string::npos);

  // conservation break
  Network path = parse_network("net 3 2\ne s a 1 lin 4\ne a t 1 lin 4\n");
  FlowState st2 = initial_state(path, grid, RuleSet::Scaling);
  st2.flow[0] = 1.0;
  st2.forward_scale[0] = 0;
  AuditReport r2 = check_invariants(path, st2);
  CHECK(!r2.clean());
  CHECK(r2.first_violation.find("conservation") != std::string::npos);
}

TEST_CASE("off-grid potentials are flagged") {
  Network net = parse_network("net 2 1\ne s t 1 lin 4\n");
  WeightGrid grid = WeightGrid::normalize(0.25, 1.0, 4.0);
  FlowState st = initial_state(net, grid, RuleSet::Scaling);
  st.scale = 0;  // step = 4 units
  st.potential[net.sink()] += 1;
  AuditReport report = check_invariants(net, st);
  CHECK(report.at("grid").violations == 1);
}

TEST_CASE("reduced-weight identity") {
  Network net = parse_network("net 3 2\ne s a 1 lin 4\ne a t 1 lin 6\n");

  SUBCASE("zero flow") {
    std::vector<double> p(net.vertex_count(), 0.0);
    p[net.edge(0).head] = 7.0;
    auto [plain, reduced] = reduced_cost_identity(net, {0.0, 0.0}, p);
    CHECK(plain == 0.0);
    CHECK(reduced == 0.0);
  }
  SUBCASE("unit flow with arbitrary middle potential") {
    std::vector<double> p(net.vertex_count(), 0.0);
    p[net.edge(0).head] = 3.25;
    auto [plain, reduced] = reduced_cost_identity(net, {1.0, 1.0}, p);
    CHECK(plain == 10.0);
    CHECK(reduced == 10.0);
  }
  SUBCASE("violated preconditions are errors") {
    CHECK_THROWS_AS(reduced_cost_identity(net, {1.0, 0.0}, {0.0, 0.0, 0.0}),
                    InputError);
    std::vector<double> p(net.vertex_count(), 0.0);
    p[net.sink()] = 5.0;  // terminals must coincide
    CHECK_THROWS_AS(reduced_cost_identity(net, {1.0, 1.0}, p), InputError);
  }
}

TEST_CASE("identity holds on random conserving flows") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gen::DagSpec spec;
    spec.seed = seed;
    spec.depth = 4;
    Network net = gen::random_dag(spec);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> x =
          gen::random_conserving_flow(net, seed * 100 + trial);
      auto pu = gen::random_grid_potentials(net, seed * 31 + trial, 1, 64);
      std::vector<double> p(pu.size());
      for (size_t v = 0; v < pu.size(); ++v)
        p[v] = static_cast<double>(pu[v]) * 0.25;
      p[net.sink()] = p[net.source()];
      auto [plain, reduced] = reduced_cost_identity(net, x, p);
      CHECK(plain == reduced);
    }
  }
}

TEST_CASE("multiedge expansion of the documented quadratic") {
  Network net = parse_network("net 2 1\ne s t 3 quad 9 1\n");
  ExpandedNetwork ex = expand_multiedges(net, 2.0);
  REQUIRE(ex.pieces[0].size() == 4);
  std::vector<double> weights, caps;
  for (int id : ex.pieces[0]) {
    weights.push_back(ex.network.edge(id).weight->linear_weight());
    caps.push_back(ex.network.edge(id).capacity);
  }
  CHECK(weights == std::vector<double>{8.0, 6.0, 4.0, 2.0});
  CHECK(caps[0] == doctest::Approx(0.5));
  CHECK(caps[1] == doctest::Approx(1.0));
  CHECK(caps[2] == doctest::Approx(1.0));
  CHECK(caps[3] == doctest::Approx(0.5));
}

TEST_CASE("expansion leaves linear edges whole") {
  Network net = parse_network("net 2 1\ne s t 5 lin 4\n");
  ExpandedNetwork ex = expand_multiedges(net, 1.0);
  REQUIRE(ex.pieces[0].size() == 1);
  CHECK(ex.network.edge(0).weight->linear_weight() == 4.0);
  CHECK(ex.network.edge(0).capacity == 5.0);
}

TEST_CASE("expansion drops the degenerate first piece") {
  // gradient starts exactly on the grid and strictly decreases: the
  // top piece has zero width
  Network net = parse_network("net 2 1\ne s t 2 quad 8 1\n");
  ExpandedNetwork ex = expand_multiedges(net, 2.0);
  std::vector<double> weights;
  for (int id : ex.pieces[0])
    weights.push_back(ex.network.edge(id).weight->linear_weight());
  CHECK(weights == std::vector<double>{6.0, 4.0});
}

TEST_CASE("expansion respects the edge cap") {
  Network net = parse_network("net 2 1\ne s t 3 quad 9 1\n");
  CHECK_THROWS_WITH_AS(expand_multiedges(net, 0.0001, 100),
                       doctest::Contains("edge cap"), InputError);
}

TEST_CASE("expansion brackets the gradient on a 100-point grid") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    gen::DagSpec spec;
    spec.seed = seed;
    spec.depth = 3;
    spec.family = seed % 2 ? gen::Family::Quadratic : gen::Family::PwlGrid;
    spec.w_high = 16;
    spec.grid_unit = 0.25;
    Network net = gen::random_dag(spec);
    const double unit = 0.25;
    ExpandedNetwork ex = expand_multiedges(net, unit);
    for (int e = 0; e < net.edge_count(); ++e) {
      const Edge& ed = net.edge(e);
      for (int i = 0; i < 100; ++i) {
        double x = ed.capacity * i / 100.0;
        // the piece holding position x
        double acc = 0.0;
        double step_w = 0.0;
        for (int id : ex.pieces[e]) {
          step_w = ex.network.edge(id).weight->linear_weight();
          acc += ex.network.edge(id).capacity;
          if (x < acc - 1e-12) break;
        }
        CHECK(step_w <= ed.weight->gradient(x) + 1e-9);
        CHECK(step_w + unit >= ed.weight->gradient(x) - 1e-9);
      }
    }
  }
}

TEST_CASE("well-ordered fillings are bijective with totals") {
  Network net = parse_network("net 2 1\ne s t 3 quad 9 1\n");
  ExpandedNetwork ex = expand_multiedges(net, 2.0);
  for (double x : {0.0, 0.3, 0.5, 1.2, 2.9, 3.0}) {
    std::vector<double> fill = well_ordered_fill(ex, 0, x);
    double total = 0.0;
    bool seen_partial = false;
    for (size_t i = 0; i < fill.size(); ++i) {
      total += fill[i];
      double cap = ex.network.edge(ex.pieces[0][i]).capacity;
      if (fill[i] > 0.0) CHECK(!seen_partial);
      if (fill[i] < cap) seen_partial = true;
    }
    CHECK(total == doctest::Approx(x));
  }
}

TEST_CASE("oracle matches hand counts") {
  Network parallel = parse_network("net 2 2\ne s t 1 lin 8\ne s t 1 lin 2\n");
  CHECK(exact_linear_opt(parallel).value == 10.0);

  Network negative = parse_network("net 2 1 signed\ne s t 1 lin -2\n");
  OracleResult r = exact_linear_opt(negative);
  CHECK(r.value == 0.0);
  CHECK(r.flow[0] == 0.0);

  Network diamond = parse_network(
      "net 4 4\ne s a 1 lin 1\ne s b 1 lin 1\ne a t 1 lin 1\ne b t 1 lin 1\n");
  CHECK(exact_linear_opt(diamond).value == 4.0);
}

TEST_CASE("oracle uses backward arcs when rerouting pays") {
  // greedy on the heavy path must back off s->a to serve both sinks' edges
  Network net = parse_network(
      "net 5 6\n"
      "e s a 1 lin 1\n"
      "e s b 1 lin 1\n"
      "e a c 1 lin 8\n"
      "e b c 1 lin 1\n"
      "e c t 1 lin 1\n"
      "e a t 1 lin 6\n");
  // paths: s-a-c-t = 10, s-a-t = 7, s-b-c-t = 3
  // cap forces a choice; optimum = s-a-t + s-b-c-t = 7 + 3 = 10? or
  // s-a-c-t alone = 10; both bundles tie at 10... brute force decides
  CHECK(exact_linear_opt(net).value ==
        doctest::Approx(cflow::testing::brute_force_opt(net)));
}

TEST_CASE("oracle agrees with brute force on tiny instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    gen::DagSpec spec;
    spec.seed = seed;
    spec.depth = 2 + static_cast<int>(seed % 3);
    spec.max_interior = 3;
    spec.extra_edges = 3;
    spec.cap_high = 2;
    spec.w_high = 8;
    spec.family = seed % 3 == 0 ? gen::Family::SignedLinear : gen::Family::Linear;
    Network net = gen::random_dag(spec);
    if (net.edge_count() > 8 || net.total_capacity() > 8) continue;
    INFO("seed ", seed);
    CHECK(exact_linear_opt(net).value ==
          doctest::Approx(cflow::testing::brute_force_opt(net)));
  }
}

TEST_CASE("oracle caps reject oversized instances") {
  Network net = parse_network("net 2 2\ne s t 1 lin 8\ne s t 1 lin 2\n");
  OracleCaps caps;
  caps.max_edges = 1;
  CHECK_THROWS_WITH_AS(exact_linear_opt(net, caps),
                       doctest::Contains("oracle cap"), InputError);
  // the environment override shrinks both caps
  setenv("CFLOW_ORACLE_CAP", "1", 1);
  OracleCaps env = OracleCaps::from_env();
  unsetenv("CFLOW_ORACLE_CAP");
  CHECK(env.max_edges == 1);
  CHECK(env.max_total_capacity == 1.0);
}

TEST_CASE("certificates compare against the right reference") {
  Network net = parse_network("net 2 2\ne s t 1 lin 8\ne s t 1 lin 2\n");
  SolveOptions opt;
  opt.eps = 1.0 / 16;
  SolveResult r = scaling_flow(net, opt);
  Certificate cert = certify(r, net);
  CHECK(cert.certified);
  CHECK(cert.reference_kind == "oracle");
  CHECK(cert.ratio == 1.0);
  CHECK(cert.bound == 0.5);
  CHECK(cert.bound_claimed);
  CHECK(cert.pass);

  SUBCASE("eps too large for the stated bound") {
    opt.eps = 0.25;
    SolveResult loose = scaling_flow(net, opt);
    Certificate c2 = certify(loose, net);
    CHECK(c2.certified);
    CHECK(!c2.bound_claimed);
    CHECK(c2.note.find("not claimed") != std::string::npos);
  }
  SUBCASE("oracle caps mark the certificate uncertified") {
    OracleCaps caps;
    caps.max_edges = 1;
    Certificate c3 = certify(r, net, caps);
    CHECK(!c3.certified);
    CHECK(c3.note.find("uncertified") != std::string::npos);
  }
}

TEST_CASE("concave certificates use the expansion lower bound") {
  Network net = parse_network("net 2 1\ne s t 3 quad 9 1\n");
  SolveOptions opt;
  opt.eps = 1.0 / 16;
  SolveResult r = concave_flow(net, opt);
  Certificate cert = certify(r, net);
  CHECK(cert.certified);
  CHECK(cert.reference_kind == "expansion-lb");
  CHECK(cert.pass);
  CHECK(cert.reference <= 18.0 + 1e-9);
  CHECK(cert.reference >= (1.0 - r.grid.eps) * 18.0 - 1e-9);
}

TEST_CASE("grid piecewise inputs expand and solve identically") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    gen::DagSpec spec;
    spec.seed = seed;
    spec.depth = 3;
    spec.max_interior = 4;
    spec.extra_edges = 4;
    spec.cap_high = 3;
    spec.family = gen::Family::PwlGrid;
    spec.w_low = 1;
    spec.w_high = 4;
    spec.grid_unit = 1.0 / 16;  // eps * w_low
    Network net = gen::random_dag(spec);

    SolveOptions opt;
    opt.eps = 1.0 / 16;
    opt.audit = AuditMode::PerScale;
    SolveResult direct = concave_flow(net, opt);
    ExpandedNetwork ex = expand_multiedges(net, direct.grid.unit);
    SolveResult split = scaling_flow(ex.network, opt);

    double tol = flow_tolerance(net) * net.edge_count() * net.weight_upper();
    INFO("seed ", seed);
    CHECK(std::abs(direct.objective - split.objective) <= tol);
    for (int e = 0; e < net.edge_count(); ++e) {
      double total = 0.0;
      for (int id : ex.pieces[e]) total += split.flow[id];
      CHECK(std::abs(total - direct.flow[e]) <= flow_tolerance(net) + 1e-9);
    }
  }
}

TEST_CASE("signed guarantee against the oracle split") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gen::DagSpec spec;
    spec.seed = seed;
    spec.depth = 3;
    spec.family = gen::Family::SignedLinear;
    spec.w_high = 16;
    Network net = gen::random_dag(spec);
    SolveOptions opt;
    opt.eps = 1.0 / 16;
    SolveResult r = scaling_flow(net, opt);
    Certificate cert = certify(r, net);
    REQUIRE(cert.certified);
    CHECK(cert.signed_mode);
    INFO("seed ", seed, " obj=", r.objective, " rhs=", cert.signed_rhs);
    CHECK(cert.pass);
  }
}
