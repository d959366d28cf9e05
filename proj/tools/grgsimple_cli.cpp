// grgsimple: generate geometric random graphs, reconstruct them with SIMPLE,
// and run the query-complexity / non-edge experiments as CSV.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grgsimple/grgsimple.hpp"

namespace {

using namespace grgsimple;

struct InstanceOptions {
  std::size_t n = 1000;
  std::optional<double> k;
  std::optional<double> r;
  std::string boundary = "torus";
  std::uint64_t rng_seed = 1;
  std::string coords;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opt) {
  cmd->add_option("--n", opt.n, "Expected node count (window area)")->check(CLI::PositiveNumber);
  auto* k = cmd->add_option("--k", opt.k, "Radius exponent, r = n^k")->check(CLI::Range(0.0, 0.5));
  auto* r = cmd->add_option("--r", opt.r, "Connection radius")->check(CLI::PositiveNumber);
  k->excludes(r);
  cmd->add_option("--boundary", opt.boundary, "torus or square")->check(CLI::IsMember({"torus", "square"}));
  cmd->add_option("--rng-seed", opt.rng_seed, "Random seed");
}

double radius_of(const InstanceOptions& opt, double n) {
  if (opt.r) return *opt.r;
  if (opt.k) return std::pow(n, *opt.k);
  throw ParameterError("one of --r or --k is required");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot open '" + path + "' for writing");
  return f;
}

// From --coords when given, otherwise a fresh PPP sample.
GeometricGraph load_or_generate(const InstanceOptions& opt) {
  if (!opt.coords.empty()) {
    std::ifstream f(opt.coords);
    if (!f) throw ParameterError("cannot open '" + opt.coords + "'");
    PointSet ps = read_point_set(f);
    // Nominal n is the window area, as when the points were generated.
    const double r = radius_of(opt, std::max(1.0, std::round(ps.domain.area())));
    return build_grg(std::move(ps), r);
  }
  const Domain domain = Domain::for_nodes(static_cast<double>(opt.n), parse_boundary(opt.boundary));
  return build_grg(sample_ppp(domain, 1.0, opt.rng_seed), radius_of(opt, static_cast<double>(opt.n)));
}

SeedStrategy strategy_for(const std::optional<std::string>& seeds, const InstanceOptions& opt, std::size_t nodes) {
  const std::uint64_t seed = derive_seed(opt.rng_seed, {0x5eed});
  if (seeds) return parse_seed_strategy(*seeds, seed);
  if (opt.k) return SeedStrategy::count(seed_count(nodes, bounds::seed_exponents(*opt.k).epsilon), seed);
  return SeedStrategy::count(std::min<std::size_t>(4, nodes), seed);
}

ResultRow row_for(std::string_view experiment, const InstanceOptions& opt, const GeometricGraph& g) {
  ResultRow row;
  row.experiment = std::string(experiment);
  row.n = g.node_count();
  row.r = g.radius;
  row.k_or_r = opt.k ? *opt.k : g.radius;
  row.graph_family = "grg";
  row.boundary = std::string(to_string(g.points.domain.boundary()));
  row.edge_count = static_cast<double>(g.topology.edge_count());
  return row;
}

void emit(const std::string& out, std::string_view meta, const std::vector<ResultRow>& rows) {
  if (out.empty()) {
    write_csv_rows(std::cout, meta, rows);
  } else {
    auto f = open_out(out);
    write_csv_rows(f, meta, rows);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric random graph reconstruction with distance queries"};
  app.require_subcommand(1);

  // generate
  InstanceOptions gen;
  std::string gen_edges;
  auto* generate = app.add_subcommand("generate", "Sample a geometric random graph and write it out");
  add_instance_options(generate, gen);
  generate->add_option("--coords", gen.coords, "Write node coordinates here");
  generate->add_option("--edge-list", gen_edges, "Write the edge list here");

  // reconstruct / nonedge
  InstanceOptions rec;
  std::optional<std::string> rec_seeds;
  std::string rec_out, rec_edges;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Reconstruct one graph and report query counts");
  add_instance_options(reconstruct_cmd, rec);
  reconstruct_cmd->add_option("--coords", rec.coords, "Read node coordinates instead of sampling");
  reconstruct_cmd->add_option("--seeds", rec_seeds, "count:<s> | thinning:<eps> | optimal4");
  reconstruct_cmd->add_option("--out", rec_out, "CSV output (default stdout)");
  reconstruct_cmd->add_option("--edge-list", rec_edges, "Write the recovered edge list here");

  InstanceOptions ne;
  std::optional<std::string> ne_seeds;
  std::string ne_out;
  auto* nonedge_cmd = app.add_subcommand("nonedge", "Fraction of non-edges ruled out by the seed queries alone");
  add_instance_options(nonedge_cmd, ne);
  nonedge_cmd->add_option("--coords", ne.coords, "Read node coordinates instead of sampling");
  nonedge_cmd->add_option("--seeds", ne_seeds, "count:<s> | thinning:<eps> | optimal4");
  nonedge_cmd->add_option("--out", ne_out, "CSV output (default stdout)");

  // sweep
  ExperimentSpec spec;
  std::string experiment = "complexity-dense";
  std::string sweep_boundary = "torus";
  std::string sweep_out;
  std::optional<double> sweep_r;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment grid and write trial + mean rows");
  sweep->add_option("--experiment", experiment, "Experiment name")
      ->check(CLI::IsMember({"complexity-dense", "torus-vs-square", "seed-sweep", "rrg-sparse", "rrg-dense",
                             "nonedge-sparse", "nonedge-dense"}));
  sweep->add_option("--n", spec.n_values, "Node counts, comma separated")->delimiter(',')->required();
  sweep->add_option("--k", spec.k, "Radius exponent")->check(CLI::Range(0.0, 0.5));
  sweep->add_option("--r", sweep_r, "Fixed radius (overrides the experiment's rule)")->check(CLI::PositiveNumber);
  sweep->add_option("--boundary", sweep_boundary, "torus or square")->check(CLI::IsMember({"torus", "square"}));
  sweep->add_option("--seeds", spec.seeds, "count:<s> | thinning:<eps> | optimal4");
  sweep->add_option("--seed-sizes", spec.seed_sizes, "Seed-sweep sizes, comma separated")->delimiter(',');
  sweep->add_option("--degree", spec.degree, "Degree for rrg-sparse")->check(CLI::PositiveNumber);
  sweep->add_option("--iterations", spec.iterations, "Trials per n")->check(CLI::PositiveNumber);
  sweep->add_option("--rng-seed", spec.base_rng_seed, "Base random seed");
  sweep->add_option("--c", spec.c, "Distance-bound constant c")->check(CLI::PositiveNumber);
  sweep->add_option("--threads", spec.threads, "Worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_out, "CSV output (default stdout)");

  // bounds
  std::vector<std::size_t> bound_ns{1000, 2000, 4000, 8000, 16000};
  std::vector<double> bound_ks{0.1, 0.3};
  std::string bounds_out;
  auto* bounds_cmd = app.add_subcommand("bounds", "Emit theoretical reference curves as CSV");
  bounds_cmd->add_option("--n", bound_ns, "Node counts, comma separated")->delimiter(',');
  bounds_cmd->add_option("--k", bound_ks, "Radius exponents, comma separated")->delimiter(',');
  bounds_cmd->add_option("--out", bounds_out, "CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const GeometricGraph g = load_or_generate(InstanceOptions{gen.n, gen.k, gen.r, gen.boundary, gen.rng_seed, ""});
      if (!gen.coords.empty()) {
        auto f = open_out(gen.coords);
        write_point_set(f, g.points);
      }
      if (!gen_edges.empty()) {
        auto f = open_out(gen_edges);
        write_edge_list(f, g);
      }
      std::cout << "nodes=" << g.node_count() << " edges=" << g.topology.edge_count() << " r=" << g.radius
                << " mean_degree=" << mean_degree(g.topology) << " connected=" << std::boolalpha
                << is_connected(g.topology) << '\n';
    } else if (*reconstruct_cmd) {
      const GeometricGraph g = load_or_generate(rec);
      const SeedStrategy strategy = strategy_for(rec_seeds, rec, g.node_count());
      const ReconstructionResult res = reconstruct(g, strategy);
      ResultRow row = row_for("reconstruct", rec, g);
      row.seeds = to_string(strategy);
      row.seed_count = static_cast<double>(res.seed_count);
      row.phase1 = static_cast<double>(res.phase1_queries);
      row.phase2 = static_cast<double>(res.phase2_queries);
      row.total_queries = static_cast<double>(res.total_queries());
      row.candidate_count = static_cast<double>(res.candidate_count);
      if (rec.k && *rec.k > 0.0 && *rec.k < 0.5)
        row.reference_curve = bounds::complexity_curve(static_cast<double>(g.node_count()), *rec.k);
      row.elapsed_s = res.elapsed;
      if (res.edges != g.topology.edges()) row.note = "mismatch";
      if (!rec_edges.empty()) {
        auto f = open_out(rec_edges);
        write_edge_list(f, Graph::from_edges(g.node_count(), res.edges), g.radius,
                        to_string(g.points.domain.boundary()));
      }
      emit(rec_out, "experiment=reconstruct seed=" + std::to_string(rec.rng_seed), {row});
    } else if (*nonedge_cmd) {
      const GeometricGraph g = load_or_generate(ne);
      const SeedStrategy strategy = strategy_for(ne_seeds, ne, g.node_count());
      const NonEdgeReport rep = nonedge_detection(g, strategy);
      ResultRow row = row_for("nonedge", ne, g);
      row.seeds = to_string(strategy);
      row.seed_count = static_cast<double>(rep.seed_count);
      row.phase1 = static_cast<double>(rep.phase1_queries);
      row.total_queries = row.phase1;
      row.nonedge_fraction = rep.fraction;
      row.directed_fraction = rep.directed_fraction;
      row.reference_curve = bounds::nonedge_constant();
      emit(ne_out, "experiment=nonedge seed=" + std::to_string(ne.rng_seed), {row});
    } else if (*sweep) {
      spec.name = parse_experiment(experiment);
      spec.boundary = parse_boundary(sweep_boundary);
      spec.radius = sweep_r;
      const auto rows = run(spec);
      if (sweep_out.empty()) {
        write_csv(std::cout, spec, rows);
      } else {
        auto f = open_out(sweep_out);
        write_csv(f, spec, rows);
      }
      for (const auto& r : rows)
        if (r.row_type == RowType::Error) std::cerr << "warning: n=" << r.n << " trial=" << r.trial << ": " << r.note << '\n';
    } else if (*bounds_cmd) {
      if (bounds_out.empty()) {
        write_reference_csv(std::cout, bound_ns, bound_ks);
      } else {
        auto f = open_out(bounds_out);
        write_reference_csv(f, bound_ns, bound_ks);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
