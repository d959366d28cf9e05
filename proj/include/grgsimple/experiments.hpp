#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "grgsimple/bounds.hpp"
#include "grgsimple/errors.hpp"
#include "grgsimple/geometry.hpp"
#include "grgsimple/graph.hpp"
#include "grgsimple/random.hpp"
#include "grgsimple/simple.hpp"

namespace grgsimple {

enum class ExperimentName {
  ComplexityDense,   // queries vs n, r = n^k
  TorusVsSquare,     // same point sets under both boundaries
  SeedSizeSweep,     // queries vs |S| at fixed n
  RrgCompareSparse,  // GRG vs random regular graph, degree fixed
  RrgCompareDense,   // GRG with r = n^k vs degree-matched random regular graph
  NonEdgeSparse,     // phase-1 non-edge detection, r = 2 sqrt(ln n), four near-optimal seeds
  NonEdgeDense,      // phase-1 non-edge detection, r = n^k
};

inline constexpr std::pair<ExperimentName, std::string_view> kExperimentNames[] = {
    {ExperimentName::ComplexityDense, "complexity-dense"},   {ExperimentName::TorusVsSquare, "torus-vs-square"},
    {ExperimentName::SeedSizeSweep, "seed-sweep"},           {ExperimentName::RrgCompareSparse, "rrg-sparse"},
    {ExperimentName::RrgCompareDense, "rrg-dense"},          {ExperimentName::NonEdgeSparse, "nonedge-sparse"},
    {ExperimentName::NonEdgeDense, "nonedge-dense"},
};

inline std::string_view to_string(ExperimentName name) {
  for (const auto& [value, text] : kExperimentNames)
    if (value == name) return text;
  return "unknown";
}

inline ExperimentName parse_experiment(std::string_view text) {
  for (const auto& [value, name] : kExperimentNames)
    if (name == text) return value;
  throw ParameterError("unknown experiment '" + std::string(text) + "'");
}

struct ExperimentSpec {
  ExperimentName name = ExperimentName::ComplexityDense;
  std::vector<std::size_t> n_values;
  double k = 0.3;                        // radius exponent, r = n^k
  std::optional<double> radius;          // fixed radius; overrides the experiment's radius rule
  std::size_t iterations = 100;
  std::uint64_t base_rng_seed = 1;
  double c = 1.0;
  Boundary boundary = Boundary::Torus;
  std::optional<std::string> seeds;      // "count:<s>", "thinning:<eps>", "optimal4"
  std::vector<std::size_t> seed_sizes;   // seed-sweep grid; empty = default grid
  std::size_t degree = 50;               // rrg-sparse degree
  std::size_t max_resamples = 100;
  std::size_t threads = 0;               // 0 = hardware concurrency

  void validate() const {
    if (iterations < 1) throw ParameterError("iterations must be at least 1");
    if (n_values.empty()) throw ParameterError("n_values must be nonempty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      if (n_values[i] < 2) throw ParameterError("n values must be at least 2");
      if (i > 0 && n_values[i] <= n_values[i - 1]) throw ParameterError("n values must be strictly increasing");
    }
    if (!(k > 0.0 && k < 0.5)) throw ParameterError("k must lie in (0, 1/2)");
    if (radius && !(*radius > 0.0)) throw ParameterError("radius must be positive");
    if (!(c > 0.0)) throw ParameterError("c must be positive");
    if (seeds) (void)parse_seed_strategy(*seeds);
  }
};

enum class RowType { Trial, Mean, Error };

inline std::string_view to_string(RowType t) {
  switch (t) {
    case RowType::Trial: return "trial";
    case RowType::Mean: return "mean";
    case RowType::Error: return "error";
  }
  return "?";
}

// One CSV line. Mean rows carry averages over the trial rows sharing
// (n, graph_family, boundary, seeds) and standard errors.
struct ResultRow {
  std::string experiment;
  RowType row_type = RowType::Trial;
  std::size_t n = 0;
  double k_or_r = 0.0;
  double r = 0.0;
  std::size_t trial = 0;
  std::string graph_family;  // grg | rrg
  std::string boundary;      // torus | square | none
  std::string seeds;
  double seed_count = 0.0;
  double phase1 = 0.0;
  double phase2 = 0.0;
  double total_queries = 0.0;
  double edge_count = 0.0;
  double candidate_count = 0.0;
  std::optional<double> nonedge_fraction;
  std::optional<double> directed_fraction;
  double reference_curve = 0.0;
  double stderr_total = 0.0;
  double stderr_fraction = 0.0;
  double elapsed_s = 0.0;
  std::string note;
};

inline constexpr std::string_view kCsvSchema = "grgsimple-results/1";
inline constexpr std::string_view kCsvColumns =
    "experiment,row_type,n,k_or_r,r,trial,graph_family,boundary,seeds,seed_count,phase1,phase2,total_queries,"
    "edge_count,candidate_count,nonedge_fraction,directed_fraction,reference_curve,stderr_total,stderr_fraction,"
    "elapsed_s,note";

namespace detail {

inline std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v);
    return os.str();
  }
  // Shortest precision that round-trips.
  for (int precision = 15; precision <= std::numeric_limits<double>::max_digits10; ++precision) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(precision) << v;
    if (precision == std::numeric_limits<double>::max_digits10 || std::stod(os.str()) == v) return os.str();
  }
  return {};
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

struct Instance {
  GeometricGraph grg;
  std::optional<GeometricGraph> square;  // paired square-boundary graph (torus-vs-square)
};

inline double radius_for(const ExperimentSpec& spec, std::size_t n) {
  if (spec.radius) return *spec.radius;
  const double nd = static_cast<double>(n);
  switch (spec.name) {
    case ExperimentName::RrgCompareSparse: return std::sqrt(static_cast<double>(spec.degree) / std::numbers::pi);
    case ExperimentName::NonEdgeSparse: return 2.0 * std::sqrt(std::log(nd));
    default: return std::pow(nd, spec.k);
  }
}

inline bool dense_family(ExperimentName name) {
  return name != ExperimentName::RrgCompareSparse && name != ExperimentName::NonEdgeSparse;
}

inline double reference_for(const ExperimentSpec& spec, std::size_t n) {
  switch (spec.name) {
    case ExperimentName::NonEdgeSparse:
    case ExperimentName::NonEdgeDense: return bounds::nonedge_constant();
    case ExperimentName::RrgCompareSparse: return bounds::sparse_complexity_curve(static_cast<double>(n));
    default: return bounds::complexity_curve(static_cast<double>(n), spec.k);
  }
}

// Degree-matched regular degree: round(mean degree), nudged by one if n * degree is odd.
inline std::size_t matched_degree(double mean, std::size_t n) {
  auto d = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(0LL, std::llround(mean))), 1, n - 1);
  if ((n * d) % 2 != 0) {
    if (d + 1 <= n - 1 && (mean >= static_cast<double>(d) || d == 1))
      ++d;
    else
      --d;
  }
  return d;
}

// Seed sizes follow the nominal n of the grid; `nodes` is the realised count (cap).
inline SeedStrategy default_seeds(const ExperimentSpec& spec, std::size_t n, std::size_t nodes, std::uint64_t rng_seed) {
  if (spec.seeds) return parse_seed_strategy(*spec.seeds, rng_seed);
  const auto capped = [&](std::size_t s) { return SeedStrategy::count(std::clamp<std::size_t>(s, 1, nodes), rng_seed); };
  switch (spec.name) {
    case ExperimentName::RrgCompareSparse: return capped(4);
    case ExperimentName::NonEdgeSparse: return SeedStrategy::optimal4();
    case ExperimentName::NonEdgeDense: {
      const double nd = static_cast<double>(n);
      return capped(static_cast<std::size_t>(std::ceil(std::log(nd) * std::pow(nd, spec.k))));
    }
    default: return capped(seed_count(n, bounds::seed_exponents(spec.k).epsilon));
  }
}

inline std::vector<std::size_t> sweep_sizes(const ExperimentSpec& spec, std::size_t n, std::size_t nodes) {
  std::vector<std::size_t> sizes = spec.seed_sizes;
  if (sizes.empty()) {
    sizes = {4, 8, 16, 32, 64, 128, 256, 512};
    sizes.push_back(seed_count(n, bounds::seed_exponents(spec.k).epsilon));
  }
  std::erase_if(sizes, [nodes](std::size_t s) { return s < 1 || s > nodes; });
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

// Generates a connected instance, resampling up to spec.max_resamples times.
inline Instance make_instance(const ExperimentSpec& spec, std::size_t n, std::uint64_t cell_seed) {
  const double r = radius_for(spec, n);
  const bool paired_square = spec.name == ExperimentName::TorusVsSquare;
  const Boundary boundary = paired_square ? Boundary::Torus : spec.boundary;
  const Domain domain = Domain::for_nodes(static_cast<double>(n), boundary);
  for (std::size_t attempt = 0; attempt < spec.max_resamples; ++attempt) {
    PointSet ps = sample_ppp(domain, 1.0, derive_seed(cell_seed, {0x9e01, attempt}));
    if (ps.size() < 2) continue;
    std::optional<GeometricGraph> square;
    if (paired_square) {
      PointSet sq = ps;
      sq.domain = Domain(domain.side(), Boundary::Square);
      square = build_grg(std::move(sq), r);
      if (!is_connected(square->topology)) continue;
    }
    GeometricGraph grg = build_grg(std::move(ps), r);
    if (!is_connected(grg.topology)) continue;
    return Instance{std::move(grg), std::move(square)};
  }
  throw ConnectivityError("no connected instance after " + std::to_string(spec.max_resamples) + " resamples");
}

inline RegularGraph make_rrg(const ExperimentSpec& spec, std::size_t n, std::size_t degree, std::uint64_t cell_seed) {
  for (std::size_t attempt = 0; attempt < spec.max_resamples; ++attempt) {
    RegularGraph g = build_rrg(n, degree, derive_seed(cell_seed, {0x77e6, attempt}));
    if (is_connected(g.topology)) return g;
  }
  throw ConnectivityError("no connected regular graph after " + std::to_string(spec.max_resamples) + " resamples");
}

inline ResultRow base_row(const ExperimentSpec& spec, std::size_t n, std::size_t trial) {
  ResultRow row;
  row.experiment = std::string(to_string(spec.name));
  row.n = n;
  row.r = radius_for(spec, n);
  row.k_or_r = (dense_family(spec.name) && !spec.radius) ? spec.k : row.r;
  row.trial = trial;
  row.reference_curve = reference_for(spec, n);
  return row;
}

template <typename G>
ResultRow reconstruction_row(ResultRow row, const G& g, const SeedStrategy& strategy) {
  const Graph& topo = topology_of(g);
  const ReconstructionResult res = reconstruct(g, strategy);
  if (res.edges != topo.edges()) throw std::logic_error("reconstruction differs from ground truth");
  row.seeds = to_string(strategy);
  row.seed_count = static_cast<double>(res.seed_count);
  row.phase1 = static_cast<double>(res.phase1_queries);
  row.phase2 = static_cast<double>(res.phase2_queries);
  row.total_queries = static_cast<double>(res.total_queries());
  row.edge_count = static_cast<double>(topo.edge_count());
  row.candidate_count = static_cast<double>(res.candidate_count);
  row.elapsed_s = res.elapsed;
  return row;
}

inline ResultRow nonedge_row(ResultRow row, const GeometricGraph& g, const SeedStrategy& strategy) {
  const auto started = std::chrono::steady_clock::now();
  const NonEdgeReport rep = nonedge_detection(g, strategy);
  row.seeds = to_string(strategy);
  row.seed_count = static_cast<double>(rep.seed_count);
  row.phase1 = static_cast<double>(rep.phase1_queries);
  row.phase2 = 0.0;
  row.total_queries = row.phase1;
  row.edge_count = static_cast<double>(g.topology.edge_count());
  row.nonedge_fraction = rep.fraction;
  row.directed_fraction = rep.directed_fraction;
  row.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return row;
}

// All rows of one (n, trial) cell.
inline std::vector<ResultRow> run_cell(const ExperimentSpec& spec, std::size_t n, std::size_t trial) {
  const std::uint64_t cell_seed = derive_seed(spec.base_rng_seed, {n, trial});
  const std::uint64_t seed_rng = derive_seed(cell_seed, {0x5eed});
  std::vector<ResultRow> rows;
  ResultRow base = base_row(spec, n, trial);
  try {
    Instance inst = make_instance(spec, n, cell_seed);
    const std::size_t nodes = inst.grg.node_count();
    base.graph_family = "grg";
    base.boundary = std::string(to_string(inst.grg.points.domain.boundary()));
    switch (spec.name) {
      case ExperimentName::ComplexityDense:
        rows.push_back(reconstruction_row(base, inst.grg, default_seeds(spec, n, nodes, seed_rng)));
        break;
      case ExperimentName::TorusVsSquare: {
        const SeedStrategy strategy = default_seeds(spec, n, nodes, seed_rng);
        rows.push_back(reconstruction_row(base, inst.grg, strategy));
        ResultRow sq = base;
        sq.boundary = "square";
        rows.push_back(reconstruction_row(sq, *inst.square, strategy));
        break;
      }
      case ExperimentName::SeedSizeSweep:
        // Same rng seed for every size: uniform draws are prefixes of one permutation, so seed sets are nested.
        for (std::size_t s : sweep_sizes(spec, n, nodes))
          rows.push_back(reconstruction_row(base, inst.grg, SeedStrategy::count(s, seed_rng)));
        break;
      case ExperimentName::RrgCompareSparse:
      case ExperimentName::RrgCompareDense: {
        const SeedStrategy strategy = default_seeds(spec, n, nodes, seed_rng);
        rows.push_back(reconstruction_row(base, inst.grg, strategy));
        const std::size_t degree = spec.name == ExperimentName::RrgCompareSparse
                                       ? spec.degree
                                       : matched_degree(mean_degree(inst.grg.topology), nodes);
        ResultRow rr = base;
        rr.graph_family = "rrg";
        rr.boundary = "none";
        rr.note = "degree=" + std::to_string(degree);
        const RegularGraph rrg = make_rrg(spec, nodes, degree, cell_seed);
        rows.push_back(reconstruction_row(rr, rrg, strategy));
        break;
      }
      case ExperimentName::NonEdgeSparse:
      case ExperimentName::NonEdgeDense:
        rows.push_back(nonedge_row(base, inst.grg, default_seeds(spec, n, nodes, seed_rng)));
        break;
    }
  } catch (const std::exception& e) {
    ResultRow err = base;
    err.row_type = RowType::Error;
    err.note = e.what();
    rows.assign(1, err);
  }
  return rows;
}

inline double mean_of(const std::vector<const ResultRow*>& rows, double ResultRow::*field) {
  double sum = 0.0;
  for (const auto* r : rows) sum += r->*field;
  return sum / static_cast<double>(rows.size());
}

inline double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

inline ResultRow aggregate(const std::vector<const ResultRow*>& rows) {
  ResultRow m = *rows.front();
  m.row_type = RowType::Mean;
  m.trial = rows.size();
  m.note = "trials=" + std::to_string(rows.size());
  for (auto field : {&ResultRow::seed_count, &ResultRow::phase1, &ResultRow::phase2, &ResultRow::total_queries,
                     &ResultRow::edge_count, &ResultRow::candidate_count, &ResultRow::elapsed_s})
    m.*field = mean_of(rows, field);
  std::vector<double> totals;
  for (const auto* r : rows) totals.push_back(r->total_queries);
  m.stderr_total = stderr_of(totals);
  if (rows.front()->nonedge_fraction) {
    std::vector<double> fr;
    double sum = 0.0, dsum = 0.0;
    for (const auto* r : rows) {
      fr.push_back(r->nonedge_fraction.value_or(0.0));
      sum += r->nonedge_fraction.value_or(0.0);
      dsum += r->directed_fraction.value_or(0.0);
    }
    m.nonedge_fraction = sum / static_cast<double>(rows.size());
    m.directed_fraction = dsum / static_cast<double>(rows.size());
    m.stderr_fraction = stderr_of(fr);
  }
  return m;
}

}  // namespace detail

// Runs every (n, trial) cell on a worker pool and returns, per n, the trial rows
// in trial order followed by one mean row per (family, boundary, seeds) group.
// Output is independent of the thread count.
inline std::vector<ResultRow> run(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t n : spec.n_values)
    for (std::size_t t = 0; t < spec.iterations; ++t) cells.emplace_back(n, t);

  std::vector<std::vector<ResultRow>> out(cells.size());
  std::size_t workers = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
      out[i] = detail::run_cell(spec, cells[i].first, cells[i].second);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::vector<ResultRow> rows;
  std::size_t cell = 0;
  for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
    std::vector<std::tuple<std::string, std::string, std::string>> order;
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<const ResultRow*>> groups;
    const std::size_t first = rows.size();
    for (std::size_t t = 0; t < spec.iterations; ++t, ++cell)
      for (auto& r : out[cell]) rows.push_back(std::move(r));
    for (std::size_t i = first; i < rows.size(); ++i) {
      const ResultRow& r = rows[i];
      if (r.row_type != RowType::Trial) continue;
      auto key = std::make_tuple(r.graph_family, r.boundary, r.seeds);
      if (!groups.contains(key)) order.push_back(key);
      groups[key].push_back(&r);
    }
    std::vector<ResultRow> means;
    for (const auto& key : order) means.push_back(detail::aggregate(groups[key]));
    for (auto& m : means) rows.push_back(std::move(m));
  }
  return rows;
}

// Rows under a "# ..." metadata line and the column header.
inline void write_csv_rows(std::ostream& os, std::string_view metadata, const std::vector<ResultRow>& rows) {
  os << "# schema=" << kCsvSchema << (metadata.empty() ? "" : " ") << metadata << '\n' << kCsvColumns << '\n';
  using detail::format_number;
  for (const auto& r : rows) {
    os << detail::csv_field(r.experiment) << ',' << to_string(r.row_type) << ',' << r.n << ','
       << format_number(r.k_or_r) << ',' << format_number(r.r) << ',' << r.trial << ',' << r.graph_family << ','
       << r.boundary << ',' << detail::csv_field(r.seeds) << ',' << format_number(r.seed_count) << ','
       << format_number(r.phase1) << ',' << format_number(r.phase2) << ',' << format_number(r.total_queries) << ','
       << format_number(r.edge_count) << ',' << format_number(r.candidate_count) << ','
       << (r.nonedge_fraction ? format_number(*r.nonedge_fraction) : "") << ','
       << (r.directed_fraction ? format_number(*r.directed_fraction) : "") << ',' << format_number(r.reference_curve)
       << ',' << format_number(r.stderr_total) << ',' << format_number(r.stderr_fraction) << ','
       << format_number(r.elapsed_s) << ',' << detail::csv_field(r.note) << '\n';
  }
}

inline void write_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  std::ostringstream meta;
  meta << "experiment=" << to_string(spec.name) << " base_seed=" << spec.base_rng_seed
       << " iterations=" << spec.iterations << " k=" << detail::format_number(spec.k) << " n_grid=";
  for (std::size_t i = 0; i < spec.n_values.size(); ++i) meta << (i ? ";" : "") << spec.n_values[i];
  write_csv_rows(os, meta.str(), rows);
}

// Least-squares slope of ln(mean total queries) against ln(n) over mean rows.
inline double fit_exponent(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.row_type != RowType::Mean) continue;
    for (const auto& p : pts)
      if (p.first == std::log(static_cast<double>(r.n)))
        throw ParameterError("fit_exponent: several mean rows for n = " + std::to_string(r.n));
    pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(r.total_queries));
  }
  if (pts.size() < 3) throw ParameterError("fit_exponent needs at least 3 distinct n values");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

// Reference-curve emission: (n, k, curve_value) rows.
inline void write_reference_csv(std::ostream& os, const std::vector<std::size_t>& n_values, const std::vector<double>& ks) {
  os << "n,k,curve_value\n";
  for (double k : ks)
    for (std::size_t n : n_values)
      os << n << ',' << detail::format_number(k) << ','
         << detail::format_number(bounds::complexity_curve(static_cast<double>(n), k)) << '\n';
}

}  // namespace grgsimple
