// Reconstructs one dense geometric random graph and prints the query budget.
#include <cmath>
#include <iostream>

#include "grgsimple/grgsimple.hpp"

int main() {
  using namespace grgsimple;

  const std::size_t n = 2000;
  const double k = 0.3;
  const double r = std::pow(static_cast<double>(n), k);

  GeometricGraph g = build_grg(sample_ppp(Domain::for_nodes(n, Boundary::Torus), 1.0, 42), r);
  if (!is_connected(g.topology)) {
    std::cerr << "instance is disconnected, try another seed\n";
    return 1;
  }

  const double eps = bounds::seed_exponents(k).epsilon;
  const auto result = reconstruct(g, SeedStrategy::count(seed_count(g.node_count(), eps), 7));

  std::cout << "nodes            " << g.node_count() << '\n'
            << "edges            " << g.topology.edge_count() << '\n'
            << "seeds            " << result.seed_count << '\n'
            << "phase-1 queries  " << result.phase1_queries << '\n'
            << "phase-2 queries  " << result.phase2_queries << '\n'
            << "exact            " << std::boolalpha << (result.edges == g.topology.edges()) << '\n'
            << "n^(2k+1)         " << bounds::complexity_curve(static_cast<double>(g.node_count()), k) << '\n';
}
