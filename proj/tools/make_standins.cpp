// Writes the synthetic corpus stand-ins to a directory.
//
//   make_standins <out-dir>

#include <filesystem>
#include <iostream>

#include "graphmix/graph.hpp"
#include "graphmix/metrics.hpp"
#include "standins.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_standins <out-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  for (const auto& spec : standins::corpus()) {
    const auto g = standins::build(spec);
    const auto path = dir / (spec.name + ".edges");
    graphmix::save_graph(path.string(), g);
    std::cout << spec.name << ": n=" << g.vertex_count() << " m=" << g.edge_count()
              << " clustering=" << graphmix::global_clustering(g) << " dmax=" << g.max_degree() << '\n';
  }
  return 0;
}
