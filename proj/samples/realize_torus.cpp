// Embeds the 7-vertex torus in the integer lattice and prints an OBJ mesh.
#include <iostream>

#include "polyreal/polyreal.hpp"

int main() {
  using namespace polyreal;
  const SurfaceComplex torus = parse_triangulation(
      "[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,7],[1,6,7],[2,3,6],[2,4,7],[2,5,6],[2,5,7],[3,4,5],"
      "[3,4,7],[3,6,7],[4,5,6]]");
  SearchConfig config = default_config_for(torus, false);
  config.seed = 2024;
  const SearchOutcome out = run_search(torus, config);
  std::cerr << status_name(out.status) << " after " << out.steps_used << " steps\n";
  if (out.status != SearchStatus::Realized) return 1;
  std::cout << format_obj(torus, out.coordinates.coords);
}
