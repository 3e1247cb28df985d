#pragma once

#include <string>
#include <vector>

#include "polyreal/polyreal.hpp"

namespace fixtures {

inline const char* const kTetrahedron = "[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]";
inline const char* const kProjectivePlane6 =
    "[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,6],[2,3,6],[2,4,5],[2,5,6],[3,4,5],[3,4,6]]";
inline const char* const kTorus7 =
    "[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,7],[1,6,7],[2,3,6],[2,4,7],[2,5,6],[2,5,7],[3,4,5],"
    "[3,4,7],[3,6,7],[4,5,6]]";
// boundary of the octahedron
inline const char* const kOctahedron =
    "[[1,2,3],[1,3,4],[1,4,5],[1,2,5],[2,3,6],[3,4,6],[4,5,6],[2,5,6]]";

inline polyreal::SurfaceComplex parse(const char* text) { return polyreal::parse_triangulation(text); }

inline std::string data_path(const std::string& name) {
  return std::string(POLYREAL_DATA_DIR) + "/" + name;
}

inline polyreal::Corpus corpus(const std::string& name) { return polyreal::read_corpus(data_path(name)); }

/// Uniform random points in [-h, h]^3 in general position.
inline std::vector<polyreal::LatticePoint> random_general_position(polyreal::Rng& rng, int n,
                                                                   std::int64_t h) {
  std::vector<polyreal::LatticePoint> pts(n);
  do {
    for (auto& p : pts) p = {rng.uniform_int(-h, h), rng.uniform_int(-h, h), rng.uniform_int(-h, h)};
  } while (!polyreal::in_general_position(pts));
  return pts;
}

}  // namespace fixtures
