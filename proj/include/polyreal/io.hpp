#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyreal/automorphisms.hpp"
#include "polyreal/complex.hpp"
#include "polyreal/exactgeom.hpp"
#include "polyreal/objective.hpp"
#include "polyreal/search.hpp"
#include "polyreal/symmetry.hpp"

namespace polyreal {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A results line that is malformed or whose REALIZED coordinates fail to
/// re-verify.
class CorruptRecord : public std::runtime_error {
 public:
  CorruptRecord(int line, const std::string& what)
      : std::runtime_error("results line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct TriangulationId {
  std::string file;
  int line = 0;  // 1-based
  bool operator==(const TriangulationId&) const = default;
};

struct CorpusEntry {
  TriangulationId id;
  SurfaceComplex complex;
};

struct CorpusDiagnostic {
  int line;
  std::string message;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::vector<CorpusDiagnostic> diagnostics;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

template <typename Int>
Int parse_int(std::string_view s, const char* what) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// One triangulation per line in nested-list form, optionally prefixed by a
/// `name=`; blank lines and lines starting with '#' are skipped. Malformed
/// lines become diagnostics. `first_line`/`last_line` (1-based, inclusive)
/// restrict which lines are read.
inline Corpus read_corpus(const std::filesystem::path& path, int first_line = 1,
                          int last_line = std::numeric_limits<int>::max()) {
  const auto lines = detail::split_lines(detail::read_file(path));
  Corpus corpus;
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    const int lineno = i + 1;
    if (lineno < first_line || lineno > last_line) continue;
    std::string text = detail::trim(lines[i]);
    if (text.empty() || text[0] == '#') continue;
    if (const auto eq = text.find('='); eq != std::string::npos) text = detail::trim(text.substr(eq + 1));
    try {
      corpus.entries.push_back({{path.string(), lineno}, parse_triangulation(text)});
    } catch (const ComplexError& e) {
      corpus.diagnostics.push_back({lineno, e.what()});
    }
  }
  if (corpus.entries.empty())
    throw IoError("corpus " + path.string() + " contains no valid triangulation");
  return corpus;
}

struct ResultRecord {
  TriangulationId id;
  Mode mode = Mode::Embed;
  std::string symmetry = "none";
  SearchStatus status = SearchStatus::StepBudgetExhausted;
  std::uint64_t steps = 0;
  std::uint64_t restarts = 0;
  std::uint64_t seed = 0;
  std::vector<LatticePoint> coords;
  std::uint64_t aut_group_order = 1;
  /// The triangulation in list form, so records re-verify without the corpus.
  std::string triangles;

  bool operator==(const ResultRecord&) const = default;
};

inline constexpr std::string_view kResultsHeader = "# polyreal-results v1";

namespace detail {

inline std::string coords_to_string(const std::vector<LatticePoint>& coords) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(coords[i].x) + ',' + std::to_string(coords[i].y) + ',' +
           std::to_string(coords[i].z);
  }
  return out;
}

inline std::vector<LatticePoint> coords_from_string(std::string_view s) {
  std::vector<LatticePoint> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(';', start), s.size());
    const std::string_view triple = s.substr(start, end - start);
    const std::size_t c1 = triple.find(','), c2 = triple.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw std::invalid_argument("coordinate triple needs three entries");
    out.push_back({parse_int<std::int64_t>(triple.substr(0, c1), "coordinate"),
                   parse_int<std::int64_t>(triple.substr(c1 + 1, c2 - c1 - 1), "coordinate"),
                   parse_int<std::int64_t>(triple.substr(c2 + 1), "coordinate")});
    start = end + 1;
  }
  return out;
}

// psi(g(v)) == M_g psi(v) for the generators named in a descriptor.
inline bool descriptor_satisfied(const std::string& descriptor, const SurfaceComplex& c,
                                 const std::vector<LatticePoint>& coords) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("symmetry descriptor lacks ':'");
  const auto kind = parse_kind(descriptor.substr(0, colon));
  if (!kind) throw std::invalid_argument("unknown symmetry kind in '" + descriptor + "'");
  const LatticeIsometry& iso = catalog_isometry(*kind);
  std::vector<std::string> parts;
  std::string rest = descriptor.substr(colon + 1);
  for (std::size_t b = 0;;) {
    const auto bar = rest.find('|', b);
    parts.push_back(rest.substr(b, bar == std::string::npos ? std::string::npos : bar - b));
    if (bar == std::string::npos) break;
    b = bar + 1;
  }
  if (parts.size() != iso.matrices.size())
    throw std::invalid_argument("descriptor generator count does not match its kind");
  for (std::size_t g = 0; g < parts.size(); ++g) {
    const Permutation p = parse_cycle_notation(parts[g], c.vertex_count());
    if (!is_automorphism(c, p)) return false;
    for (Vertex v = 0; v < c.vertex_count(); ++v)
      if (coords[p[v]] != iso.matrices[g].apply(coords[v])) return false;
  }
  return true;
}

}  // namespace detail

/// Tab-separated key=value fields, one record per line, after a versioned
/// header. Written atomically.
inline std::string format_results(const std::vector<ResultRecord>& records) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultRecord& r : records) {
    if (r.id.file.find_first_of("\t\n") != std::string::npos)
      throw IoError("triangulation file name contains a tab or newline");
    out += "file=" + r.id.file;
    out += "\tline=" + std::to_string(r.id.line);
    out += std::string("\tmode=") + mode_name(r.mode);
    out += "\tsymmetry=" + r.symmetry;
    out += std::string("\tstatus=") + status_name(r.status);
    out += "\tsteps=" + std::to_string(r.steps);
    out += "\trestarts=" + std::to_string(r.restarts);
    out += "\tseed=" + std::to_string(r.seed);
    out += "\taut_order=" + std::to_string(r.aut_group_order);
    out += "\ttriangles=" + r.triangles;
    out += "\tcoords=" + detail::coords_to_string(r.coords);
    out += '\n';
  }
  return out;
}

inline void write_results(const std::vector<ResultRecord>& records,
                          const std::filesystem::path& path) {
  detail::write_atomically(path, format_results(records));
}

/// Throws CorruptRecord when a line is malformed or a REALIZED record's
/// coordinates no longer realize its triangulation.
inline std::vector<ResultRecord> parse_results(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != kResultsHeader)
    throw CorruptRecord(1, "missing header '" + std::string(kResultsHeader) + "'");
  std::vector<ResultRecord> records;
  for (int i = 1; i < static_cast<int>(lines.size()); ++i) {
    const int lineno = i + 1;
    if (detail::trim(lines[i]).empty()) continue;
    std::map<std::string, std::string> fields;
    std::istringstream in(lines[i]);
    std::string field;
    while (std::getline(in, field, '\t')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw CorruptRecord(lineno, "field without '=': " + field);
      fields[field.substr(0, eq)] = field.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
      auto it = fields.find(key);
      if (it == fields.end()) throw CorruptRecord(lineno, std::string("missing field ") + key);
      return it->second;
    };
    ResultRecord r;
    try {
      r.id = {get("file"), detail::parse_int<int>(get("line"), "line")};
      const std::string& mode = get("mode");
      if (mode != "embed" && mode != "immerse") throw std::invalid_argument("bad mode " + mode);
      r.mode = mode == "embed" ? Mode::Embed : Mode::Immerse;
      r.symmetry = get("symmetry");
      const auto status = parse_status(get("status"));
      if (!status) throw std::invalid_argument("bad status " + get("status"));
      r.status = *status;
      r.steps = detail::parse_int<std::uint64_t>(get("steps"), "steps");
      r.restarts = detail::parse_int<std::uint64_t>(get("restarts"), "restarts");
      r.seed = detail::parse_int<std::uint64_t>(get("seed"), "seed");
      r.aut_group_order = detail::parse_int<std::uint64_t>(get("aut_order"), "aut_order");
      r.triangles = get("triangles");
      r.coords = detail::coords_from_string(get("coords"));
    } catch (const CorruptRecord&) {
      throw;
    } catch (const std::exception& e) {
      throw CorruptRecord(lineno, e.what());
    }
    if (r.status == SearchStatus::Realized) {
      try {
        const SurfaceComplex c = parse_triangulation(r.triangles);
        if (static_cast<int>(r.coords.size()) != c.vertex_count())
          throw CorruptRecord(lineno, "coordinate count does not match the vertex count");
        for (const LatticePoint& p : r.coords)
          if (p.max_abs() > kIntersectionCoordinateBound)
            throw CorruptRecord(lineno, "coordinate outside the exact arithmetic range");
        if (!verify_realization(c, r.coords, r.mode))
          throw CorruptRecord(lineno, "REALIZED coordinates fail exact verification");
        if (r.symmetry != "none" && !detail::descriptor_satisfied(r.symmetry, c, r.coords))
          throw CorruptRecord(lineno, "REALIZED coordinates violate the recorded symmetry");
      } catch (const CorruptRecord&) {
        throw;
      } catch (const std::exception& e) {
        throw CorruptRecord(lineno, e.what());
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<ResultRecord> read_results(const std::filesystem::path& path) {
  return parse_results(detail::read_file(path));
}

inline std::string format_obj(const SurfaceComplex& c, const std::vector<LatticePoint>& coords) {
  if (static_cast<int>(coords.size()) != c.vertex_count())
    throw std::invalid_argument("coordinate count " + std::to_string(coords.size()) +
                                " does not match vertex count " + std::to_string(c.vertex_count()));
  std::string out;
  for (const LatticePoint& p : coords)
    out += "v " + std::to_string(p.x) + ' ' + std::to_string(p.y) + ' ' + std::to_string(p.z) + '\n';
  for (const Triangle& t : c.triangles())
    out += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' +
           std::to_string(t[2] + 1) + '\n';
  return out;
}

inline void export_obj(const SurfaceComplex& c, const std::vector<LatticePoint>& coords,
                       const std::filesystem::path& path) {
  detail::write_atomically(path, format_obj(c, coords));
}

struct ObjMesh {
  std::vector<LatticePoint> coords;
  std::vector<Triangle> triangles;  // 0-based
};

/// Reads integer `v` and triangular `f` lines (`f i/j/k` forms accepted);
/// other statements are ignored.
inline ObjMesh parse_obj(const std::string& text) {
  ObjMesh mesh;
  const auto lines = detail::split_lines(text);
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    std::istringstream in(lines[i]);
    std::string tag;
    if (!(in >> tag)) continue;
    try {
      if (tag == "v") {
        std::string x, y, z;
        if (!(in >> x >> y >> z)) throw std::invalid_argument("vertex needs three coordinates");
        mesh.coords.push_back({detail::parse_int<std::int64_t>(x, "coordinate"),
                               detail::parse_int<std::int64_t>(y, "coordinate"),
                               detail::parse_int<std::int64_t>(z, "coordinate")});
      } else if (tag == "f") {
        std::array<int, 3> t{};
        std::string tok;
        for (int k = 0; k < 3; ++k) {
          if (!(in >> tok)) throw std::invalid_argument("face needs three vertices");
          t[k] = detail::parse_int<int>(std::string_view(tok).substr(0, tok.find('/')), "face index") - 1;
        }
        if (in >> tok) throw std::invalid_argument("only triangular faces are supported");
        mesh.triangles.push_back(make_triangle(t[0], t[1], t[2]));
      }
    } catch (const std::invalid_argument& e) {
      throw IoError("obj line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return mesh;
}

inline ObjMesh import_obj(const std::filesystem::path& path) {
  return parse_obj(detail::read_file(path));
}

}  // namespace polyreal
