#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyreal/polyreal.hpp"

namespace {

using namespace polyreal;

struct LineRange {
  int first = 1;
  int last = std::numeric_limits<int>::max();
};

LineRange parse_line_range(const std::string& text) {
  LineRange r;
  if (text.empty()) return r;
  const auto colon = text.find(':');
  auto num = [&](const std::string& s, int fallback) { return s.empty() ? fallback : std::stoi(s); };
  if (colon == std::string::npos) {
    r.first = r.last = std::stoi(text);
  } else {
    r.first = num(text.substr(0, colon), 1);
    r.last = num(text.substr(colon + 1), std::numeric_limits<int>::max());
  }
  if (r.first < 1 || r.first > r.last) throw std::invalid_argument("bad line range '" + text + "'");
  return r;
}

Corpus load(const std::string& path, const std::string& range_text) {
  const LineRange range = parse_line_range(range_text);
  Corpus corpus = read_corpus(path, range.first, range.last);
  for (const CorpusDiagnostic& d : corpus.diagnostics)
    std::cerr << path << ":" << d.line << ": " << d.message << "\n";
  return corpus;
}

std::ostream& output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  return file;
}

void run_check(const std::string& corpus_path, const std::string& range, const std::string& out_path) {
  const Corpus corpus = load(corpus_path, range);
  std::ofstream file;
  std::ostream& out = output(file, out_path);
  for (const CorpusEntry& e : corpus.entries) {
    const SurfaceComplex& c = e.complex;
    const auto [f0, f1, f2] = c.f_vector();
    const ObstructionVerdict verdict = triple_point_feasible(c);
    out << "line=" << e.id.line << "\tf=(" << f0 << "," << f1 << "," << f2 << ")"
        << "\tchi=" << c.euler_characteristic() << "\tsurface=" << c.surface_name()
        << "\torientable=" << (c.orientable() ? "yes" : "no")
        << "\theawood_min=" << heawood_minimum(c.euler_characteristic()) << "\tobstruction=";
    if (!verdict.applicable)
      out << "n/a";
    else if (verdict.proves_non_realizable())
      out << "no_triple_point";
    else
      out << "triple_point_possible(" << (*verdict.witness)[0] + 1 << "," << (*verdict.witness)[1] + 1
          << "," << (*verdict.witness)[2] + 1 << ")";
    out << "\n";
  }
  std::cerr << corpus.entries.size() << " triangulations checked, " << corpus.diagnostics.size()
            << " malformed lines\n";
}

void run_aut(const std::string& corpus_path, const std::string& range, const std::string& out_path,
             bool list_all) {
  const Corpus corpus = load(corpus_path, range);
  std::ofstream file;
  std::ostream& out = output(file, out_path);
  for (const CorpusEntry& e : corpus.entries) {
    const auto group = enumerate_automorphisms(e.complex);
    out << "line=" << e.id.line << "\torder=" << group.size() << "\tgenerators=";
    const auto gens = generating_set(group);
    for (std::size_t i = 0; i < gens.size(); ++i) out << (i ? " " : "") << cycle_notation(gens[i]);
    if (gens.empty()) out << "()";
    out << "\n";
    if (!list_all) continue;
    for (const Automorphism& a : group) {
      out << "  " << cycle_notation(a.image) << "\torder=" << a.order
          << "\tfixed_vertices=" << a.fixed_vertices.size();
      if (a.orientation_preserving) out << "\torientation=" << (*a.orientation_preserving ? "+" : "-");
      out << "\tcompatible=";
      const auto isos = compatible_isometries(a, e.complex);
      if (isos.empty()) out << "-";
      for (std::size_t i = 0; i < isos.size(); ++i) out << (i ? "," : "") << kind_name(isos[i].kind);
      out << "\n";
    }
  }
}

struct RealizeArgs {
  std::string corpus;
  std::string output;
  std::string mode = "auto";
  std::string symmetry = "none";
  std::optional<int> inner_box, outer_box;
  std::optional<std::uint64_t> max_steps;
  double restart_ratio = 0.01;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string line_range;
  std::string trace;
};

void run_realize(const RealizeArgs& args) {
  RealizeOptions opt;
  if (args.mode == "embed") opt.mode = Mode::Embed;
  else if (args.mode == "immerse") opt.mode = Mode::Immerse;
  else if (args.mode != "auto") throw std::invalid_argument("mode must be auto, embed or immerse");
  opt.symmetry = SymmetryRequest::parse(args.symmetry);
  opt.inner_box = args.inner_box;
  opt.outer_box = args.outer_box;
  opt.max_steps = args.max_steps;
  opt.restart_ratio = args.restart_ratio;
  opt.seed = args.seed;
  opt.jobs = args.jobs;
  if (!args.trace.empty() && args.jobs != 1) throw std::invalid_argument("--trace needs --jobs 1");

  const Corpus corpus = load(args.corpus, args.line_range);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  std::size_t realized = 0, obstructed = 0, exhausted = 0, init_failed = 0;
  auto tally = [&](const ResultRecord& r) {
    switch (r.status) {
      case SearchStatus::Realized: ++realized; break;
      case SearchStatus::Obstructed: ++obstructed; break;
      case SearchStatus::StepBudgetExhausted: ++exhausted; break;
      case SearchStatus::InitFailed: ++init_failed; break;
    }
  };
  auto report = [&](std::size_t done, std::size_t total, const ResultRecord& r) {
    tally(r);
    std::fprintf(stderr, "[%zu/%zu] line %d %s %s steps=%llu restarts=%llu (%.1fs)\n", done, total,
                 r.id.line, r.symmetry.c_str(), status_name(r.status),
                 static_cast<unsigned long long>(r.steps), static_cast<unsigned long long>(r.restarts),
                 elapsed());
  };

  std::vector<ResultRecord> records;
  if (!args.trace.empty()) {
    std::ofstream trace(args.trace);
    if (!trace) throw IoError("cannot open " + args.trace + " for writing");
    trace << "# line\taut_index\tstep\tkind\tobjective\n";
    const auto plan = plan_instances(corpus, opt);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const CorpusEntry& entry = corpus.entries[plan[k].entry];
      const int aut = plan[k].aut_index;
      auto observer = [&](const StepEvent& ev) {
        static constexpr const char* kinds[] = {"decrease", "plateau", "restart"};
        trace << entry.id.line << '\t' << aut << '\t' << ev.step << '\t'
              << kinds[static_cast<int>(ev.kind)] << '\t' << std::hexfloat << ev.objective
              << std::defaultfloat << '\n';
      };
      records.push_back(run_instance(entry, plan[k], opt, observer));
      report(k + 1, plan.size(), records.back());
    }
  } else {
    records = realize_corpus(corpus, opt, [&](const RealizeProgress& p) {
      report(p.done, p.total, p.record);
    });
  }
  write_results(records, args.output);
  std::fprintf(stderr,
               "%zu instances: %zu realized, %zu obstructed, %zu exhausted, %zu init failed "
               "(%.1fs)\n",
               records.size(), realized, obstructed, exhausted, init_failed, elapsed());
}

int run_verify(const std::string& path) {
  try {
    const auto records = read_results(path);
    std::size_t realized = 0;
    for (const ResultRecord& r : records) realized += r.status == SearchStatus::Realized;
    std::cerr << records.size() << " records read, " << realized << " realizations re-verified\n";
    return 0;
  } catch (const CorruptRecord& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  }
}

void run_export(const std::string& results, int record, int line, const std::string& out_path) {
  const auto records = read_results(results);
  const ResultRecord* chosen = nullptr;
  if (line > 0) {
    for (const ResultRecord& r : records)
      if (r.id.line == line && (!chosen || (r.status == SearchStatus::Realized &&
                                            chosen->status != SearchStatus::Realized)))
        chosen = &r;
    if (!chosen) throw std::invalid_argument("no record for corpus line " + std::to_string(line));
  } else {
    if (record < 1 || record > static_cast<int>(records.size()))
      throw std::invalid_argument("record index out of range (1.." + std::to_string(records.size()) + ")");
    chosen = &records[record - 1];
  }
  if (chosen->status != SearchStatus::Realized)
    std::cerr << "warning: exporting a record with status " << status_name(chosen->status) << "\n";
  export_obj(parse_triangulation(chosen->triangles), chosen->coords, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for polyhedral embeddings and immersions of triangulated surfaces"};
  app.require_subcommand(1);

  std::string corpus, range, out;
  bool list_all = false;

  auto* check = app.add_subcommand("check", "Validate, classify and test the triple-point obstruction");
  check->add_option("corpus", corpus, "Triangulation list, one per line")->required();
  check->add_option("--line-range", range, "Corpus lines FIRST:LAST (1-based, inclusive)");
  check->add_option("-o,--output", out, "Output file (default stdout)");

  auto* aut = app.add_subcommand("aut", "Enumerate combinatorial automorphisms");
  aut->add_option("corpus", corpus, "Triangulation list, one per line")->required();
  aut->add_option("--line-range", range, "Corpus lines FIRST:LAST (1-based, inclusive)");
  aut->add_option("-o,--output", out, "Output file (default stdout)");
  aut->add_flag("--all", list_all, "List every automorphism with its compatible symmetry types");

  RealizeArgs rargs;
  auto* realize = app.add_subcommand("realize", "Run the coordinate search");
  realize->add_option("corpus", rargs.corpus, "Triangulation list, one per line")->required();
  realize->add_option("-o,--output", rargs.output, "Results file")->required();
  realize->add_option("--mode", rargs.mode, "auto, embed or immerse")
      ->check(CLI::IsMember({"auto", "embed", "immerse"}));
  realize->add_option("--symmetry", rargs.symmetry, "none, all, or one of MIRROR ROT2 ROT3 ROT4 "
                                                    "INVERSION ROTREF4 ROTREF6 D2");
  realize->add_option("--inner-box", rargs.inner_box, "Side length of the initialization box");
  realize->add_option("--outer-box", rargs.outer_box, "Side length of the search box");
  realize->add_option("--max-steps", rargs.max_steps, "Step budget per instance");
  realize->add_option("--restart-ratio", rargs.restart_ratio, "Restart probability at a local minimum")
      ->check(CLI::Range(0.0, 1.0));
  realize->add_option("--seed", rargs.seed, "Base random seed");
  realize->add_option("--jobs", rargs.jobs, "Worker threads")->check(CLI::PositiveNumber);
  realize->add_option("--line-range", rargs.line_range, "Corpus lines FIRST:LAST (1-based, inclusive)");
  realize->add_option("--trace", rargs.trace, "Write every step (line, instance, step, kind, objective)");

  std::string results;
  auto* verify = app.add_subcommand("verify", "Re-check every REALIZED record of a results file");
  verify->add_option("results", results, "Results file")->required();

  int record = 0, line = 0;
  auto* exp = app.add_subcommand("export", "Write an OBJ mesh for one results record");
  exp->add_option("results", results, "Results file")->required();
  auto* rec_opt = exp->add_option("--record", record, "Record number (1-based)");
  auto* line_opt = exp->add_option("--line", line, "Corpus line; prefers a REALIZED record");
  rec_opt->excludes(line_opt);
  exp->add_option("-o,--output", out, "OBJ file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) run_check(corpus, range, out);
    if (*aut) run_aut(corpus, range, out, list_all);
    if (*realize) run_realize(rargs);
    if (*verify) return run_verify(results);
    if (*exp) {
      if (record == 0 && line == 0) record = 1;
      run_export(results, record, line, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
