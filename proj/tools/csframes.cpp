#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csf/composition.hpp"
#include "csf/equivalence.hpp"
#include "csf/io.hpp"
#include "csf/random.hpp"

namespace {

using namespace csf;

// Exit codes: 0 success (or SIMILAR verdict), 1 unreadable input,
// 2 not a frame, 3 NOT_SIMILAR verdict, 4 mismatched shapes or kinds,
// 5 any other domain failure. CLI11 usage errors keep their own codes
// (>= 100).
int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
      return 1;
    case ErrorCode::NotAFrame:
      return 2;
    case ErrorCode::SpecMismatch:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IncompatibleRanges:
    case ErrorCode::InconsistentIndexing:
    case ErrorCode::InvalidArgument:
      return 4;
    default:
      return 5;
  }
}

std::string human(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

const char* word(bool b) { return b ? "true" : "false"; }

double resolve_tolerance(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CSFRAMES_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument,
                  "CSFRAMES_TOL must be a positive number, got \"" +
                      std::string(env) + "\"");
    }
    return v;
  }
  return 1e-9;
}

void write_output(const FrameFile& file, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << serialize(file);
  } else {
    save_frame_file(file, out_path);
  }
}

struct AnalyzeOptions {
  std::string path;
  std::optional<double> tol_flag;
  bool json = false;
};

int cmd_analyze(const AnalyzeOptions& opt) {
  const Tolerance tol{resolve_tolerance(opt.tol_flag), 1e-12};
  const FrameFile file = load_frame_file(opt.path);

  if (file.kind == FrameKind::vector_frame) {
    const VectorFrame vf = to_vector_frame(file);
    const VectorFrameBounds b = vector_frame_bounds(vf, tol);
    const ModuleOperator d = rank_one_sum(vf);
    const bool tight = b.upper - b.lower <= tol.unit_threshold(b.upper);
    const bool parseval =
        norm(d - ModuleOperator::identity(vf.spec(), vf.ambient_rank())) <=
        tol.unit_threshold(norm(d));
    if (opt.json) {
      std::cout << "{\"a\":" << format_float(b.lower)
                << ",\"b\":" << format_float(b.upper)
                << ",\"kind\":\"vector_frame\",\"parseval\":" << word(parseval)
                << ",\"tight\":" << word(tight) << "}\n";
    } else {
      std::cout << "a=" << human(b.lower) << " b=" << human(b.upper)
                << " tight=" << word(tight) << " parseval=" << word(parseval)
                << "\n";
    }
    return 0;
  }

  const OperatorFrame f = to_operator_frame(file, tol);
  const FrameAnalysis a = analyze(f, tol);
  const bool tight =
      a.upper_bound - a.lower_bound <= tol.unit_threshold(a.upper_bound);
  const bool parseval = is_parseval(f, tol);
  const bool non_degenerate = is_non_degenerate(f, tol);
  const std::vector<int> ranks = projection_block_ranks(a.projection);

  std::string rank_list;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (k) rank_list += ',';
    rank_list += std::to_string(ranks[k]);
  }
  if (opt.json) {
    std::cout << "{\"a\":" << format_float(a.lower_bound)
              << ",\"b\":" << format_float(a.upper_bound)
              << ",\"kind\":\"operator_frame\",\"non_degenerate\":"
              << word(non_degenerate) << ",\"parseval\":" << word(parseval)
              << ",\"ranks\":[" << rank_list << "],\"tight\":" << word(tight)
              << "}\n";
  } else {
    std::cout << "a=" << human(a.lower_bound) << " b=" << human(a.upper_bound)
              << " tight=" << word(tight) << " parseval=" << word(parseval)
              << " non_degenerate=" << word(non_degenerate) << " ranks=["
              << rank_list << "]\n";
  }
  return 0;
}

struct SimilarOptions {
  std::string path_a;
  std::string path_b;
  std::optional<double> tol_flag;
  bool json = false;
};

int cmd_similar(const SimilarOptions& opt) {
  const Tolerance tol{resolve_tolerance(opt.tol_flag), 1e-12};
  const OperatorFrame fa = to_operator_frame(load_frame_file(opt.path_a), tol);
  const OperatorFrame fb = to_operator_frame(load_frame_file(opt.path_b), tol);
  const SimilarityResult r = detect_right_similarity(fa, fb, tol);

  if (r.witness) {
    const bool unitary = r.witness->kind == SimilarityKind::right_unitary;
    if (opt.json) {
      std::cout << "{\"projection_gap\":" << format_float(r.projection_gap)
                << ",\"residual\":" << format_float(r.witness->residual)
                << ",\"transform\":" << operator_to_json(r.witness->transform)
                << ",\"unitary\":" << word(unitary)
                << ",\"verdict\":\"SIMILAR\"}\n";
    } else {
      std::cout << "SIMILAR unitary=" << word(unitary)
                << " residual=" << human(r.witness->residual) << "\n"
                << "T=" << operator_to_json(r.witness->transform) << "\n";
    }
    return 0;
  }
  if (opt.json) {
    std::cout << "{\"projection_gap\":" << format_float(r.projection_gap)
              << ",\"verdict\":\"NOT_SIMILAR\"}\n";
  } else {
    std::cout << "NOT_SIMILAR projection_gap=" << human(r.projection_gap)
              << "\n";
  }
  return 3;
}

struct TransformOptions {
  std::string path;
  std::string out;
  std::optional<double> tol_flag;
};

int cmd_parseval(const TransformOptions& opt) {
  const Tolerance tol{resolve_tolerance(opt.tol_flag), 1e-12};
  const FrameFile file = load_frame_file(opt.path);

  FrameFile result;
  if (file.kind == FrameKind::vector_frame) {
    const VectorFrame vf = to_vector_frame(file);
    vector_frame_bounds(vf, tol);  // frame check; throws NotAFrame otherwise
    const ModuleOperator root_inverse =
        positive_power(rank_one_sum(vf), -0.5, tol);
    std::vector<ModuleVector> normalized;
    normalized.reserve(static_cast<std::size_t>(vf.size()));
    for (int j = 0; j < vf.size(); ++j) {
      normalized.push_back(apply(root_inverse, vf.vector(j)));
    }
    result = to_frame_file(VectorFrame(normalized));
  } else {
    const OperatorFrame f = to_operator_frame(file, tol);
    result = to_frame_file(parseval_normalize(f, tol));
  }
  write_output(result, opt.out);
  return 0;
}

struct ComposeOptions {
  std::string path_outer;
  std::string path_inner;
  std::string out;
  std::optional<double> tol_flag;
};

int cmd_compose(const ComposeOptions& opt) {
  const Tolerance tol{resolve_tolerance(opt.tol_flag), 1e-12};
  const OperatorFrame outer =
      to_operator_frame(load_frame_file(opt.path_outer), tol);
  const OperatorFrame inner =
      to_operator_frame(load_frame_file(opt.path_inner), tol);
  const ComposedFrame c = compose(outer, inner, tol);
  write_output(to_frame_file(c.frame), opt.out);
  return 0;
}

struct GenerateOptions {
  std::vector<int> blocks{2};
  int rank = 2;
  int count = 3;
  std::uint64_t seed = 1;
  bool isometry = false;
  std::string out;
  std::optional<double> tol_flag;
};

int cmd_generate(const GenerateOptions& opt) {
  const Tolerance tol{resolve_tolerance(opt.tol_flag), 1e-12};
  const AlgebraSpec spec(opt.blocks);
  Rng rng(opt.seed);
  const int rows = opt.rank * opt.count;
  const ModuleOperator t =
      opt.isometry ? random_isometry(rng, spec, rows, opt.rank)
                   : random_left_invertible(rng, spec, rows, opt.rank);
  const OperatorFrame f =
      frame_from_transform(spec, opt.rank, opt.count, t, tol);
  write_output(to_frame_file(f), opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Frame calculator for standard modules over finite-dimensional "
      "C*-algebras"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "Report frame bounds, Parseval/tight verdicts, and ranks");
  analyze_cmd->add_option("path", analyze_opt.path, "frame file")->required();
  analyze_cmd->add_option("--tol", analyze_opt.tol_flag,
                          "relative tolerance (default 1e-9 or CSFRAMES_TOL)");
  analyze_cmd->add_flag("--json", analyze_opt.json, "machine-readable report");

  SimilarOptions similar_opt;
  CLI::App* similar_cmd = app.add_subcommand(
      "similar", "Decide right similarity of two frames and print a witness");
  similar_cmd->add_option("pathA", similar_opt.path_a, "first frame file")
      ->required();
  similar_cmd->add_option("pathB", similar_opt.path_b, "second frame file")
      ->required();
  similar_cmd->add_option("--tol", similar_opt.tol_flag,
                          "relative tolerance (default 1e-9 or CSFRAMES_TOL)");
  similar_cmd->add_flag("--json", similar_opt.json, "machine-readable report");

  TransformOptions parseval_opt;
  CLI::App* parseval_cmd = app.add_subcommand(
      "parseval", "Rescale a frame to its canonical Parseval form");
  parseval_cmd->add_option("path", parseval_opt.path, "frame file")
      ->required();
  parseval_cmd->add_option("--out", parseval_opt.out,
                           "output path (stdout when omitted)");
  parseval_cmd->add_option("--tol", parseval_opt.tol_flag,
                           "relative tolerance (default 1e-9 or CSFRAMES_TOL)");

  ComposeOptions compose_opt;
  CLI::App* compose_cmd = app.add_subcommand(
      "compose", "Multiply an outer frame against an inner frame");
  compose_cmd
      ->add_option("pathB", compose_opt.path_outer, "outer frame file")
      ->required();
  compose_cmd
      ->add_option("pathA", compose_opt.path_inner, "inner frame file")
      ->required();
  compose_cmd->add_option("--out", compose_opt.out,
                          "output path (stdout when omitted)");
  compose_cmd->add_option("--tol", compose_opt.tol_flag,
                          "relative tolerance (default 1e-9 or CSFRAMES_TOL)");

  GenerateOptions generate_opt;
  CLI::App* generate_cmd = app.add_subcommand(
      "generate", "Build a seeded random frame from a left-invertible "
                  "transform");
  generate_cmd
      ->add_option("--blocks", generate_opt.blocks,
                   "algebra block dimensions, e.g. --blocks 1,2")
      ->delimiter(',');
  generate_cmd->add_option("--rank", generate_opt.rank, "module rank N")
      ->check(CLI::PositiveNumber);
  generate_cmd
      ->add_option("--count", generate_opt.count, "number of frame elements")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", generate_opt.seed, "RNG seed");
  generate_cmd->add_flag("--isometry", generate_opt.isometry,
                         "draw an isometric transform (Parseval output)");
  generate_cmd->add_option("--out", generate_opt.out,
                           "output path (stdout when omitted)");
  generate_cmd->add_option("--tol", generate_opt.tol_flag,
                           "relative tolerance (default 1e-9 or CSFRAMES_TOL)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_opt);
    if (similar_cmd->parsed()) return cmd_similar(similar_opt);
    if (parseval_cmd->parsed()) return cmd_parseval(parseval_opt);
    if (compose_cmd->parsed()) return cmd_compose(compose_opt);
    if (generate_cmd->parsed()) return cmd_generate(generate_opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 5;
  }
  return 0;
}
