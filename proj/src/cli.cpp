#include "wsvm/cli.hpp"

#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "wsvm/error.hpp"
#include "wsvm/mesh_io.hpp"
#include "wsvm/pipeline.hpp"
#include "wsvm/report.hpp"
#include "wsvm/seedgen.hpp"

namespace wsvm {

namespace {

MeshFormat input_format(const std::string& path) {
  try {
    return format_from_path(path);
  } catch (const Error&) {
    return MeshFormat::Medit;
  }
}

MeshFormat output_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_format(flag);
  try {
    return format_from_path(path);
  } catch (const Error&) {
    return MeshFormat::Medit;
  }
}

void print_summary(std::ostream& os, const QualityReport& q) {
  os << std::fixed << std::setprecision(4) << "tets " << q.tet_count << "  theta_min " << q.theta_min
     << "  theta_min_avg " << q.theta_min_avg << "  theta_max_avg " << q.theta_max_avg << "  cond_avg "
     << q.cond_avg << "  edge_ratio_avg " << q.edge_ratio_avg << "  skew_avg " << q.skew_avg << "  bad% "
     << q.bad_fraction_percent << '\n'
     << std::defaultfloat;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ValidationFailure:
    case ErrorCode::TopologyMismatch:
      return kExitValidationFailure;
    default:
      return kExitInputError;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tetrahedral mesh optimization by weighted squared volume minimization"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string input;
  std::string output;
  std::string report;
  std::string format;
  bool skip_volume = false;
  bool skip_angle = false;

  auto* optimize = app.add_subcommand("optimize", "Optimize a tetrahedral mesh");
  optimize->add_option("--input", input, "Input mesh (.mesh or .vtk)")->required();
  optimize->add_option("--output", output, "Output mesh");
  optimize->add_option("--report", report, "Quality report and trace (JSON)");
  optimize->add_option("--target-edge", cfg.target_edge, "Target edge length t")->required();
  optimize->add_option("--eps-theta", cfg.eps_theta, "Outer-loop tolerance on theta_min_avg change (degrees)");
  optimize->add_option("--max-iters", cfg.max_outer_iters, "Outer iterations per stage");
  optimize->add_flag("--skip-volume-stage", skip_volume, "Skip the constant-weight stage");
  optimize->add_flag("--skip-angle-stage", skip_angle, "Skip the inverse-area stage");
  optimize->add_option("--seed", cfg.seed, "RNG seed");
  optimize->add_option("--format", format, "Output format")->check(CLI::IsMember({"medit", "vtk"}));

  auto* quality = app.add_subcommand("quality", "Report mesh quality");
  quality->add_option("--input", input, "Input mesh (.mesh or .vtk)")->required();
  quality->add_option("--report", report, "Report path (JSON); stdout if omitted");

  DomainSpec domain;
  auto* seed = app.add_subcommand("seed", "Generate a seed mesh for a convex domain");
  seed->require_subcommand(1);
  seed->add_option("--target-edge", domain.target_edge, "Target edge length t")->required();
  seed->add_option("--output", output, "Output mesh")->required();
  seed->add_option("--seed", cfg.seed, "RNG seed for the insertion order");
  seed->add_option("--format", format, "Output format")->check(CLI::IsMember({"medit", "vtk"}));
  auto* ball = seed->add_subcommand("ball", "Ball centered at the origin");
  ball->add_option("--radius", domain.size, "Radius")->default_val(1.0);
  ball->fallthrough();
  auto* cube = seed->add_subcommand("cube", "Cube [0, side]^3");
  cube->fallthrough();
  cube->add_option("--side", domain.size, "Side length")->default_val(1.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (optimize->parsed()) {
      cfg.volume_stage = !skip_volume;
      cfg.angle_stage = !skip_angle;
      cfg.check();
      TetMesh mesh = read_mesh(input, input_format(input));
      check_valid(mesh);
      const WsvmResult result = run_wsvm(std::move(mesh), cfg);
      if (!output.empty()) write_mesh(result.mesh, output, output_format(format, output));
      if (!report.empty()) write_report(report, result.report, &result.trace);
      print_summary(out, result.report);
      for (const StageResult& s : result.trace.stages) {
        err << "stage " << s.stage << " (" << to_string(s.scheme) << "): " << s.iterations << " iterations, "
            << (s.converged ? "converged" : "iteration cap") << '\n';
      }
      err << "wall time " << result.trace.wall_seconds << " s\n";
    } else if (quality->parsed()) {
      const TetMesh mesh = read_mesh(input, input_format(input));
      check_valid(mesh);
      const QualityReport q = build_report(mesh);
      if (report.empty()) {
        out << report_to_json(q);
      } else {
        write_report(report, q);
        print_summary(out, q);
      }
    } else if (seed->parsed()) {
      domain.shape = ball->parsed() ? DomainShape::Ball : DomainShape::Cube;
      const TetMesh mesh = seed_mesh(domain, cfg.seed);
      check_valid(mesh);
      write_mesh(mesh, output, output_format(format, output));
      out << "seed mesh: " << mesh.num_vertices() << " vertices, " << mesh.num_tets() << " tets\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitValidationFailure;
  }
  return kExitOk;
}

}  // namespace wsvm
