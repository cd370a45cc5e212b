// Command-line front end: indefsl <command> [options].

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "indefsl/cli.hpp"
#include "indefsl/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"A priori bounds and certified location of non-real eigenvalues of "
               "indefinite Sturm-Liouville problems on [-1, 1]"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  indefsl::RunConfig cfg;
  std::string problem, preset, format = "table", out;
  double mu = 0.0, delta_im = 0.0;

  app.add_option("--problem", problem, "JSON problem document");
  app.add_option("--preset", preset, "built-in problem (richardson)");
  app.add_option("--mu", mu, "parameter of the richardson preset (q = -mu, w = sgn x)");
  app.add_option("--n", cfg.n_oracle, "interior grid points of the finite-difference oracle")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "integrator tolerance for Newton refinement")
      ->capture_default_str();
  app.add_option("--contour-tol", cfg.contour_tol, "integrator tolerance on contours")
      ->capture_default_str();
  app.add_option("--margin", cfg.margin, "slack in the strict inequality defining eps")
      ->capture_default_str();
  app.add_option("--delta-im", delta_im,
                 "lower edge of the upper-half search strip (default 1e-6 max(1, im_max))");
  app.add_option("--format", format, "table, csv or json")->capture_default_str();
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--box-scale", cfg.box_scale,
                 "scale every bound before the containment checks (for testing verify)")
      ->capture_default_str();

  for (const char* name : {"bounds", "solve", "oracle", "verify", "report"}) {
    app.add_subcommand(name, "");
  }
  app.get_subcommand("bounds")->description("print every a priori bound box");
  app.get_subcommand("solve")->description("locate the non-real eigenvalues");
  app.get_subcommand("oracle")->description("finite-difference spectrum summary");
  app.get_subcommand("verify")->description("run the cross-validation checks");
  app.get_subcommand("report")->description("JSON report plus a CSV of eigenvalue points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = indefsl::parse_command(app.get_subcommands().front()->get_name());
    cfg.format = indefsl::parse_format(format);
  } catch (const indefsl::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  if (app.count("--problem")) cfg.problem_path = problem;
  if (app.count("--preset")) cfg.preset = preset;
  if (app.count("--mu")) cfg.mu = mu;
  if (app.count("--delta-im")) cfg.delta_im = delta_im;
  if (app.count("--out")) cfg.output_path = out;
  return indefsl::run(cfg, std::cout, std::cerr);
}
