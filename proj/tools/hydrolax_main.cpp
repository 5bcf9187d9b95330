#include <CLI11.hpp>
#include <iostream>

#include "hydrolax/commands.hpp"

namespace {

hydrolax::Backend backend_from(const std::string& name) {
  if (name == "symbolic") return hydrolax::Backend::Symbolic;
  if (name == "fd") return hydrolax::Backend::FiniteDifference;
  throw CLI::ValidationError("--backend must be 'symbolic' or 'fd'");
}

int parse_axis(const std::string& tok) {
  if (tok.size() == 2 && tok[0] == 'u' && tok[1] >= '1' && tok[1] <= '9') return tok[1] - '1';
  throw CLI::ValidationError("rectangle axes are named u1..u9, got '" + tok + "'");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for orthogonal-frame bracket data: residual "
               "systems, bracket conditions, spectral connections and monodromy"};
  app.require_subcommand(1);

  std::string problem;
  std::string backend = "symbolic";
  std::string variant = "CC";
  double tol = -1.0; // negative = per-command default
  int grid = 0;

  auto add_common = [&](CLI::App* cmd, bool with_variant) {
    cmd->add_option("--problem", problem, "problem file path or catalog:<name>")->required();
    cmd->add_option("--grid", grid, "override node count on all axes");
    cmd->add_option("--tol", tol, "residual tolerance for the exit code");
    if (with_variant)
      cmd->add_option("--variant", variant,
                      "connection variant: BASE, FULL, LOCAL, DARBOUX, CC, CC_PENCIL");
  };

  // verify
  auto* verify = app.add_subcommand("verify", "evaluate the nonlinear residual systems");
  add_common(verify, false);
  verify->add_option("--backend", backend, "symbolic | fd");

  // lax
  auto* lax = app.add_subcommand("lax", "zero-curvature check of a connection");
  add_common(lax, true);
  lax->add_option("--backend", backend, "symbolic | fd");
  double lambda_min = 0.5, lambda_max = 10.0;
  int lambda_samples = 16;
  double k1 = 0.0, k2 = 0.0;
  bool has_k1 = false, has_k2 = false;
  lax->add_option("--lambda-min", lambda_min, "lower end of the real sample window");
  lax->add_option("--lambda-max", lambda_max, "upper end of the real sample window");
  lax->add_option("--lambda-samples", lambda_samples, "number of real samples");
  lax->add_option("--k1", k1, "curvature constant K1 (CC_PENCIL)")->each([&](std::string) {
    has_k1 = true;
  });
  lax->add_option("--k2", k2, "curvature constant K2 (CC variants)")->each([&](std::string) {
    has_k2 = true;
  });

  // transport
  auto* transport = app.add_subcommand("transport", "monodromy defect around a rectangle");
  add_common(transport, true);
  std::vector<std::string> rect_tokens;
  int steps = 256;
  double lambda = 0.0;
  transport->add_option("--rect", rect_tokens, "u<i> a b u<j> c d")->expected(6);
  transport->add_option("--steps", steps, "RK4 steps per edge");
  transport->add_option("--lambda", lambda, "spectral parameter");
  transport->add_option("--k1", k1, "curvature constant K1 (CC_PENCIL)")->each([&](std::string) {
    has_k1 = true;
  });
  transport->add_option("--k2", k2, "curvature constant K2 (CC variants)")->each([&](std::string) {
    has_k2 = true;
  });

  // pencil
  auto* pencil = app.add_subcommand("pencil", "bracket conditions of the lambda combination");
  add_common(pencil, false);
  std::vector<double> pencil_lambdas;
  pencil->add_option("--lambda", pencil_lambdas, "combination weights (repeatable)");

  // dump
  auto* dump = app.add_subcommand("dump", "print a catalog example as a problem file");
  std::string dump_name;
  dump->add_option("name", dump_name, "catalog example name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::optional<int> grid_opt = grid > 0 ? std::optional<int>(grid) : std::nullopt;
    const std::optional<double> tol_opt = tol >= 0.0 ? std::optional<double>(tol) : std::nullopt;

    if (verify->parsed()) {
      hydrolax::VerifyOptions opt;
      opt.problem = problem;
      opt.grid_override = grid_opt;
      opt.backend = backend_from(backend);
      opt.tol = tol_opt;
      return hydrolax::cmd_verify(opt, std::cout);
    }
    if (lax->parsed()) {
      hydrolax::LaxOptions opt;
      opt.problem = problem;
      opt.variant = variant;
      opt.lambda_min = lambda_min;
      opt.lambda_max = lambda_max;
      opt.lambda_samples = lambda_samples;
      opt.backend = backend_from(backend);
      opt.tol = tol_opt;
      opt.grid_override = grid_opt;
      if (has_k1) opt.k1 = k1;
      if (has_k2) opt.k2 = k2;
      return hydrolax::cmd_lax(opt, std::cout);
    }
    if (transport->parsed()) {
      hydrolax::TransportOptions opt;
      opt.problem = problem;
      opt.variant = variant;
      opt.steps = steps;
      opt.lambda = lambda;
      opt.tol = tol_opt;
      if (has_k1) opt.k1 = k1;
      if (has_k2) opt.k2 = k2;
      if (!rect_tokens.empty()) {
        hydrolax::RectSpec r;
        r.axis_a = parse_axis(rect_tokens[0]);
        r.a0 = std::stod(rect_tokens[1]);
        r.a1 = std::stod(rect_tokens[2]);
        r.axis_b = parse_axis(rect_tokens[3]);
        r.b0 = std::stod(rect_tokens[4]);
        r.b1 = std::stod(rect_tokens[5]);
        opt.rect = r;
      }
      return hydrolax::cmd_transport(opt, std::cout);
    }
    if (pencil->parsed()) {
      hydrolax::PencilOptions opt;
      opt.problem = problem;
      opt.lambdas = pencil_lambdas;
      opt.tol = tol_opt;
      opt.grid_override = grid_opt;
      return hydrolax::cmd_pencil(opt, std::cout);
    }
    if (dump->parsed()) {
      return hydrolax::cmd_dump(dump_name, std::cout);
    }
  } catch (const CLI::Error& e) {
    std::cout << "ERROR " << e.what() << "\n";
    return hydrolax::kExitConfig;
  } catch (const std::exception& e) {
    std::cout << "ERROR " << e.what() << "\n";
    return hydrolax::kExitConfig;
  }
  return hydrolax::kExitConfig;
}
