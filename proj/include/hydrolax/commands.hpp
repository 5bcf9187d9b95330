#ifndef HYDROLAX_COMMANDS_HPP
#define HYDROLAX_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hydrolax/lax.hpp"

namespace hydrolax {

/// Exit codes shared by every command: 0 all residuals within tolerance,
/// 1 a residual exceeded it, 2 configuration/parse/pole errors (reported
/// as a single "ERROR <message>" line).
inline constexpr int kExitPass = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitConfig = 2;

/// Default tolerances: 1e-9 for the symbolic backend, 1e-4 for the
/// finite-difference backend on the default 9-node grids, 1e-8 for RK4
/// monodromy defects.
double default_tolerance(Backend backend);

struct VerifyOptions {
  std::string problem;
  std::optional<int> grid_override;
  Backend backend = Backend::Symbolic;
  std::optional<double> tol;
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out);

struct LaxOptions {
  std::string problem;
  std::string variant = "CC";
  double lambda_min = 0.5;
  double lambda_max = 10.0;
  int lambda_samples = 16;
  Backend backend = Backend::Symbolic;
  std::optional<double> tol;
  std::optional<int> grid_override;
  std::optional<double> k1, k2;
};

int cmd_lax(const LaxOptions& opt, std::ostream& out);

struct RectSpec {
  int axis_a = 0;
  double a0 = 0.0, a1 = 0.0;
  int axis_b = 1;
  double b0 = 0.0, b1 = 0.0;
};

struct TransportOptions {
  std::string problem;
  std::string variant = "CC";
  std::optional<RectSpec> rect;
  int steps = 256;
  double lambda = 0.0;
  std::optional<double> tol;
  std::optional<double> k1, k2;
};

int cmd_transport(const TransportOptions& opt, std::ostream& out);

struct PencilOptions {
  std::string problem;
  std::vector<double> lambdas; // default {0.5, 1, 2}
  std::optional<double> tol;
  std::optional<int> grid_override;
};

int cmd_pencil(const PencilOptions& opt, std::ostream& out);

/// Prints the canonical problem-file form of a catalog example.
int cmd_dump(const std::string& name, std::ostream& out);

} // namespace hydrolax

#endif
