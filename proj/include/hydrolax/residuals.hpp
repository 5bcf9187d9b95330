#ifndef HYDROLAX_RESIDUALS_HPP
#define HYDROLAX_RESIDUALS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydrolax/geometry.hpp"

namespace hydrolax {

enum class Backend { Symbolic, FiniteDifference };

std::string_view backend_name(Backend b);

/// Full data set of one verification problem: the bracket-2 frame and
/// nonlocal set, the optional pencil (eigenvalue functions and signs of
/// the first metric) with its optional bracket-1 nonlocal set, the
/// evaluation grid, and optional raw beta offsets for perturbation runs.
struct ProblemSpec {
  LameFrame frame;
  NonlocalSet nl2;
  std::optional<PencilSpec> pencil;
  std::optional<NonlocalSet> nl1;
  GridSpec grid;
  std::vector<BetaPerturbation> beta_perturbations;

  /// Structural and degeneracy validation; throws ConfigError/PoleOnGrid.
  void validate(bool check_pencil_distinct = true) const;
};

enum class EquationTag { LamX0, LamX1, LamX2, Lam3, Lam00, Resolved };

std::string_view tag_name(EquationTag tag); // "lamx0" .. "resolved"

/// Tags evaluated by default for a problem: the second-order frame system
/// always, the pencil equations when a pencil is present.
std::vector<EquationTag> applicable_tags(const ProblemSpec& p);

struct ResidualEntry {
  EquationTag tag;
  double max_abs = 0.0;
  std::vector<double> at; // arg-max node coordinates
  double grid_spacing = 0.0;
  Backend backend = Backend::Symbolic;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;

  const ResidualEntry& by_tag(EquationTag tag) const;
  bool has_tag(EquationTag tag) const;
  double max_abs() const;
  /// "RESID <tag> max=<%.5e> at=(<coords>)" per entry, in tag order.
  std::string to_lines() const;
};

/// One pointwise residual field together with its index combination
/// (alpha/i/j/k as applicable). Exposed for cross-checks; the reports are
/// reductions of these.
struct TaggedField {
  std::vector<int> indices;
  Field residual;
};

std::vector<TaggedField> residual_fields(const ProblemSpec& p, Backend backend,
                                         EquationTag tag);

/// Max-|residual| report for the requested tags (default: applicable set).
ResidualReport system_residuals(const ProblemSpec& p, Backend backend);
ResidualReport system_residuals(const ProblemSpec& p, Backend backend,
                                std::span<const EquationTag> tags);

/// The first-order form of the pair (lamx2, lam3), solved for
/// d(beta_ij)/du^i; requires a nonsingular pencil. Throws MissingPencil /
/// ZeroEigenvalueGap.
ResidualReport resolved_beta_residuals(const ProblemSpec& p,
                                       Backend backend = Backend::Symbolic);

} // namespace hydrolax

#endif
