#ifndef HYDROLAX_GEOMETRY_HPP
#define HYDROLAX_GEOMETRY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydrolax/field.hpp"

namespace hydrolax {

/// Margin below which values count as vanishing/colliding on a grid.
inline constexpr double kDegeneracyMargin = 1e-8;

/// Orthogonal frame data: dimension, metric signs eps^i in {+1,-1} and
/// nonvanishing scale factors H_i(u), so that the diagonal metric is
/// ds^2 = sum_i eps^i H_i^2 (du^i)^2 and g^ii = eps^i / H_i^2.
struct LameFrame {
  int dim = 0;
  std::vector<int> eps2;
  std::vector<Field> H;
};

/// Checks sign values, sizes and |H_i| > margin on the grid.
void validate_frame(const LameFrame& frame, const GridSpec& grid);

/// Frame with every H_i sampled on the grid (finite-difference backend).
LameFrame sampled_frame(const LameFrame& frame, const GridSpec& grid);

/// Off-diagonal rotation coefficients beta_ik = (1/H_i) dH_k/du^i.
struct RotationCoefficients {
  int dim = 0;
  std::vector<Field> beta; // [i*dim + k], diagonal unused (zero fields)

  const Field& at(int i, int k) const { return beta[static_cast<size_t>(i * dim + k)]; }
  Field& at(int i, int k) { return beta[static_cast<size_t>(i * dim + k)]; }
};

RotationCoefficients rotation_coefficients(const LameFrame& frame);

/// Raw additive offset on one beta entry; test-only input mode for
/// perturbation studies (normal problems derive beta from the frame).
struct BetaPerturbation {
  int i = 0;
  int j = 0;
  Complex delta{0.0, 0.0};
};

void apply_beta_perturbations(RotationCoefficients& beta,
                              std::span<const BetaPerturbation> perturbations);

/// Second metric of a nonsingular pair: per-axis eigenvalue functions
/// f^i(u^i) and signs eps1^i, defining g1^ii = f^i g2^ii.
struct PencilSpec {
  std::vector<Expr> f;
  std::vector<int> eps1;
};

/// Checks single-variable structure and pairwise-distinct values on the
/// grid with margin kDegeneracyMargin.
void validate_pencil(const PencilSpec& pencil, int dim, const GridSpec& grid);

/// Frame of the metric f^i g^i: H~_i = H_i / sqrt(eps1^i f^i), with the
/// transformed rotation coefficients and signs eps1^i*eps2^i.
/// Throws ZeroEigenvalue when some f^i vanishes on the grid.
std::pair<LameFrame, RotationCoefficients> reduced_frame(const LameFrame& frame,
                                                         const PencilSpec& pencil,
                                                         const GridSpec& grid);

/// Contravariant diagonal metric entries g^ii as fields.
using DiagMetric = std::vector<Field>;

DiagMetric contravariant_metric(const LameFrame& frame);
DiagMetric pencil_first_metric(const LameFrame& frame2, const PencilSpec& pencil);

/// Christoffel symbols Gamma^j_{sk} of a diagonal metric.
struct Christoffel {
  int dim = 0;
  std::vector<Field> data; // [j][s][k]

  const Field& at(int j, int s, int k) const {
    return data[static_cast<size_t>((j * dim + s) * dim + k)];
  }
  Field& at(int j, int s, int k) {
    return data[static_cast<size_t>((j * dim + s) * dim + k)];
  }
};

Christoffel christoffel_from_diag(const DiagMetric& g);
Christoffel levi_civita(const LameFrame& frame);

/// Curvature with both indices raised, R^{ij}_{kl} = g^{is} R^j_{skl},
/// in the convention where a constant-curvature-K metric gives
/// R^{ij}_{kl} = K (delta^i_l delta^j_k - delta^i_k delta^j_l).
struct CurvatureTensor {
  int dim = 0;
  std::vector<Field> data; // [i][j][k][l]

  const Field& at(int i, int j, int k, int l) const {
    return data[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
  }
  Field& at(int i, int j, int k, int l) {
    return data[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
  }
};

CurvatureTensor curvature_from_diag(const DiagMetric& g);
CurvatureTensor riemann_curvature(const LameFrame& frame);

/// Roots of det(g1 - lambda g2) = 0 for diagonal pairs, sorted by
/// (real, imaginary); distinct = pairwise gaps above margin.
struct PencilEigenvalues {
  std::vector<Complex> roots;
  bool distinct = false;
};

PencilEigenvalues pencil_eigenvalues(const DiagMetric& g1, const DiagMetric& g2,
                                     std::span<const double> point);

/// Linearity check of the Levi-Civita connection and curvature along the
/// combination g1 + lambda*g2, per lambda sample.
struct CompatibilityEntry {
  Complex lambda;
  double gamma_dev = 0.0;
  std::vector<double> gamma_at;
  double curv_dev = 0.0;
  std::vector<double> curv_at;
};

struct CompatibilityReport {
  std::vector<CompatibilityEntry> entries;
  double max_dev() const;
};

CompatibilityReport metric_compatibility_check(const DiagMetric& g1, const DiagMetric& g2,
                                               std::span<const Complex> lambdas,
                                               const GridSpec& grid);

/// One nonlocal tail term: sign eps_alpha and fields H^alpha_i(u).
struct NonlocalEntry {
  int eps = 1;
  std::vector<Field> H;
};

/// Nonlocal data of one bracket. The constant-curvature shortcut K
/// expands to a single entry (+1, sqrt(K)*H_i) against a frame.
struct NonlocalSet {
  std::vector<NonlocalEntry> entries;
  std::optional<Complex> curvature_shortcut;

  bool has_terms() const { return !entries.empty() || curvature_shortcut.has_value(); }
  std::vector<NonlocalEntry> expanded(const LameFrame& frame) const;
};

/// Bracket coefficient data: g^{ij}, b^{ij}_k and affinors (w^alpha)^i_j.
class BracketCoefficients {
public:
  BracketCoefficients(int dim, std::size_t n_affinors);

  int dim() const { return dim_; }
  std::size_t affinors() const { return eps_.size(); }

  const Field& g(int i, int j) const { return g_[static_cast<size_t>(i * dim_ + j)]; }
  Field& g(int i, int j) { return g_[static_cast<size_t>(i * dim_ + j)]; }
  const Field& b(int i, int j, int k) const {
    return b_[static_cast<size_t>((i * dim_ + j) * dim_ + k)];
  }
  Field& b(int i, int j, int k) { return b_[static_cast<size_t>((i * dim_ + j) * dim_ + k)]; }
  const Field& w(std::size_t a, int i, int j) const {
    return w_[a][static_cast<size_t>(i * dim_ + j)];
  }
  Field& w(std::size_t a, int i, int j) { return w_[a][static_cast<size_t>(i * dim_ + j)]; }
  int eps(std::size_t a) const { return eps_[a]; }
  int& eps(std::size_t a) { return eps_[a]; }

private:
  int dim_;
  std::vector<Field> g_, b_;
  std::vector<std::vector<Field>> w_;
  std::vector<int> eps_;
};

/// Diagonal assembly from a frame: g^{ii} = eps^i/H_i^2,
/// b^{ij}_k = -g^{is} Gamma^j_{sk}, (w^alpha)^i_i = H^alpha_i / H_i.
BracketCoefficients assemble_bracket_coefficients(const LameFrame& frame,
                                                  const NonlocalSet& nl);

/// Assembly from an explicit diagonal metric and diagonal affinors
/// (used for lambda-combination brackets).
BracketCoefficients assemble_from_diag(const DiagMetric& g,
                                       std::span<const int> affinor_eps,
                                       std::span<const std::vector<Field>> affinor_diag);

/// Per-condition max |residual| of the bracket relations 01..07 over the
/// grid. Condition 07 components (i,j,k,r) are reported in the
/// frame-normalized scale |g^ii|^{-3/2} |g^rr|^{-1/2}, which maps them
/// onto the scale of the second-order frame equations.
struct ConditionEntry {
  std::string condition; // "01".."07"
  double max_abs = 0.0;
  std::vector<double> at;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  double max_abs() const;
  const ConditionEntry& by_name(const std::string& name) const;
};

ConditionReport bracket_condition_residuals(const BracketCoefficients& bc,
                                            const GridSpec& grid);

/// Backend-matched helper fields.
Field zero_like(const Field& proto);
Field constant_like(const Field& proto, Complex value);

/// f^i and (f^i)' as fields in the backend of proto. The derivative is
/// always taken symbolically before any sampling.
Field pencil_field(const PencilSpec& pencil, int i, const Field& proto,
                   const GridSpec& grid);
Field pencil_derivative_field(const PencilSpec& pencil, int i, const Field& proto,
                              const GridSpec& grid);

} // namespace hydrolax

#endif
