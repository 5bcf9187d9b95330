#ifndef HYDROLAX_LAX_HPP
#define HYDROLAX_LAX_HPP

#include <string_view>

#include "hydrolax/residuals.hpp"

namespace hydrolax {

/// The six linear problems, as connections A_k with dPhi/du^k = A_k Phi.
///
///  BASE      lambda-free system of the second-order frame equations;
///            Phi = (phi_1..phi_N, psi^1..psi^L2).
///  FULL      spectral family for the full pencil system;
///            Phi = (phi, psi^1..psi^L2, chi^1..chi^L1).
///  LOCAL     spectral family of the local (no-tail) reduction, unit signs.
///  DARBOUX   classical lambda-free local problem; Phi = phi.
///  CC        lambda-free problem of curvilinear coordinates in constant
///            curvature K2; Phi = (phi, psi).
///  CC_PENCIL spectral family for pencils of constant-curvature metrics,
///            with sqrt(lambda*K2 + K1) in the psi coupling.
enum class LaxVariant { Base, Full, Local, Darboux, ConstantCurvature, ConstantCurvaturePencil };

std::string_view variant_name(LaxVariant v); // "BASE".."CC_PENCIL"
LaxVariant variant_from_name(std::string_view name);

/// Curvature constants for the CC variants.
struct LaxExtras {
  std::optional<Complex> k1;
  std::optional<Complex> k2;
};

/// Square matrix of fields, row-major.
class FieldMatrix {
public:
  FieldMatrix() = default;
  explicit FieldMatrix(int dim) : dim_(dim), m_(static_cast<size_t>(dim * dim)) {}

  int dim() const { return dim_; }
  const Field& at(int r, int c) const { return m_[static_cast<size_t>(r * dim_ + c)]; }
  Field& at(int r, int c) { return m_[static_cast<size_t>(r * dim_ + c)]; }

private:
  int dim_ = 0;
  std::vector<Field> m_;
};

class LaxConnection {
public:
  LaxVariant variant;
  int coords = 0;               // N
  int dim = 0;                  // D, size of Phi
  std::vector<FieldMatrix> A;   // one D x D matrix per coordinate
  bool lambda_dependent = false;
  GridSpec grid;
  std::vector<Field> pole_fields; // f^i fields when spectral, for pole guards

  const FieldMatrix& matrix(int k) const { return A[static_cast<size_t>(k)]; }
};

/// Populates the connection entries for the requested variant from the
/// problem data, exactly as the defining linear systems state them
/// (entries are closed-form; the derivative backend is chosen at
/// curvature-evaluation time). Throws MissingPencil / MissingCurvature
/// when the variant needs data the problem does not carry.
LaxConnection build_connection(LaxVariant variant, const ProblemSpec& p,
                               const LaxExtras& extras = {});

/// Max Frobenius norm over nodes of F_{km} = d_k A_m - d_m A_k + A_m A_k
/// - A_k A_m, per (lambda, k<m).
struct CurvatureEntry {
  Complex lambda;
  int k = 0, m = 0;
  double max_frobenius = 0.0;
  std::vector<double> at;
};

struct CurvatureReport {
  std::vector<CurvatureEntry> entries;
  double max_frobenius() const;
  /// "ZC <variant> lambda=<v> max=<val> at=(<coords>) pair=(k,m)" lines.
  std::string to_lines(LaxVariant variant) const;
};

CurvatureReport zero_curvature_residual(const LaxConnection& c,
                                        std::span<const Complex> lambdas,
                                        const GridSpec& grid,
                                        Backend backend = Backend::Symbolic);

/// Default spectral sample set: n_real points on [lmin, lmax] plus four
/// imaginary-axis points. Real samples are validated against the pole
/// band [-max f, -min f] inflated by 0.1 when the problem has a pencil.
std::vector<Complex> default_lambda_samples(const ProblemSpec& p, double lmin = 0.5,
                                            double lmax = 10.0, int n_real = 16,
                                            bool with_imaginary = true);

/// Fixed-step RK4 transport of phi0 along a polyline of points in
/// u-space; steps is per segment. Requires a closed-form connection.
std::vector<Complex> transport(const LaxConnection& c,
                               std::span<const std::vector<double>> polyline,
                               Complex lambda, std::span<const Complex> phi0, int steps);

/// Transports the identity around the axis-aligned rectangle
/// [a0,a1] x [b0,b1] in the (axis_a, axis_b) plane (other coordinates at
/// the grid midpoint) and returns max|loop - identity|.
double monodromy_defect(const LaxConnection& c, int axis_a, double a0, double a1,
                        int axis_b, double b0, double b1, Complex lambda, int steps);

} // namespace hydrolax

#endif
