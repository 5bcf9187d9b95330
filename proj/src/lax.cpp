#include "hydrolax/lax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hydrolax/kernels.hpp"

namespace hydrolax {

std::string_view variant_name(LaxVariant v) {
  switch (v) {
    case LaxVariant::Base: return "BASE";
    case LaxVariant::Full: return "FULL";
    case LaxVariant::Local: return "LOCAL";
    case LaxVariant::Darboux: return "DARBOUX";
    case LaxVariant::ConstantCurvature: return "CC";
    case LaxVariant::ConstantCurvaturePencil: return "CC_PENCIL";
  }
  return "?";
}

LaxVariant variant_from_name(std::string_view name) {
  if (name == "BASE") return LaxVariant::Base;
  if (name == "FULL") return LaxVariant::Full;
  if (name == "LOCAL") return LaxVariant::Local;
  if (name == "DARBOUX") return LaxVariant::Darboux;
  if (name == "CC") return LaxVariant::ConstantCurvature;
  if (name == "CC_PENCIL") return LaxVariant::ConstantCurvaturePencil;
  throw ConfigError("unknown connection variant '" + std::string(name) + "'");
}

namespace {

constexpr double kPoleMargin = 1e-6;

std::string format_lambda(Complex lambda) {
  char buf[64];
  if (lambda.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6g", lambda.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", lambda.real(), lambda.imag());
  }
  return buf;
}

struct BuildData {
  LameFrame frame;
  RotationCoefficients beta;
  std::vector<NonlocalEntry> nl2;
  std::vector<NonlocalEntry> nl1;
  std::vector<Field> f;
};

BuildData prepare_closed(const ProblemSpec& p) {
  p.validate();
  BuildData d;
  d.frame = p.frame;
  d.beta = rotation_coefficients(d.frame);
  apply_beta_perturbations(d.beta, p.beta_perturbations);
  d.nl2 = p.nl2.expanded(d.frame);
  if (p.nl1) d.nl1 = p.nl1->expanded(d.frame);
  if (p.pencil)
    for (size_t i = 0; i < p.pencil->f.size(); ++i)
      d.f.push_back(Field::closed(p.pencil->f[i]));
  return d;
}

Complex require_k2(const ProblemSpec& p, const LaxExtras& extras) {
  if (extras.k2) return *extras.k2;
  if (p.nl2.curvature_shortcut) return *p.nl2.curvature_shortcut;
  throw MissingCurvature("the CC variants need the curvature constant K2");
}

void require_pencil(const ProblemSpec& p, LaxVariant v) {
  if (!p.pencil)
    throw MissingPencil(std::string(variant_name(v)) + " requires a pencil section");
}

} // namespace

LaxConnection build_connection(LaxVariant variant, const ProblemSpec& p,
                               const LaxExtras& extras) {
  const BuildData d = prepare_closed(p);
  const int n = p.frame.dim;
  const auto& eps2 = p.frame.eps2;
  const int l2 = static_cast<int>(d.nl2.size());
  const int l1 = static_cast<int>(d.nl1.size());

  LaxConnection c;
  c.variant = variant;
  c.coords = n;
  c.grid = p.grid;

  const Field lambda_field = Field::closed(Expr::lambda());
  auto sign_root = [](int e) { return principal_sqrt(Complex(e, 0.0)); };

  // Row factors rho_i: the sqrt combination weighting the beta coupling,
  // per variant. Quotients are always formed as sqrt(a)/sqrt(b).
  std::vector<Field> rho;
  bool spectral = false;
  switch (variant) {
    case LaxVariant::Base:
    case LaxVariant::ConstantCurvature:
      for (int i = 0; i < n; ++i)
        rho.push_back(Field::constant(sign_root(eps2[static_cast<size_t>(i)])));
      break;
    case LaxVariant::Darboux:
      for (int i = 0; i < n; ++i) rho.push_back(Field::constant(Complex(1.0, 0.0)));
      break;
    case LaxVariant::Local:
      // unit-sign spectral family: sqrt(lambda + f^i)
      require_pencil(p, variant);
      spectral = true;
      for (int i = 0; i < n; ++i)
        rho.push_back(sqrt(lambda_field + d.f[static_cast<size_t>(i)]));
      break;
    case LaxVariant::Full:
    case LaxVariant::ConstantCurvaturePencil:
      require_pencil(p, variant);
      spectral = true;
      for (int i = 0; i < n; ++i)
        rho.push_back(sqrt(Complex(eps2[static_cast<size_t>(i)], 0.0) *
                           (lambda_field + d.f[static_cast<size_t>(i)])));
      break;
  }
  c.lambda_dependent = spectral;
  if (spectral) c.pole_fields = d.f;

  int dim = n;
  if (variant == LaxVariant::Base) dim = n + l2;
  if (variant == LaxVariant::Full) dim = n + l2 + l1;
  if (variant == LaxVariant::ConstantCurvature ||
      variant == LaxVariant::ConstantCurvaturePencil)
    dim = n + 1;
  c.dim = dim;

  c.A.assign(static_cast<size_t>(n), FieldMatrix(dim));

  // phi rows, shared by every variant:
  //   dphi_i/du^k = (rho_i/rho_k) beta_ik phi_k           (i != k)
  //   dphi_k/du^k = -sum_m (rho_m/rho_k) beta_mk phi_m + couplings
  for (int k = 0; k < n; ++k) {
    FieldMatrix& a = c.A[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Field entry =
          rho[static_cast<size_t>(i)] / rho[static_cast<size_t>(k)] * d.beta.at(i, k);
      a.at(i, k) = entry;
      a.at(k, i) = -entry;
    }
  }

  switch (variant) {
    case LaxVariant::Darboux:
    case LaxVariant::Local:
      break;
    case LaxVariant::Base:
      for (int k = 0; k < n; ++k) {
        FieldMatrix& a = c.A[static_cast<size_t>(k)];
        for (int al = 0; al < l2; ++al) {
          const Field coupling =
              Field::constant(sign_root(d.nl2[static_cast<size_t>(al)].eps)) /
              rho[static_cast<size_t>(k)] *
              d.nl2[static_cast<size_t>(al)].H[static_cast<size_t>(k)];
          a.at(k, n + al) = coupling;
          a.at(n + al, k) = -coupling;
        }
      }
      break;
    case LaxVariant::Full:
      for (int k = 0; k < n; ++k) {
        FieldMatrix& a = c.A[static_cast<size_t>(k)];
        for (int al = 0; al < l2; ++al) {
          const Field coupling =
              sqrt(Complex(d.nl2[static_cast<size_t>(al)].eps, 0.0) * lambda_field) /
              rho[static_cast<size_t>(k)] *
              d.nl2[static_cast<size_t>(al)].H[static_cast<size_t>(k)];
          a.at(k, n + al) = coupling;
          a.at(n + al, k) = -coupling;
        }
        for (int be = 0; be < l1; ++be) {
          const Field coupling =
              Field::constant(sign_root(d.nl1[static_cast<size_t>(be)].eps)) /
              rho[static_cast<size_t>(k)] *
              d.nl1[static_cast<size_t>(be)].H[static_cast<size_t>(k)];
          a.at(k, n + l2 + be) = coupling;
          a.at(n + l2 + be, k) = -coupling;
        }
      }
      break;
    case LaxVariant::ConstantCurvature: {
      const Complex k2 = require_k2(p, extras);
      for (int k = 0; k < n; ++k) {
        FieldMatrix& a = c.A[static_cast<size_t>(k)];
        const Field coupling = Field::constant(principal_sqrt(k2)) /
                               rho[static_cast<size_t>(k)] *
                               d.frame.H[static_cast<size_t>(k)];
        a.at(k, n) = coupling;
        a.at(n, k) = -coupling;
      }
      break;
    }
    case LaxVariant::ConstantCurvaturePencil: {
      const Complex k2 = require_k2(p, extras);
      const Complex k1 = extras.k1.value_or(Complex(0.0, 0.0));
      const Field root = sqrt(Field::constant(k1) + k2 * lambda_field);
      for (int k = 0; k < n; ++k) {
        FieldMatrix& a = c.A[static_cast<size_t>(k)];
        const Field coupling =
            root / rho[static_cast<size_t>(k)] * d.frame.H[static_cast<size_t>(k)];
        a.at(k, n) = coupling;
        a.at(n, k) = -coupling;
      }
      break;
    }
  }
  return c;
}

namespace {

void guard_spectral_pole(const LaxConnection& c, Complex lambda, const GridSpec& grid) {
  if (!c.lambda_dependent) return;
  for (size_t i = 0; i < c.pole_fields.size(); ++i) {
    const Field shifted = Field::constant(lambda) + c.pole_fields[i];
    const auto m = min_abs(shifted, grid, std::nullopt);
    if (m.value <= kPoleMargin)
      throw SpectralPole("lambda=" + format_lambda(lambda) + " hits the pole of f" +
                         std::to_string(i + 1) + " at node (" +
                         format_coords(grid.node(m.node)) + ")");
  }
}

FieldMatrix sampled_matrix(const FieldMatrix& a, const GridSpec& grid,
                           std::optional<Complex> lambda) {
  FieldMatrix out(a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int col = 0; col < a.dim(); ++col) out.at(r, col) = a.at(r, col).sampled(grid, lambda);
  return out;
}

FieldMatrix curvature_matrix(const FieldMatrix& ak, const FieldMatrix& am, int k, int m) {
  // F_{km} = d_k A_m - d_m A_k + A_m A_k - A_k A_m
  const int dim = ak.dim();
  FieldMatrix f(dim);
  for (int r = 0; r < dim; ++r)
    for (int col = 0; col < dim; ++col) {
      Field acc = am.at(r, col).partial(k) - ak.at(r, col).partial(m);
      for (int s = 0; s < dim; ++s)
        acc = acc + (am.at(r, s) * ak.at(s, col) - ak.at(r, s) * am.at(s, col));
      f.at(r, col) = acc;
    }
  return f;
}

} // namespace

double CurvatureReport::max_frobenius() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_frobenius);
  return m;
}

std::string CurvatureReport::to_lines(LaxVariant variant) const {
  std::string out;
  char buf[96];
  for (const auto& e : entries) {
    out += "ZC ";
    out += variant_name(variant);
    out += " lambda=";
    out += format_lambda(e.lambda);
    std::snprintf(buf, sizeof buf, " max=%.5e at=(", e.max_frobenius);
    out += buf;
    out += format_coords(e.at);
    std::snprintf(buf, sizeof buf, ") pair=(%d,%d)\n", e.k + 1, e.m + 1);
    out += buf;
  }
  return out;
}

CurvatureReport zero_curvature_residual(const LaxConnection& c,
                                        std::span<const Complex> lambdas,
                                        const GridSpec& grid, Backend backend) {
  CurvatureReport report;
  const std::size_t nodes = grid.size();

  // lambda-free connections: evaluate once, report per requested sample.
  const std::vector<Complex> lambda_list =
      c.lambda_dependent ? std::vector<Complex>(lambdas.begin(), lambdas.end())
                         : std::vector<Complex>{Complex(0.0, 0.0)};

  for (int k = 0; k < c.coords; ++k)
    for (int m = k + 1; m < c.coords; ++m) {
      std::optional<FieldMatrix> symbolic_f;
      if (backend == Backend::Symbolic)
        symbolic_f = curvature_matrix(c.matrix(k), c.matrix(m), k, m);

      for (const Complex lambda : lambda_list) {
        guard_spectral_pole(c, lambda, grid);
        const std::optional<Complex> lam =
            c.lambda_dependent ? std::optional<Complex>(lambda) : std::nullopt;

        FieldMatrix f_km;
        if (backend == Backend::Symbolic) {
          f_km = sampled_matrix(*symbolic_f, grid, lam);
        } else {
          const FieldMatrix ak = sampled_matrix(c.matrix(k), grid, lam);
          const FieldMatrix am = sampled_matrix(c.matrix(m), grid, lam);
          f_km = curvature_matrix(ak, am, k, m);
        }

        std::vector<double> acc(nodes, 0.0);
        for (int r = 0; r < c.dim; ++r)
          for (int col = 0; col < c.dim; ++col)
            kernels::accumulate_abs2(f_km.at(r, col).values(), acc);

        double best = -1.0;
        std::size_t best_node = 0;
        for (std::size_t p = 0; p < nodes; ++p)
          if (acc[p] > best) {
            best = acc[p];
            best_node = p;
          }

        CurvatureEntry entry;
        entry.lambda = lambda;
        entry.k = k;
        entry.m = m;
        entry.max_frobenius = best > 0.0 ? std::sqrt(best) : 0.0;
        entry.at = grid.node(best_node);
        report.entries.push_back(std::move(entry));
      }
    }

  if (!c.lambda_dependent && !lambdas.empty()) {
    // replicate the single evaluation so callers see one entry per sample
    std::vector<CurvatureEntry> expanded;
    for (const auto& e : report.entries)
      for (const Complex lambda : lambdas) {
        CurvatureEntry copy = e;
        copy.lambda = lambda;
        expanded.push_back(std::move(copy));
      }
    report.entries = std::move(expanded);
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const CurvatureEntry& a, const CurvatureEntry& b) {
              if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() < b.lambda.real();
              if (a.lambda.imag() != b.lambda.imag())
                return a.lambda.imag() < b.lambda.imag();
              if (a.k != b.k) return a.k < b.k;
              return a.m < b.m;
            });
  return report;
}

std::vector<Complex> default_lambda_samples(const ProblemSpec& p, double lmin, double lmax,
                                            int n_real, bool with_imaginary) {
  if (n_real < 2) throw ConfigError("need at least two real lambda samples");
  if (!(lmax > lmin)) throw ConfigError("lambda range must be increasing");

  std::vector<Complex> out;
  double pole_lo = 0.0, pole_hi = 0.0;
  bool has_band = false;
  if (p.pencil) {
    double fmin = 0.0, fmax = 0.0;
    bool first = true;
    for (const auto& fe : p.pencil->f) {
      const auto vals = sample_values(Field::closed(fe), p.grid, std::nullopt);
      for (const Complex v : vals) {
        if (first || v.real() < fmin) fmin = v.real();
        if (first || v.real() > fmax) fmax = v.real();
        first = false;
      }
    }
    // poles live at lambda = -f^i; inflate the band by margin 0.1
    pole_lo = -fmax - 0.1;
    pole_hi = -fmin + 0.1;
    has_band = true;
  }

  const double step = (lmax - lmin) / static_cast<double>(n_real - 1);
  for (int i = 0; i < n_real; ++i) {
    const double x = i == n_real - 1 ? lmax : lmin + step * static_cast<double>(i);
    if (has_band && x >= pole_lo && x <= pole_hi)
      throw SpectralPole("lambda=" + format_double(x) +
                         " falls in the inflated pole band [" + format_double(pole_lo) +
                         ", " + format_double(pole_hi) + "]");
    out.push_back(Complex(x, 0.0));
  }
  if (with_imaginary) {
    for (double y : {0.5, 1.0, 2.0, 5.0}) out.push_back(Complex(0.0, y));
  }
  return out;
}

namespace {

using Matrix = std::vector<Complex>; // row-major dim x dim

void check_path_pole(const LaxConnection& c, std::span<const Complex> coords,
                     Complex lambda) {
  if (!c.lambda_dependent) return;
  for (size_t i = 0; i < c.pole_fields.size(); ++i) {
    const Complex v = lambda + c.pole_fields[i].eval(coords, lambda);
    if (std::abs(v) <= kPoleMargin)
      throw SpectralPole("transport path crosses the pole of f" + std::to_string(i + 1));
  }
}

/// M(t) = sum_k dir_k A_k(u(t), lambda), evaluated entrywise.
Matrix direction_matrix(const LaxConnection& c, std::span<const double> u,
                        std::span<const double> dir, Complex lambda) {
  const int dim = c.dim;
  std::vector<Complex> coords(u.size());
  for (size_t a = 0; a < u.size(); ++a) coords[a] = Complex(u[a], 0.0);
  check_path_pole(c, coords, lambda);

  Matrix m(static_cast<size_t>(dim * dim), Complex(0.0, 0.0));
  const std::optional<Complex> lam =
      c.lambda_dependent ? std::optional<Complex>(lambda) : std::nullopt;
  for (int k = 0; k < c.coords; ++k) {
    if (dir[static_cast<size_t>(k)] == 0.0) continue;
    const Complex scale(dir[static_cast<size_t>(k)], 0.0);
    const FieldMatrix& a = c.matrix(k);
    for (int r = 0; r < dim; ++r)
      for (int col = 0; col < dim; ++col) {
        const Field& e = a.at(r, col);
        if (e.is_closed() && e.expr().is_zero()) continue;
        m[static_cast<size_t>(r * dim + col)] += scale * e.eval(coords, lam);
      }
  }
  return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, int dim) {
  Matrix out(static_cast<size_t>(dim * dim), Complex(0.0, 0.0));
  for (int r = 0; r < dim; ++r)
    for (int s = 0; s < dim; ++s) {
      const Complex ars = a[static_cast<size_t>(r * dim + s)];
      if (ars == Complex(0.0, 0.0)) continue;
      for (int col = 0; col < dim; ++col)
        out[static_cast<size_t>(r * dim + col)] += ars * b[static_cast<size_t>(s * dim + col)];
    }
  return out;
}

/// Classic RK4 for Y' = M(t) Y over t in [0,1], Y row-major dim x dim.
template <typename MatFn>
void rk4_matrix(Matrix& y, int dim, int steps, MatFn&& m_of_t) {
  const double h = 1.0 / static_cast<double>(steps);
  auto apply = [&](const Matrix& m, const Matrix& v) { return mat_mul(m, v, dim); };
  for (int s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(s);
    const Matrix m1 = m_of_t(t);
    const Matrix m2 = m_of_t(t + 0.5 * h);
    const Matrix m4 = m_of_t(t + h);

    const Matrix k1 = apply(m1, y);
    Matrix y2 = y;
    for (size_t i = 0; i < y.size(); ++i) y2[i] += Complex(0.5 * h, 0.0) * k1[i];
    const Matrix k2 = apply(m2, y2);
    Matrix y3 = y;
    for (size_t i = 0; i < y.size(); ++i) y3[i] += Complex(0.5 * h, 0.0) * k2[i];
    const Matrix k3 = apply(m2, y3);
    Matrix y4 = y;
    for (size_t i = 0; i < y.size(); ++i) y4[i] += Complex(h, 0.0) * k3[i];
    const Matrix k4 = apply(m4, y4);

    for (size_t i = 0; i < y.size(); ++i)
      y[i] += Complex(h / 6.0, 0.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

Matrix transport_matrix(const LaxConnection& c,
                        std::span<const std::vector<double>> polyline, Complex lambda,
                        int steps) {
  if (steps < 1) throw ConfigError("transport needs at least one step per segment");
  if (polyline.size() < 2) throw ConfigError("transport path needs at least two points");
  const int dim = c.dim;
  Matrix y(static_cast<size_t>(dim * dim), Complex(0.0, 0.0));
  for (int r = 0; r < dim; ++r) y[static_cast<size_t>(r * dim + r)] = Complex(1.0, 0.0);

  const size_t n_coords = static_cast<size_t>(c.coords);
  for (size_t seg = 0; seg + 1 < polyline.size(); ++seg) {
    const auto& a = polyline[seg];
    const auto& b = polyline[seg + 1];
    if (a.size() != n_coords || b.size() != n_coords)
      throw ConfigError("transport path point has wrong dimension");
    std::vector<double> dir(n_coords);
    for (size_t i = 0; i < n_coords; ++i) dir[i] = b[i] - a[i];
    auto m_of_t = [&](double t) {
      std::vector<double> u(n_coords);
      for (size_t i = 0; i < n_coords; ++i) u[i] = a[i] + t * dir[i];
      return direction_matrix(c, u, dir, lambda);
    };
    rk4_matrix(y, dim, steps, m_of_t);
  }
  return y;
}

} // namespace

std::vector<Complex> transport(const LaxConnection& c,
                               std::span<const std::vector<double>> polyline,
                               Complex lambda, std::span<const Complex> phi0, int steps) {
  if (static_cast<int>(phi0.size()) != c.dim)
    throw ConfigError("initial vector has wrong dimension");
  const Matrix y = transport_matrix(c, polyline, lambda, steps);
  std::vector<Complex> out(phi0.size(), Complex(0.0, 0.0));
  for (int r = 0; r < c.dim; ++r)
    for (int col = 0; col < c.dim; ++col)
      out[static_cast<size_t>(r)] +=
          y[static_cast<size_t>(r * c.dim + col)] * phi0[static_cast<size_t>(col)];
  return out;
}

double monodromy_defect(const LaxConnection& c, int axis_a, double a0, double a1,
                        int axis_b, double b0, double b1, Complex lambda, int steps) {
  if (steps < 1) throw ConfigError("monodromy needs at least one step per edge");
  if (axis_a == axis_b || axis_a < 0 || axis_b < 0 || axis_a >= c.coords ||
      axis_b >= c.coords)
    throw ConfigError("monodromy rectangle axes out of range");

  std::vector<double> base(static_cast<size_t>(c.coords));
  for (int i = 0; i < c.coords; ++i) {
    const auto& ax = c.grid.axis(i);
    base[static_cast<size_t>(i)] = 0.5 * (ax.lo + ax.hi);
  }
  auto corner = [&](double a, double b) {
    std::vector<double> u = base;
    u[static_cast<size_t>(axis_a)] = a;
    u[static_cast<size_t>(axis_b)] = b;
    return u;
  };
  const std::vector<std::vector<double>> loop = {
      corner(a0, b0), corner(a1, b0), corner(a1, b1), corner(a0, b1), corner(a0, b0)};

  const Matrix y = transport_matrix(c, loop, lambda, steps);
  double defect = 0.0;
  for (int r = 0; r < c.dim; ++r)
    for (int col = 0; col < c.dim; ++col) {
      const Complex want = r == col ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      defect = std::max(defect, std::abs(y[static_cast<size_t>(r * c.dim + col)] - want));
    }
  return defect;
}

} // namespace hydrolax
