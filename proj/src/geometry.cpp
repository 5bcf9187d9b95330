#include "hydrolax/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hydrolax/kernels.hpp"

namespace hydrolax {

Field zero_like(const Field& proto) {
  if (proto.is_closed()) return Field::closed(Expr());
  return Field::grid(proto.grid_spec(),
                     std::vector<Complex>(proto.values().size(), Complex(0.0, 0.0)));
}

Field constant_like(const Field& proto, Complex value) {
  if (proto.is_closed()) return Field::closed(Expr::constant(value));
  return Field::grid(proto.grid_spec(),
                     std::vector<Complex>(proto.values().size(), value));
}

namespace {

void require_signs(const std::vector<int>& eps, int dim, const char* what) {
  if (static_cast<int>(eps.size()) != dim)
    throw ConfigError(std::string(what) + ": wrong number of signs");
  for (int e : eps)
    if (e != 1 && e != -1) throw ConfigError(std::string(what) + ": signs must be +1 or -1");
}

} // namespace

void validate_frame(const LameFrame& frame, const GridSpec& grid) {
  if (frame.dim < 2) throw ConfigError("frame dimension must be at least 2");
  if (grid.dim() != frame.dim) throw ConfigError("grid dimension does not match frame");
  require_signs(frame.eps2, frame.dim, "frame");
  if (static_cast<int>(frame.H.size()) != frame.dim)
    throw ConfigError("frame: wrong number of Lame coefficients");
  for (int i = 0; i < frame.dim; ++i) {
    const auto m = min_abs(frame.H[static_cast<size_t>(i)], grid, std::nullopt);
    if (m.value <= kDegeneracyMargin)
      throw PoleOnGrid("H" + std::to_string(i + 1) + " vanishes at node (" +
                       format_coords(grid.node(m.node)) + ")");
  }
}

LameFrame sampled_frame(const LameFrame& frame, const GridSpec& grid) {
  LameFrame out;
  out.dim = frame.dim;
  out.eps2 = frame.eps2;
  out.H.reserve(frame.H.size());
  for (const auto& h : frame.H) out.H.push_back(h.sampled(grid, std::nullopt));
  return out;
}

RotationCoefficients rotation_coefficients(const LameFrame& frame) {
  RotationCoefficients rc;
  rc.dim = frame.dim;
  rc.beta.resize(static_cast<size_t>(frame.dim * frame.dim));
  for (int i = 0; i < frame.dim; ++i)
    for (int k = 0; k < frame.dim; ++k) {
      if (i == k) {
        rc.at(i, k) = zero_like(frame.H[static_cast<size_t>(i)]);
      } else {
        rc.at(i, k) = frame.H[static_cast<size_t>(k)].partial(i) / frame.H[static_cast<size_t>(i)];
      }
    }
  return rc;
}

void apply_beta_perturbations(RotationCoefficients& beta,
                              std::span<const BetaPerturbation> perturbations) {
  for (const auto& p : perturbations) {
    if (p.i < 0 || p.i >= beta.dim || p.j < 0 || p.j >= beta.dim || p.i == p.j)
      throw ConfigError("beta perturbation indices out of range");
    beta.at(p.i, p.j) = beta.at(p.i, p.j) + constant_like(beta.at(p.i, p.j), p.delta);
  }
}

void validate_pencil(const PencilSpec& pencil, int dim, const GridSpec& grid) {
  if (static_cast<int>(pencil.f.size()) != dim)
    throw ConfigError("pencil: wrong number of eigenvalue functions");
  require_signs(pencil.eps1, dim, "pencil");
  for (int i = 0; i < dim; ++i) {
    const Expr& f = pencil.f[static_cast<size_t>(i)];
    if (f.depends_on_lambda())
      throw ConfigError("pencil eigenvalue functions cannot depend on lambda");
    for (int j = 0; j < dim; ++j)
      if (j != i && f.depends_on(j))
        throw ConfigError("pencil f" + std::to_string(i + 1) +
                          " must depend only on u" + std::to_string(i + 1));
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Field gap = Field::closed(pencil.f[static_cast<size_t>(i)] -
                                      pencil.f[static_cast<size_t>(j)]);
      const auto m = min_abs(gap, grid, std::nullopt);
      if (m.value <= kDegeneracyMargin)
        throw ConfigError("pencil eigenvalues f" + std::to_string(i + 1) + ", f" +
                          std::to_string(j + 1) + " collide at node (" +
                          format_coords(grid.node(m.node)) + ")");
    }
}

Field pencil_field(const PencilSpec& pencil, int i, const Field& proto,
                   const GridSpec& grid) {
  Field f = Field::closed(pencil.f[static_cast<size_t>(i)]);
  return proto.is_grid() ? f.sampled(grid, std::nullopt) : f;
}

Field pencil_derivative_field(const PencilSpec& pencil, int i, const Field& proto,
                              const GridSpec& grid) {
  Field df = Field::closed(pencil.f[static_cast<size_t>(i)].diff(i));
  return proto.is_grid() ? df.sampled(grid, std::nullopt) : df;
}

std::pair<LameFrame, RotationCoefficients> reduced_frame(const LameFrame& frame,
                                                         const PencilSpec& pencil,
                                                         const GridSpec& grid) {
  validate_pencil(pencil, frame.dim, grid);
  const int n = frame.dim;
  std::vector<Field> root; // sqrt(eps1^i f^i)
  root.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Field f = pencil_field(pencil, i, frame.H[static_cast<size_t>(i)], grid);
    const auto m = min_abs(f, grid, std::nullopt);
    if (m.value <= kDegeneracyMargin)
      throw ZeroEigenvalue("pencil eigenvalue f" + std::to_string(i + 1) +
                           " vanishes at node (" + format_coords(grid.node(m.node)) + ")");
    root.push_back(sqrt(Complex(pencil.eps1[static_cast<size_t>(i)], 0.0) * f));
  }

  LameFrame reduced;
  reduced.dim = n;
  reduced.eps2.resize(static_cast<size_t>(n));
  reduced.H.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    reduced.eps2[static_cast<size_t>(i)] =
        pencil.eps1[static_cast<size_t>(i)] * frame.eps2[static_cast<size_t>(i)];
    reduced.H[static_cast<size_t>(i)] = frame.H[static_cast<size_t>(i)] / root[static_cast<size_t>(i)];
  }

  const RotationCoefficients beta = rotation_coefficients(frame);
  RotationCoefficients tilde;
  tilde.dim = n;
  tilde.beta.resize(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) {
        tilde.at(i, k) = zero_like(frame.H[static_cast<size_t>(i)]);
      } else {
        tilde.at(i, k) =
            root[static_cast<size_t>(i)] / root[static_cast<size_t>(k)] * beta.at(i, k);
      }
    }
  return {std::move(reduced), std::move(tilde)};
}

DiagMetric contravariant_metric(const LameFrame& frame) {
  DiagMetric g;
  g.reserve(frame.H.size());
  for (int i = 0; i < frame.dim; ++i) {
    const Field& h = frame.H[static_cast<size_t>(i)];
    g.push_back(constant_like(h, Complex(frame.eps2[static_cast<size_t>(i)], 0.0)) /
                (h * h));
  }
  return g;
}

DiagMetric pencil_first_metric(const LameFrame& frame2, const PencilSpec& pencil) {
  DiagMetric g2 = contravariant_metric(frame2);
  DiagMetric g1;
  g1.reserve(g2.size());
  for (int i = 0; i < frame2.dim; ++i) {
    Field f = Field::closed(pencil.f[static_cast<size_t>(i)]);
    if (g2[static_cast<size_t>(i)].is_grid())
      f = f.sampled(g2[static_cast<size_t>(i)].grid_spec(), std::nullopt);
    g1.push_back(f * g2[static_cast<size_t>(i)]);
  }
  return g1;
}

Christoffel christoffel_from_diag(const DiagMetric& g) {
  const int n = static_cast<int>(g.size());
  Christoffel c;
  c.dim = n;
  c.data.resize(static_cast<size_t>(n * n * n));

  std::vector<Field> cov;
  cov.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    cov.push_back(constant_like(g[static_cast<size_t>(i)], Complex(1.0, 0.0)) /
                  g[static_cast<size_t>(i)]);

  const Complex half(0.5, 0.0);
  for (int j = 0; j < n; ++j)
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < n; ++k) {
        if (s == j) {
          c.at(j, s, k) = half * (g[static_cast<size_t>(j)] * cov[static_cast<size_t>(j)].partial(k));
        } else if (k == j) {
          c.at(j, s, k) = half * (g[static_cast<size_t>(j)] * cov[static_cast<size_t>(j)].partial(s));
        } else if (s == k) {
          c.at(j, s, k) = Complex(-0.5, 0.0) *
                          (g[static_cast<size_t>(j)] * cov[static_cast<size_t>(s)].partial(j));
        } else {
          c.at(j, s, k) = zero_like(g[static_cast<size_t>(j)]);
        }
      }
  return c;
}

Christoffel levi_civita(const LameFrame& frame) {
  return christoffel_from_diag(contravariant_metric(frame));
}

CurvatureTensor curvature_from_diag(const DiagMetric& g) {
  const int n = static_cast<int>(g.size());
  const Christoffel c = christoffel_from_diag(g);
  CurvatureTensor r;
  r.dim = n;
  r.data.resize(static_cast<size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Field mixed = c.at(j, l, i).partial(k) - c.at(j, k, i).partial(l);
          for (int m = 0; m < n; ++m)
            mixed = mixed + (c.at(j, k, m) * c.at(m, l, i) - c.at(j, l, m) * c.at(m, k, i));
          r.at(i, j, k, l) = g[static_cast<size_t>(i)] * mixed;
        }
  return r;
}

CurvatureTensor riemann_curvature(const LameFrame& frame) {
  return curvature_from_diag(contravariant_metric(frame));
}

PencilEigenvalues pencil_eigenvalues(const DiagMetric& g1, const DiagMetric& g2,
                                     std::span<const double> point) {
  if (g1.size() != g2.size()) throw ConfigError("metric pair with mismatched dimensions");
  const int n = static_cast<int>(g1.size());
  std::vector<Complex> coords(point.size());
  for (size_t a = 0; a < point.size(); ++a) coords[a] = Complex(point[a], 0.0);

  PencilEigenvalues out;
  out.roots.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Complex den = g2[static_cast<size_t>(i)].eval(coords, std::nullopt);
    if (std::abs(den) <= kDegeneracyMargin)
      throw DegenerateSecondMetric("second metric degenerates at the probed point");
    out.roots.push_back(g1[static_cast<size_t>(i)].eval(coords, std::nullopt) / den);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  out.distinct = true;
  for (size_t i = 0; i + 1 < out.roots.size(); ++i)
    if (std::abs(out.roots[i + 1] - out.roots[i]) <= kDegeneracyMargin) out.distinct = false;
  return out;
}

namespace {

/// Contravariant Christoffel Gamma^{ij}_k = g^{is} Gamma^j_{sk} (diagonal g).
std::vector<Field> contravariant_christoffel(const DiagMetric& g, const Christoffel& c) {
  const int n = c.dim;
  std::vector<Field> out(static_cast<size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out[static_cast<size_t>((i * n + j) * n + k)] =
            g[static_cast<size_t>(i)] * c.at(j, i, k);
  return out;
}

struct Worst {
  double value = 0.0;
  std::size_t node = 0;
  bool any = false;

  void consider(const kernels::Extreme& m) {
    if (!any || m.value > value || (m.value == value && m.index < node)) {
      value = m.value;
      node = m.index;
      any = true;
    }
  }
};

} // namespace

double CompatibilityReport::max_dev() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::max(e.gamma_dev, e.curv_dev));
  return m;
}

CompatibilityReport metric_compatibility_check(const DiagMetric& g1, const DiagMetric& g2,
                                               std::span<const Complex> lambdas,
                                               const GridSpec& grid) {
  if (g1.size() != g2.size()) throw ConfigError("metric pair with mismatched dimensions");
  const int n = static_cast<int>(g1.size());

  const Christoffel c1 = christoffel_from_diag(g1);
  const Christoffel c2 = christoffel_from_diag(g2);
  const auto cc1 = contravariant_christoffel(g1, c1);
  const auto cc2 = contravariant_christoffel(g2, c2);
  const CurvatureTensor r1 = curvature_from_diag(g1);
  const CurvatureTensor r2 = curvature_from_diag(g2);

  CompatibilityReport report;
  for (const Complex lambda : lambdas) {
    DiagMetric gc;
    gc.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      gc.push_back(g1[static_cast<size_t>(i)] + lambda * g2[static_cast<size_t>(i)]);
    for (int i = 0; i < n; ++i) {
      const auto m = min_abs(gc[static_cast<size_t>(i)], grid, std::nullopt);
      if (m.value <= kDegeneracyMargin)
        throw SingularCombination("metric combination degenerates at node (" +
                                  format_coords(grid.node(m.node)) + ")");
    }

    const Christoffel cc = christoffel_from_diag(gc);
    const auto ccc = contravariant_christoffel(gc, cc);
    const CurvatureTensor rc = curvature_from_diag(gc);

    Worst gamma, curv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const size_t idx = static_cast<size_t>((i * n + j) * n + k);
          const Field dev = ccc[idx] - (cc1[idx] + lambda * cc2[idx]);
          const auto vals = sample_values(dev, grid, std::nullopt);
          gamma.consider(kernels::max_abs(vals));
        }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const Field dev =
                rc.at(i, j, k, l) - (r1.at(i, j, k, l) + lambda * r2.at(i, j, k, l));
            const auto vals = sample_values(dev, grid, std::nullopt);
            curv.consider(kernels::max_abs(vals));
          }

    CompatibilityEntry entry;
    entry.lambda = lambda;
    entry.gamma_dev = gamma.value;
    entry.gamma_at = grid.node(gamma.node);
    entry.curv_dev = curv.value;
    entry.curv_at = grid.node(curv.node);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::vector<NonlocalEntry> NonlocalSet::expanded(const LameFrame& frame) const {
  if (curvature_shortcut && !entries.empty())
    throw ConfigError("nonlocal set: explicit entries and curvature shortcut are exclusive");
  if (!curvature_shortcut) return entries;
  const Complex root_k = principal_sqrt(*curvature_shortcut);
  NonlocalEntry e;
  e.eps = 1;
  e.H.reserve(frame.H.size());
  for (const auto& h : frame.H) e.H.push_back(root_k * h);
  return {e};
}

BracketCoefficients::BracketCoefficients(int dim, std::size_t n_affinors)
    : dim_(dim),
      g_(static_cast<size_t>(dim * dim)),
      b_(static_cast<size_t>(dim * dim * dim)),
      w_(n_affinors, std::vector<Field>(static_cast<size_t>(dim * dim))),
      eps_(n_affinors, 1) {}

BracketCoefficients assemble_bracket_coefficients(const LameFrame& frame,
                                                  const NonlocalSet& nl) {
  const int n = frame.dim;
  const auto affinors = nl.expanded(frame);
  for (const auto& a : affinors)
    if (static_cast<int>(a.H.size()) != n)
      throw ConfigError("nonlocal entry has wrong number of fields");

  BracketCoefficients bc(n, affinors.size());
  const DiagMetric g = contravariant_metric(frame);
  const Christoffel c = christoffel_from_diag(g);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      bc.g(i, j) = i == j ? g[static_cast<size_t>(i)] : zero_like(g[static_cast<size_t>(i)]);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        bc.b(i, j, k) = -(g[static_cast<size_t>(i)] * c.at(j, i, k));

  for (size_t a = 0; a < affinors.size(); ++a) {
    bc.eps(a) = affinors[a].eps;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        bc.w(a, i, j) = i == j ? affinors[a].H[static_cast<size_t>(i)] / frame.H[static_cast<size_t>(i)]
                               : zero_like(frame.H[static_cast<size_t>(i)]);
  }
  return bc;
}

BracketCoefficients assemble_from_diag(const DiagMetric& g,
                                       std::span<const int> affinor_eps,
                                       std::span<const std::vector<Field>> affinor_diag) {
  const int n = static_cast<int>(g.size());
  if (affinor_eps.size() != affinor_diag.size())
    throw ConfigError("affinor sign/field count mismatch");
  BracketCoefficients bc(n, affinor_eps.size());
  const Christoffel c = christoffel_from_diag(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      bc.g(i, j) = i == j ? g[static_cast<size_t>(i)] : zero_like(g[static_cast<size_t>(i)]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        bc.b(i, j, k) = -(g[static_cast<size_t>(i)] * c.at(j, i, k));
  for (size_t a = 0; a < affinor_eps.size(); ++a) {
    bc.eps(a) = affinor_eps[a];
    if (static_cast<int>(affinor_diag[a].size()) != n)
      throw ConfigError("affinor entry has wrong number of fields");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        bc.w(a, i, j) =
            i == j ? affinor_diag[a][static_cast<size_t>(i)] : zero_like(g[static_cast<size_t>(i)]);
  }
  return bc;
}

double ConditionReport::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_abs);
  return m;
}

const ConditionEntry& ConditionReport::by_name(const std::string& name) const {
  for (const auto& e : entries)
    if (e.condition == name) return e;
  throw ConfigError("no condition entry named " + name);
}

ConditionReport bracket_condition_residuals(const BracketCoefficients& bc,
                                            const GridSpec& grid) {
  const int n = bc.dim();
  const std::size_t la = bc.affinors();
  const std::size_t nodes = grid.size();

  // |g^ii|^(-3/2), |g^rr|^(-1/2) per node, for the condition-07 scale.
  std::vector<std::vector<double>> w32(static_cast<size_t>(n)), w12(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto gs = sample_values(bc.g(i, i), grid, std::nullopt);
    auto& a = w32[static_cast<size_t>(i)];
    auto& b = w12[static_cast<size_t>(i)];
    a.resize(nodes);
    b.resize(nodes);
    for (std::size_t p = 0; p < nodes; ++p) {
      const double m = std::abs(gs[p]);
      b[p] = 1.0 / std::sqrt(m);
      a[p] = b[p] / m;
    }
  }

  ConditionReport report;
  auto finish = [&](const char* name, const Worst& worst) {
    ConditionEntry e;
    e.condition = name;
    e.max_abs = worst.any ? worst.value : 0.0;
    e.at = grid.node(worst.any ? worst.node : 0);
    report.entries.push_back(std::move(e));
  };
  auto reduce = [&](Worst& worst, const Field& residual) {
    worst.consider(kernels::max_abs(sample_values(residual, grid, std::nullopt)));
  };

  {
    Worst worst; // (01) g^{ij} = g^{ji}
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) reduce(worst, bc.g(i, j) - bc.g(j, i));
    finish("01", worst);
  }
  {
    Worst worst; // (02) dg^{ij}/du^k = b^{ij}_k + b^{ji}_k
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          reduce(worst, bc.g(i, j).partial(k) - bc.b(i, j, k) - bc.b(j, i, k));
    finish("02", worst);
  }
  {
    Worst worst; // (03) g^{is} b^{jk}_s = g^{js} b^{ik}_s
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Field lhs = zero_like(bc.g(0, 0));
          Field rhs = zero_like(bc.g(0, 0));
          for (int s = 0; s < n; ++s) {
            lhs = lhs + bc.g(i, s) * bc.b(j, k, s);
            rhs = rhs + bc.g(j, s) * bc.b(i, k, s);
          }
          reduce(worst, lhs - rhs);
        }
    finish("03", worst);
  }
  {
    Worst worst; // (04) g^{is} w^j_s = g^{js} w^i_s
    for (std::size_t a = 0; a < la; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Field lhs = zero_like(bc.g(0, 0));
          Field rhs = zero_like(bc.g(0, 0));
          for (int s = 0; s < n; ++s) {
            lhs = lhs + bc.g(i, s) * bc.w(a, j, s);
            rhs = rhs + bc.g(j, s) * bc.w(a, i, s);
          }
          reduce(worst, lhs - rhs);
        }
    finish("04", worst);
  }
  {
    Worst worst; // (05) affinors commute
    for (std::size_t a = 0; a < la; ++a)
      for (std::size_t b2 = a + 1; b2 < la; ++b2)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Field lhs = zero_like(bc.g(0, 0));
            Field rhs = zero_like(bc.g(0, 0));
            for (int s = 0; s < n; ++s) {
              lhs = lhs + bc.w(a, i, s) * bc.w(b2, s, j);
              rhs = rhs + bc.w(b2, i, s) * bc.w(a, s, j);
            }
            reduce(worst, lhs - rhs);
          }
    finish("05", worst);
  }
  {
    Worst worst; // (06) symmetry of the affinor gradient combination
    for (std::size_t a = 0; a < la; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            Field lhs = zero_like(bc.g(0, 0));
            Field rhs = zero_like(bc.g(0, 0));
            for (int s = 0; s < n; ++s)
              for (int r = 0; r < n; ++r) {
                lhs = lhs + bc.g(i, s) * bc.g(j, r) * bc.w(a, k, r).partial(s) -
                      bc.g(j, r) * bc.b(i, k, s) * bc.w(a, s, r);
                rhs = rhs + bc.g(j, s) * bc.g(i, r) * bc.w(a, k, r).partial(s) -
                      bc.g(i, r) * bc.b(j, k, s) * bc.w(a, s, r);
              }
            reduce(worst, lhs - rhs);
          }
    finish("06", worst);
  }
  {
    Worst worst; // (07) curvature form, frame-normalized components
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int r = 0; r < n; ++r) {
            Field res = zero_like(bc.g(0, 0));
            for (int s = 0; s < n; ++s) {
              res = res + bc.g(i, s) * (bc.b(j, k, r).partial(s) - bc.b(j, k, s).partial(r));
              res = res + bc.b(i, k, s) * bc.b(s, j, r) - bc.b(i, j, s) * bc.b(s, k, r);
            }
            for (std::size_t a = 0; a < la; ++a) {
              Field tail = zero_like(bc.g(0, 0));
              for (int s = 0; s < n; ++s)
                tail = tail + bc.g(i, s) * (bc.w(a, j, s) * bc.w(a, k, r) -
                                            bc.w(a, j, r) * bc.w(a, k, s));
              res = res - Complex(bc.eps(a), 0.0) * tail;
            }
            const auto vals = sample_values(res, grid, std::nullopt);
            std::vector<double> weight(nodes);
            for (std::size_t p = 0; p < nodes; ++p)
              weight[p] = w32[static_cast<size_t>(i)][p] * w12[static_cast<size_t>(r)][p];
            worst.consider(kernels::max_abs_weighted(vals, weight));
          }
    finish("07", worst);
  }
  return report;
}

} // namespace hydrolax
