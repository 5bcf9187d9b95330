#include "hydrolax/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "hydrolax/catalog.hpp"
#include "hydrolax/problem_io.hpp"

namespace hydrolax {

double default_tolerance(Backend backend) {
  return backend == Backend::Symbolic ? 1e-9 : 1e-4;
}

namespace {

ProblemSpec load_with_grid(const std::string& spec, const std::optional<int>& grid_override) {
  ProblemSpec p = load_problem(spec);
  if (grid_override) {
    if (*grid_override < 3) throw ConfigError("--grid needs at least 3 nodes per axis");
    p.grid = p.grid.with_count(*grid_override);
  }
  return p;
}

int guarded(std::ostream& out, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    out << "ERROR " << e.what() << "\n";
    return kExitConfig;
  }
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

} // namespace

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  return guarded(out, [&] {
    const ProblemSpec p = load_with_grid(opt.problem, opt.grid_override);
    const double tol = opt.tol.value_or(default_tolerance(opt.backend));

    ResidualReport report = system_residuals(p, opt.backend);
    if (p.pencil) {
      ResidualReport resolved = resolved_beta_residuals(p, opt.backend);
      report.entries.insert(report.entries.end(), resolved.entries.begin(),
                            resolved.entries.end());
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const ResidualEntry& a, const ResidualEntry& b) { return a.tag < b.tag; });
    out << report.to_lines();
    return report.max_abs() <= tol ? kExitPass : kExitResidual;
  });
}

int cmd_lax(const LaxOptions& opt, std::ostream& out) {
  return guarded(out, [&] {
    const ProblemSpec p = load_with_grid(opt.problem, opt.grid_override);
    const double tol = opt.tol.value_or(
        opt.backend == Backend::Symbolic ? 1e-8 : default_tolerance(opt.backend));
    const LaxVariant variant = variant_from_name(opt.variant);

    LaxExtras extras;
    if (opt.k1) extras.k1 = Complex(*opt.k1, 0.0);
    if (opt.k2) extras.k2 = Complex(*opt.k2, 0.0);

    const LaxConnection c = build_connection(variant, p, extras);
    std::vector<Complex> lambdas;
    if (c.lambda_dependent) {
      lambdas = default_lambda_samples(p, opt.lambda_min, opt.lambda_max, opt.lambda_samples,
                                       /*with_imaginary=*/true);
    } else {
      lambdas = {Complex(0.0, 0.0)};
    }
    const CurvatureReport report = zero_curvature_residual(c, lambdas, p.grid, opt.backend);
    out << report.to_lines(variant);
    return report.max_frobenius() <= tol ? kExitPass : kExitResidual;
  });
}

int cmd_transport(const TransportOptions& opt, std::ostream& out) {
  return guarded(out, [&] {
    if (!opt.rect) throw ConfigError("transport needs --rect u<i> a b u<j> a b");
    if (opt.steps < 1) throw ConfigError("--steps must be positive");
    const ProblemSpec p = load_problem(opt.problem);
    const double tol = opt.tol.value_or(1e-8);
    const LaxVariant variant = variant_from_name(opt.variant);

    LaxExtras extras;
    if (opt.k1) extras.k1 = Complex(*opt.k1, 0.0);
    if (opt.k2) extras.k2 = Complex(*opt.k2, 0.0);

    const LaxConnection c = build_connection(variant, p, extras);
    const RectSpec& r = *opt.rect;
    const Complex lambda(opt.lambda, 0.0);
    const double defect =
        monodromy_defect(c, r.axis_a, r.a0, r.a1, r.axis_b, r.b0, r.b1, lambda, opt.steps);

    char buf[128];
    std::snprintf(buf, sizeof buf, "MONO %s lambda=%.6g steps=%d defect=%.5e\n",
                  std::string(variant_name(variant)).c_str(), opt.lambda, opt.steps, defect);
    out << buf;
    return defect <= tol ? kExitPass : kExitResidual;
  });
}

int cmd_pencil(const PencilOptions& opt, std::ostream& out) {
  return guarded(out, [&] {
    const ProblemSpec p = load_with_grid(opt.problem, opt.grid_override);
    const double tol = opt.tol.value_or(1e-9);
    if (!p.pencil) throw MissingPencil("problem has no pencil section");
    validate_pencil(*p.pencil, p.frame.dim, p.grid);

    std::vector<double> lambdas = opt.lambdas;
    if (lambdas.empty()) lambdas = {0.5, 1.0, 2.0};
    std::sort(lambdas.begin(), lambdas.end());

    const DiagMetric g2 = contravariant_metric(p.frame);
    const DiagMetric g1 = pencil_first_metric(p.frame, *p.pencil);
    const int n = p.frame.dim;

    // diagonal affinors of both brackets, lambda-weighted per the pencil
    std::vector<std::vector<Field>> w1, w2;
    std::vector<int> eps1a, eps2a;
    for (const auto& e : p.nl2.expanded(p.frame)) {
      std::vector<Field> diag;
      for (int i = 0; i < n; ++i)
        diag.push_back(e.H[static_cast<size_t>(i)] / p.frame.H[static_cast<size_t>(i)]);
      w2.push_back(std::move(diag));
      eps2a.push_back(e.eps);
    }
    if (p.nl1) {
      for (const auto& e : p.nl1->expanded(p.frame)) {
        std::vector<Field> diag;
        for (int i = 0; i < n; ++i)
          diag.push_back(e.H[static_cast<size_t>(i)] / p.frame.H[static_cast<size_t>(i)]);
        w1.push_back(std::move(diag));
        eps1a.push_back(e.eps);
      }
    }

    double worst = 0.0;
    for (const double lv : lambdas) {
      const Complex lambda(lv, 0.0);
      DiagMetric gc;
      for (int i = 0; i < n; ++i)
        gc.push_back(g1[static_cast<size_t>(i)] + lambda * g2[static_cast<size_t>(i)]);
      for (int i = 0; i < n; ++i) {
        const auto m = min_abs(gc[static_cast<size_t>(i)], p.grid, std::nullopt);
        if (m.value <= kDegeneracyMargin)
          throw SingularCombination("combination metric degenerates at lambda=" +
                                    format_double(lv) + ", node (" +
                                    format_coords(p.grid.node(m.node)) + ")");
      }

      std::vector<std::vector<Field>> affinors = w1;
      std::vector<int> eps = eps1a;
      const Complex root_lambda = principal_sqrt(lambda);
      for (size_t a = 0; a < w2.size(); ++a) {
        std::vector<Field> diag;
        for (const auto& f : w2[a]) diag.push_back(root_lambda * f);
        affinors.push_back(std::move(diag));
        eps.push_back(eps2a[a]);
      }

      const BracketCoefficients bc = assemble_from_diag(gc, eps, affinors);
      const ConditionReport rep = bracket_condition_residuals(bc, p.grid);
      for (const auto& entry : rep.entries) {
        out << "PENCIL lambda=" << format_double(lv) << " cond=" << entry.condition
            << " max=" << sci(entry.max_abs) << " at=(" << format_coords(entry.at) << ")\n";
        worst = std::max(worst, entry.max_abs);
      }
    }

    std::vector<Complex> clambdas;
    for (const double lv : lambdas) clambdas.push_back(Complex(lv, 0.0));
    const CompatibilityReport compat = metric_compatibility_check(g1, g2, clambdas, p.grid);
    for (const auto& e : compat.entries) {
      out << "PENCIL-COMPAT lambda=" << format_double(e.lambda.real())
          << " gamma=" << sci(e.gamma_dev) << " curv=" << sci(e.curv_dev) << "\n";
      worst = std::max(worst, std::max(e.gamma_dev, e.curv_dev));
    }

    // eigenvalue report: the roots must reproduce the sorted f values
    double eig_dev = 0.0;
    for (std::size_t node = 0; node < p.grid.size(); ++node) {
      const auto pt = p.grid.node(node);
      const auto eig = pencil_eigenvalues(g1, g2, pt);
      std::vector<Complex> coords(pt.size());
      for (size_t a = 0; a < pt.size(); ++a) coords[a] = Complex(pt[a], 0.0);
      std::vector<Complex> want;
      for (const auto& f : p.pencil->f) want.push_back(f.eval(coords, std::nullopt));
      std::sort(want.begin(), want.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      for (size_t i = 0; i < want.size(); ++i)
        eig_dev = std::max(eig_dev, std::abs(eig.roots[i] - want[i]));
    }
    out << "PENCIL-EIG max-dev=" << sci(eig_dev) << "\n";
    worst = std::max(worst, eig_dev);

    return worst <= tol ? kExitPass : kExitResidual;
  });
}

int cmd_dump(const std::string& name, std::ostream& out) {
  return guarded(out, [&] {
    out << dump_problem(get_example(name).problem);
    return kExitPass;
  });
}

} // namespace hydrolax
