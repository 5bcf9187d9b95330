// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hydrolax/catalog.hpp"
#include "hydrolax/commands.hpp"
#include "hydrolax/problem_io.hpp"

using namespace hydrolax;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string write_temp_problem(const std::string& name, const ProblemSpec& p) {
  const std::string path = "/tmp/hydrolax_accept_" + name + ".prob";
  std::ofstream out(path);
  out << dump_problem(p);
  return path;
}

ResidualReport full_report(const ProblemSpec& p, Backend b) {
  ResidualReport rep = system_residuals(p, b);
  if (p.pencil) {
    ResidualReport res = resolved_beta_residuals(p, b);
    rep.entries.insert(rep.entries.end(), res.entries.begin(), res.entries.end());
  }
  return rep;
}

// --- criterion 1: catalog exactness through the CLI surface ------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> names = {"cartesian", "polar", "sphere", "flat_pencil_const",
                                          "flat_pencil_sqrt"};
  bool ok = true;
  double worst = 0.0;
  for (const auto& name : names) {
    const auto entry = get_example(name);
    const std::string path = write_temp_problem(name, entry.problem);
    VerifyOptions opt;
    opt.problem = path;
    opt.backend = Backend::Symbolic;
    opt.tol = 1e-10;
    std::ostringstream lines;
    const int code = cmd_verify(opt, lines);
    ok = ok && code == kExitPass;
    const auto rep = full_report(entry.problem, Backend::Symbolic);
    worst = std::max(worst, rep.max_abs());
    std::remove(path.c_str());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && worst <= 1e-10 && seconds <= 10.0;
  report(1, "catalog exactness at 1e-10",
         ok, "worst residual " + sci(worst) + ", runtime " + sci(seconds) + " s");
}

// --- criterion 2: constant-curvature bracket conditions ----------------

void criterion_2() {
  const auto entry = get_example("sphere");
  const auto bc_full =
      assemble_bracket_coefficients(entry.problem.frame, entry.problem.nl2);
  const auto rep_full = bracket_condition_residuals(bc_full, entry.problem.grid);
  const bool pass_full = rep_full.max_abs() <= 1e-10;

  const auto bc_dropped = assemble_bracket_coefficients(entry.problem.frame, {});
  const auto rep_dropped = bracket_condition_residuals(bc_dropped, entry.problem.grid);
  const auto& c7 = rep_dropped.by_name("07");
  const double anchor = std::abs(std::sin(c7.at[0])); // |H_1 H_2| at the arg-max node
  const bool pass_dropped =
      c7.max_abs >= 0.9 * anchor && c7.max_abs <= 1.1 * anchor && c7.max_abs > 1e-3;

  report(2, "bracket conditions on the sphere", pass_full && pass_dropped,
         "all " + sci(rep_full.max_abs()) + "; dropped tail 07=" + sci(c7.max_abs) +
             " vs |H1H2|=" + sci(anchor));
}

// --- criterion 3: zero curvature on exact data -------------------------

void criterion_3() {
  const auto sphere = get_example("sphere").problem;
  const auto cc = build_connection(LaxVariant::ConstantCurvature, sphere, {});
  const auto flat = get_example("flat_pencil_sqrt").problem;
  const auto samples = default_lambda_samples(flat);
  const auto rep_cc = zero_curvature_residual(cc, samples, sphere.grid);

  const auto full = build_connection(LaxVariant::Full, flat, {});
  const auto rep_full = zero_curvature_residual(full, samples, flat.grid);

  const bool ok = samples.size() == 20 && rep_cc.max_frobenius() <= 1e-8 &&
                  rep_full.max_frobenius() <= 1e-8;
  report(3, "zero curvature of CC(sphere) and FULL(flat pencil)", ok,
         "CC " + sci(rep_cc.max_frobenius()) + ", FULL " + sci(rep_full.max_frobenius()) +
             " over " + std::to_string(samples.size()) + " samples");
}

// --- criterion 4: converse sensitivity ---------------------------------

void criterion_4() {
  const auto perturbed = get_example("sphere_perturbed").problem;
  const auto clean = get_example("sphere").problem;

  const auto sys = system_residuals(perturbed, Backend::Symbolic);
  const double lamx2 = sys.by_tag(EquationTag::LamX2).max_abs;
  const bool band = lamx2 >= 1e-4 && lamx2 <= 1e-2;

  const std::vector<Complex> lambdas{Complex(0.0, 0.0)};
  const auto c_pert = build_connection(LaxVariant::ConstantCurvature, perturbed, {});
  const double zc_pert =
      zero_curvature_residual(c_pert, lambdas, perturbed.grid).max_frobenius();

  const auto c_clean = build_connection(LaxVariant::ConstantCurvature, clean, {});
  const double zc_clean =
      zero_curvature_residual(c_clean, lambdas, clean.grid).max_frobenius();
  const double defect_clean =
      monodromy_defect(c_clean, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 256);

  const bool ok = band && zc_pert >= 1e-6 && zc_clean <= 1e-8 && defect_clean <= 1e-8;
  report(4, "perturbation sensitivity and recovery", ok,
         "lamx2 " + sci(lamx2) + ", ZC(perturbed) " + sci(zc_pert) + ", ZC(clean) " +
             sci(zc_clean) + ", defect(clean) " + sci(defect_clean));
}

// --- criterion 5: monodromy --------------------------------------------

void criterion_5() {
  const auto sphere = get_example("sphere").problem;
  const auto perturbed = get_example("sphere_perturbed").problem;
  const auto c = build_connection(LaxVariant::ConstantCurvature, sphere, {});
  const auto cp = build_connection(LaxVariant::ConstantCurvature, perturbed, {});
  const Complex lambda(0.0, 0.0);

  const double d256 = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, lambda, 256);
  const double d512 = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, lambda, 512);
  const double ratio = d256 / d512;
  const double dp = monodromy_defect(cp, 0, 0.3, 1.2, 1, 0.5, 1.5, lambda, 256);

  const bool ok = d256 <= 1e-8 && ratio >= 8.0 && ratio <= 32.0 && dp >= 1e-5;
  report(5, "monodromy defect and fourth-order convergence", ok,
         "defect(256) " + sci(d256) + ", ratio " + sci(ratio) + ", perturbed " + sci(dp));
}

// --- criterion 6: backend oracle equivalence ----------------------------

void criterion_6() {
  bool ok = true;
  std::string detail;
  double worst_ratio_lo = 1e9, worst_ratio_hi = 0.0;
  for (const auto& name : catalog_names()) {
    const auto entry = get_example(name);
    ProblemSpec coarse = entry.problem;
    ProblemSpec fine = entry.problem;
    fine.grid = coarse.grid.refined();
    const double h = coarse.grid.max_spacing();

    const auto sym = full_report(coarse, Backend::Symbolic);
    const auto fd_h = full_report(coarse, Backend::FiniteDifference);
    const auto fd_h2 = full_report(fine, Backend::FiniteDifference);

    for (const auto& e : sym.entries) {
      const double s = e.max_abs;
      const double e1 = fd_h.by_tag(e.tag).max_abs;
      const double e2 = fd_h2.by_tag(e.tag).max_abs;
      // bound clause: FD maxima sit under the symbolic maxima plus C h^2
      if (e1 > s + 5.0 * h * h) {
        ok = false;
        detail += name + "/" + std::string(tag_name(e.tag)) + " bound; ";
      }
      // ratio clause: pure-h^2 signals only (exact entries, visible error)
      if (s <= 1e-10 && e1 > 1e-12) {
        const double ratio = e1 / e2;
        worst_ratio_lo = std::min(worst_ratio_lo, ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, ratio);
        if (ratio < 3.5 || ratio > 4.5) {
          ok = false;
          detail += name + "/" + std::string(tag_name(e.tag)) + " ratio " + sci(ratio) + "; ";
        }
      }
    }
  }
  if (worst_ratio_hi == 0.0) {
    detail += "no measurable h^2 signal";
  } else {
    detail += "ratios in [" + sci(worst_ratio_lo) + ", " + sci(worst_ratio_hi) + "]";
  }
  report(6, "finite-difference oracle equivalence", ok, detail);
}

// --- criterion 7: pencil compatibility ----------------------------------

void criterion_7() {
  PencilOptions opt;
  opt.problem = "catalog:flat_pencil_sqrt";
  opt.lambdas = {0.5, 1.0, 2.0};
  std::ostringstream lines;
  const int code = cmd_pencil(opt, lines);
  const bool conditions_ok = code == kExitPass;

  // eigenvalue exactness at every node, bitwise
  const auto entry = get_example("flat_pencil_sqrt");
  const DiagMetric g2 = contravariant_metric(entry.problem.frame);
  const DiagMetric g1 = pencil_first_metric(entry.problem.frame, *entry.problem.pencil);
  bool eig_exact = true;
  for (std::size_t node = 0; node < entry.problem.grid.size(); ++node) {
    const auto pt = entry.problem.grid.node(node);
    const auto eig = pencil_eigenvalues(g1, g2, pt);
    eig_exact = eig_exact && eig.roots.size() == 2 &&
                eig.roots[0] == Complex(pt[0], 0.0) && eig.roots[1] == Complex(pt[1], 0.0);
  }

  // a first metric that is not a single-variable rescaling must fail
  const DiagMetric broken{Field::closed(parse_expression("u2")),
                          Field::closed(parse_expression("u2"))};
  const std::vector<Complex> lambdas{Complex(0.5, 0.0), Complex(1.0, 0.0), Complex(2.0, 0.0)};
  const auto compat = metric_compatibility_check(broken, g2, lambdas, entry.problem.grid);
  const bool broken_fails = compat.max_dev() >= 1e-3;

  report(7, "pencil compatibility and eigenvalue report",
         conditions_ok && eig_exact && broken_fails,
         std::string("cmd_pencil exit ") + std::to_string(code) + ", eigenvalues " +
             (eig_exact ? "exact" : "off") + ", broken dev " + sci(compat.max_dev()));
}

// --- criterion 8: resolved-form co-vanishing -----------------------------

void criterion_8() {
  bool ok = true;
  std::string detail;
  // satisfying data: both reports at 1e-9
  for (const char* name : {"flat_pencil_const", "flat_pencil_sqrt"}) {
    const auto p = get_example(name).problem;
    const auto sys = system_residuals(p, Backend::Symbolic);
    const double pair_max = std::max(sys.by_tag(EquationTag::LamX2).max_abs,
                                     sys.by_tag(EquationTag::Lam3).max_abs);
    const double res = resolved_beta_residuals(p, Backend::Symbolic)
                           .by_tag(EquationTag::Resolved)
                           .max_abs;
    if (pair_max > 1e-9 || res > 1e-9) {
      ok = false;
      detail += std::string(name) + " not satisfied; ";
    }
  }
  // perturbed pencil data: both reports flag it
  ProblemSpec q = get_example("flat_pencil_sqrt").problem;
  q.frame.H[1] = Field::closed(parse_expression("1 + 0.001*u1")); // beta_12 = 1e-3
  const auto sys = system_residuals(q, Backend::Symbolic);
  const double pair_max = std::max(sys.by_tag(EquationTag::LamX2).max_abs,
                                   sys.by_tag(EquationTag::Lam3).max_abs);
  const double res =
      resolved_beta_residuals(q, Backend::Symbolic).by_tag(EquationTag::Resolved).max_abs;
  if (pair_max < 1e-5 || res < 1e-5) ok = false;
  detail += "perturbed pair " + sci(pair_max) + ", resolved " + sci(res);
  report(8, "resolved form co-vanishes with (lamx2, lam3)", ok, detail);
}

} // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("ACCEPTANCE: %d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
