#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hydrolax/residuals.hpp"

using namespace hydrolax;

namespace {

LameFrame make_frame(std::vector<std::string> h, std::vector<int> eps = {}) {
  LameFrame f;
  f.dim = static_cast<int>(h.size());
  f.eps2 = eps.empty() ? std::vector<int>(h.size(), 1) : std::move(eps);
  for (const auto& s : h) f.H.push_back(Field::closed(parse_expression(s)));
  return f;
}

ProblemSpec cartesian() {
  ProblemSpec p;
  p.frame = make_frame({"1", "1"});
  p.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
  return p;
}

ProblemSpec sphere(const std::string& h2 = "sin(u1)") {
  ProblemSpec p;
  p.frame = make_frame({"1", h2});
  p.nl2.curvature_shortcut = Complex(1.0, 0.0);
  p.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  return p;
}

ProblemSpec flat_pencil_sqrt(const std::string& h2 = "1") {
  ProblemSpec p;
  p.frame = make_frame({"1", h2});
  p.pencil = PencilSpec{{parse_expression("u1"), parse_expression("u2")}, {1, 1}};
  p.grid = GridSpec({{1.0, 2.0, 9}, {2.6, 3.6, 9}});
  return p;
}

// Deliberately non-solution data with every ingredient populated, for
// algebraic cross-checks that must hold on arbitrary fields.
ProblemSpec generic3() {
  ProblemSpec p;
  p.frame = make_frame({"1 + u1*u2", "exp(0.3*u1) + u3", "2 + sin(u2) + u3*u1"}, {1, -1, 1});
  p.pencil = PencilSpec{{parse_expression("u1^2 + 1"), parse_expression("3*u2 + 6"),
                         parse_expression("cos(u3) + 12")},
                        {1, 1, 1}};
  NonlocalSet nl2;
  nl2.entries.push_back({1, {Field::closed(parse_expression("sin(u1) + 2")),
                             Field::closed(parse_expression("u1 + u2")),
                             Field::closed(parse_expression("u3 + 1"))}});
  p.nl2 = nl2;
  NonlocalSet nl1;
  nl1.entries.push_back({-1, {Field::closed(parse_expression("u1*u3 + 2")),
                              Field::closed(parse_expression("u2^2 + 1")),
                              Field::closed(parse_expression("3"))}});
  p.nl1 = nl1;
  p.grid = GridSpec({{0.2, 0.9, 5}, {0.3, 1.0, 5}, {0.4, 1.1, 5}});
  return p;
}

} // namespace

TEST_CASE("cartesian problem vanishes identically") {
  for (Backend b : {Backend::Symbolic, Backend::FiniteDifference}) {
    const auto rep = system_residuals(cartesian(), b);
    CHECK(rep.max_abs() == 0.0);
    CHECK(rep.has_tag(EquationTag::LamX0));
    CHECK(rep.has_tag(EquationTag::LamX1));
    CHECK(rep.has_tag(EquationTag::LamX2));
    CHECK(!rep.has_tag(EquationTag::Lam3));
  }
}

TEST_CASE("sphere with curvature shortcut") {
  const auto rep = system_residuals(sphere(), Backend::Symbolic);
  // -sin(u1) + sin(u1): exact cancellation
  CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= 1e-10);
  // transport equations reduce to the defining relation for beta
  CHECK(rep.by_tag(EquationTag::LamX0).max_abs <= 1e-13);
}

TEST_CASE("flat pencil problems") {
  for (Backend b : {Backend::Symbolic, Backend::FiniteDifference}) {
    const auto rep = system_residuals(flat_pencil_sqrt(), b);
    CHECK(rep.max_abs() <= 1e-10);
    CHECK(rep.has_tag(EquationTag::Lam3));
    CHECK(rep.has_tag(EquationTag::Lam00));
    const auto res = resolved_beta_residuals(flat_pencil_sqrt(), b);
    CHECK(res.by_tag(EquationTag::Resolved).max_abs <= 1e-10);
  }
}

TEST_CASE("frame-realized beta offset moves lamx2 into the band") {
  // H_2 = sin(u1) + 1e-3*u1 gives beta_12 = cos(u1) + 1e-3.
  const auto rep = system_residuals(sphere("sin(u1) + 0.001*u1"), Backend::Symbolic);
  const double v = rep.by_tag(EquationTag::LamX2).max_abs;
  CHECK(v >= 1e-4);
  CHECK(v <= 1e-2);
  // lamx0 stays exactly satisfied: the shortcut fields share the frame.
  CHECK(rep.by_tag(EquationTag::LamX0).max_abs <= 1e-13);
}

TEST_CASE("raw beta offsets feed the transport equations") {
  ProblemSpec p = sphere();
  p.beta_perturbations.push_back({0, 1, Complex(1e-3, 0.0)});
  const auto rep = system_residuals(p, Backend::Symbolic);
  // lamx0 = -delta exactly; lamx2 is blind to a constant offset at N=2.
  CHECK(rep.by_tag(EquationTag::LamX0).max_abs == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= 1e-12);
}

TEST_CASE("report serialization is stable") {
  const auto rep = system_residuals(cartesian(), Backend::Symbolic);
  const std::string lines = rep.to_lines();
  CHECK(lines.find("RESID lamx0 max=0.00000e+00 at=(0,0)") != std::string::npos);
  CHECK(lines.find("RESID lamx2") != std::string::npos);
  CHECK(rep.to_lines() == lines);
}

TEST_CASE("elimination identity ties the resolved form to lamx2 and lam3") {
  // lam3_ij - f^j lamx2_ij = eps^i (f^i - f^j) resolved_ij pointwise, on
  // data that satisfies nothing. This pins the index sets of the
  // first-order form.
  for (const ProblemSpec& p : {generic3(), flat_pencil_sqrt("1 + 0.3*u1 + 0.2*u2")}) {
    const auto lamx2 = residual_fields(p, Backend::Symbolic, EquationTag::LamX2);
    const auto lam3 = residual_fields(p, Backend::Symbolic, EquationTag::Lam3);
    const auto resolved = residual_fields(p, Backend::Symbolic, EquationTag::Resolved);
    const int n = p.frame.dim;
    auto pair_field = [&](const std::vector<TaggedField>& fields, int i, int j) {
      const int a = std::min(i, j), b = std::max(i, j);
      for (const auto& tf : fields)
        if (tf.indices[0] == a && tf.indices[1] == b) return tf.residual;
      throw std::runtime_error("missing pair");
    };
    for (const auto& res : resolved) {
      const int i = res.indices[0], j = res.indices[1];
      const Field fi = Field::closed(p.pencil->f[static_cast<size_t>(i)]);
      const Field fj = Field::closed(p.pencil->f[static_cast<size_t>(j)]);
      const Complex epsi(p.frame.eps2[static_cast<size_t>(i)], 0.0);
      const Field lhs = pair_field(lam3, i, j) - fj * pair_field(lamx2, i, j);
      const Field rhs = epsi * ((fi - fj) * res.residual);
      const double dev = max_abs(lhs - rhs, p.grid, std::nullopt).value;
      const double scale = max_abs(lhs, p.grid, std::nullopt).value + 1.0;
      CHECK(dev <= 1e-12 * scale);
      (void)n;
    }
  }
}

TEST_CASE("co-vanishing of the resolved form and the pair") {
  // Constant beta offset on pencil data: lam3 carries delta/2, the
  // resolved report carries delta/(2(f^j-f^i)); both must flag it.
  const ProblemSpec p = flat_pencil_sqrt("1 + 0.001*u1");
  const auto sys = system_residuals(p, Backend::Symbolic);
  const auto res = resolved_beta_residuals(p, Backend::Symbolic);
  const double pair_max = std::max(sys.by_tag(EquationTag::LamX2).max_abs,
                                   sys.by_tag(EquationTag::Lam3).max_abs);
  CHECK(pair_max >= 1e-5);
  CHECK(res.by_tag(EquationTag::Resolved).max_abs >= 1e-5);
  CHECK(sys.by_tag(EquationTag::Lam3).max_abs == doctest::Approx(5e-4).epsilon(1e-6));
}

TEST_CASE("sphere frame forced with a mismatched pencil") {
  // With f = (u1, u2) and no tails the data does not satisfy lam3; the
  // resolved form and the (lamx2, lam3) pair flag it together.
  ProblemSpec p;
  p.frame = make_frame({"1", "sin(u1)"});
  p.pencil = PencilSpec{{parse_expression("u1"), parse_expression("u2")}, {1, 1}};
  p.grid = GridSpec({{0.2, 1.4, 9}, {1.6, 3.6, 9}}); // keeps f^2 - f^1 >= 0.2
  const auto sys = system_residuals(p, Backend::Symbolic);
  const auto res = resolved_beta_residuals(p, Backend::Symbolic);
  // lamx2 = d(cos u1)/du1 = -sin(u1) with no tail to cancel it
  CHECK(sys.by_tag(EquationTag::LamX2).max_abs == doctest::Approx(std::sin(1.4)).epsilon(1e-12));
  CHECK(sys.by_tag(EquationTag::Lam3).max_abs > 1e-2);
  CHECK(res.by_tag(EquationTag::Resolved).max_abs > 1e-2);
  // pointwise, the three residuals stay tied by the elimination identity
  const auto lamx2 = residual_fields(p, Backend::Symbolic, EquationTag::LamX2);
  const auto lam3 = residual_fields(p, Backend::Symbolic, EquationTag::Lam3);
  const auto resolved = residual_fields(p, Backend::Symbolic, EquationTag::Resolved);
  const Field f1 = Field::closed(p.pencil->f[0]);
  const Field f2 = Field::closed(p.pencil->f[1]);
  const Field lhs = lam3[0].residual - f2 * lamx2[0].residual; // pair (1,2)
  const Field rhs = (f1 - f2) * resolved[0].residual;          // eps^1 = +1
  CHECK(max_abs(lhs - rhs, p.grid, std::nullopt).value <= 1e-12);
}

TEST_CASE("resolved form errors") {
  CHECK_THROWS_AS((void)resolved_beta_residuals(sphere(), Backend::Symbolic), MissingPencil);
  ProblemSpec p = flat_pencil_sqrt();
  p.grid = GridSpec({{1.0, 2.0, 9}, {1.0, 2.0, 9}}); // eigenvalues collide on the diagonal
  CHECK_THROWS_AS((void)resolved_beta_residuals(p, Backend::Symbolic), ZeroEigenvalueGap);
  const std::vector<EquationTag> want{EquationTag::Lam3};
  CHECK_THROWS_AS((void)system_residuals(sphere(), Backend::Symbolic, want), MissingPencil);
}

TEST_CASE("finite-difference backend agrees at second order") {
  ProblemSpec coarse = sphere();
  ProblemSpec fine = sphere();
  fine.grid = coarse.grid.refined();
  const double e1 =
      system_residuals(coarse, Backend::FiniteDifference).by_tag(EquationTag::LamX2).max_abs;
  const double e2 =
      system_residuals(fine, Backend::FiniteDifference).by_tag(EquationTag::LamX2).max_abs;
  const double h = coarse.grid.spacing(0);
  CHECK(e1 <= 5.0 * h * h); // symbolic max is 0 here
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("sphere frame with the matched pencil satisfies the full system") {
  // f^1 = 1/cos(u1)^2 solves f^1' / f^1 = 2 tan(u1), which is exactly what
  // lam3 needs against beta_12 = cos(u1); f^2 is a constant since
  // beta_21 = 0. Nontrivial data for every equation at once.
  ProblemSpec p = sphere();
  p.pencil = PencilSpec{{parse_expression("1/cos(u1)^2"), parse_expression("-2")}, {1, -1}};
  const auto rep = system_residuals(p, Backend::Symbolic);
  CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= 1e-12);
  CHECK(rep.by_tag(EquationTag::Lam3).max_abs <= 1e-12);
  CHECK(rep.by_tag(EquationTag::Lam00).max_abs == 0.0);
  const auto res = resolved_beta_residuals(p, Backend::Symbolic);
  CHECK(res.by_tag(EquationTag::Resolved).max_abs <= 1e-12);
}

TEST_CASE("hyperbolic frame with K = -1") {
  // H = (1, sinh u1): d(beta_12)/du^1 = sinh u1 and the tail contributes
  // K H_1 H_2 = -sinh u1, through complex sqrt(K) fields.
  ProblemSpec p;
  p.frame = make_frame({"1", "(exp(u1) - exp(-u1))/2"});
  p.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  SUBCASE("curvature shortcut") {
    p.nl2.curvature_shortcut = Complex(-1.0, 0.0);
    const auto rep = system_residuals(p, Backend::Symbolic);
    CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= 1e-12);
    CHECK(rep.by_tag(EquationTag::LamX0).max_abs <= 1e-13);
  }
  SUBCASE("explicit entry with eps = -1 and real fields") {
    NonlocalSet nl;
    nl.entries.push_back({-1, {Field::closed(parse_expression("1")),
                               Field::closed(parse_expression("(exp(u1) - exp(-u1))/2"))}});
    p.nl2 = nl;
    const auto rep = system_residuals(p, Backend::Symbolic);
    CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= 1e-12);
  }
}

TEST_CASE("N = 3 spherical coordinates of flat space") {
  // H = (1, u1, u1 sin(u2)): beta_12 = 1, beta_13 = sin(u2),
  // beta_23 = cos(u2); lamx1 holds non-vacuously, e.g.
  // d(beta_13)/du^2 = cos(u2) = beta_12 beta_23, and the (2,3) entry of
  // lamx2 cancels -sin(u2) + sin(u2).
  ProblemSpec p;
  p.frame = make_frame({"1", "u1", "u1*sin(u2)"});
  p.grid = GridSpec({{0.5, 1.5, 7}, {0.3, 1.2, 7}, {0.0, 2.0, 7}});
  for (Backend b : {Backend::Symbolic, Backend::FiniteDifference}) {
    const auto rep = system_residuals(p, b);
    const double tol = b == Backend::Symbolic ? 1e-12 : 5e-2;
    CHECK(rep.by_tag(EquationTag::LamX1).max_abs <= tol);
    CHECK(rep.by_tag(EquationTag::LamX2).max_abs <= tol);
  }
  // a generic frame violates lamx1, so the equation is not trivially zero
  const auto bad = system_residuals(generic3(), Backend::Symbolic);
  CHECK(bad.by_tag(EquationTag::LamX1).max_abs > 1e-2);
}

TEST_CASE("dimension-1 problems are rejected") {
  ProblemSpec p;
  p.frame.dim = 1;
  p.frame.eps2 = {1};
  p.frame.H = {Field::closed(parse_expression("1"))};
  p.grid = GridSpec({{0.0, 1.0, 9}});
  CHECK_THROWS_AS((void)system_residuals(p, Backend::Symbolic), ConfigError);
}
