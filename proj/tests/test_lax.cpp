#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hydrolax/lax.hpp"

using namespace hydrolax;

namespace {

LameFrame make_frame(std::vector<std::string> h, std::vector<int> eps = {}) {
  LameFrame f;
  f.dim = static_cast<int>(h.size());
  f.eps2 = eps.empty() ? std::vector<int>(h.size(), 1) : std::move(eps);
  for (const auto& s : h) f.H.push_back(Field::closed(parse_expression(s)));
  return f;
}

ProblemSpec sphere(const std::string& h2 = "sin(u1)") {
  ProblemSpec p;
  p.frame = make_frame({"1", h2});
  p.nl2.curvature_shortcut = Complex(1.0, 0.0);
  p.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  return p;
}

ProblemSpec flat_pencil_sqrt() {
  ProblemSpec p;
  p.frame = make_frame({"1", "1"});
  p.pencil = PencilSpec{{parse_expression("u1"), parse_expression("u2")}, {1, 1}};
  p.grid = GridSpec({{1.0, 2.0, 9}, {2.6, 3.6, 9}});
  return p;
}

ProblemSpec polar() {
  ProblemSpec p;
  p.frame = make_frame({"1", "u1"});
  p.grid = GridSpec({{0.2, 1.2, 9}, {0.0, 2.0, 9}});
  return p;
}

Complex entry_at(const LaxConnection& c, int k, int r, int col,
                 std::initializer_list<double> u, std::optional<Complex> lambda) {
  std::vector<Complex> coords;
  for (double x : u) coords.push_back(Complex(x, 0.0));
  return c.matrix(k).at(r, col).eval(coords, lambda);
}

} // namespace

TEST_CASE("DARBOUX with zero rotation coefficients is the zero connection") {
  ProblemSpec p;
  p.frame = make_frame({"1", "1"});
  p.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
  const auto c = build_connection(LaxVariant::Darboux, p);
  CHECK(c.dim == 2);
  CHECK(!c.lambda_dependent);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r)
      for (int col = 0; col < 2; ++col) CHECK(c.matrix(k).at(r, col).expr().is_zero());
}

TEST_CASE("CC sphere connection entries") {
  const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
  REQUIRE(c.dim == 3);
  const double u1 = 0.8;
  // beta coupling sits in column k of the off-diagonal phi rows:
  // (A_2)_{1,2} = beta_12 = cos(u1); (A_1)_{2,1} = beta_21 = 0.
  CHECK(std::abs(entry_at(c, 1, 0, 1, {u1, 0.5}, {}) - Complex(std::cos(u1), 0.0)) < 1e-15);
  CHECK(std::abs(entry_at(c, 0, 1, 0, {u1, 0.5}, {})) == 0.0);
  // diagonal rows: (A_2)_{2,1} = -beta_12, (A_1)_{1,1} = 0
  CHECK(std::abs(entry_at(c, 1, 1, 0, {u1, 0.5}, {}) + Complex(std::cos(u1), 0.0)) < 1e-15);
  CHECK(std::abs(entry_at(c, 0, 0, 0, {u1, 0.5}, {})) == 0.0);
  // psi couplings: (A_1)_{1,3} = H_1 = 1, (A_1)_{3,1} = -1
  CHECK(std::abs(entry_at(c, 0, 0, 2, {u1, 0.5}, {}) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(entry_at(c, 0, 2, 0, {u1, 0.5}, {}) + Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(entry_at(c, 1, 1, 2, {u1, 0.5}, {}) - Complex(std::sin(u1), 0.0)) < 1e-15);
  // sparsity: off-diagonal phi rows have a single nonzero entry, column k
  CHECK(c.matrix(1).at(0, 0).expr().is_zero());
  CHECK(c.matrix(1).at(0, 2).expr().is_zero());
}

TEST_CASE("zero curvature on exact data") {
  const std::vector<Complex> lambdas{Complex(0.0, 0.0)};
  SUBCASE("CC on the sphere") {
    const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
    const auto rep = zero_curvature_residual(c, lambdas, c.grid);
    CHECK(rep.max_frobenius() <= 1e-10);
  }
  SUBCASE("BASE on the sphere matches CC") {
    const auto c = build_connection(LaxVariant::Base, sphere(), {});
    CHECK(c.dim == 3);
    const auto rep = zero_curvature_residual(c, lambdas, c.grid);
    CHECK(rep.max_frobenius() <= 1e-10);
  }
  SUBCASE("FULL on the flat pencil across the sample set") {
    const auto p = flat_pencil_sqrt();
    const auto c = build_connection(LaxVariant::Full, p, {});
    const auto samples = default_lambda_samples(p);
    CHECK(samples.size() == 20);
    const auto rep = zero_curvature_residual(c, samples, c.grid);
    CHECK(rep.max_frobenius() <= 1e-10);
    CHECK(rep.entries.size() == 20);
  }
  SUBCASE("DARBOUX on the polar frame") {
    const auto c = build_connection(LaxVariant::Darboux, polar(), {});
    const auto rep = zero_curvature_residual(c, lambdas, c.grid);
    CHECK(rep.max_frobenius() <= 1e-12);
  }
}

TEST_CASE("negative curvature: both nonlocal encodings give the same BASE connection") {
  // eps = -1 with real fields and eps = +1 with sqrt(-1)-scaled fields
  // describe the same tail; the coupling rows must agree entrywise and
  // both must be flat.
  ProblemSpec by_sign;
  by_sign.frame = make_frame({"1", "(exp(u1) - exp(-u1))/2"});
  by_sign.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  NonlocalSet nl;
  nl.entries.push_back({-1, {Field::closed(parse_expression("1")),
                             Field::closed(parse_expression("(exp(u1) - exp(-u1))/2"))}});
  by_sign.nl2 = nl;

  ProblemSpec by_shortcut = by_sign;
  by_shortcut.nl2 = NonlocalSet{};
  by_shortcut.nl2.curvature_shortcut = Complex(-1.0, 0.0);

  const auto a = build_connection(LaxVariant::Base, by_sign, {});
  const auto b = build_connection(LaxVariant::Base, by_shortcut, {});
  REQUIRE(a.dim == 3);
  REQUIRE(b.dim == 3);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) {
        const Complex va = entry_at(a, k, r, col, {0.8, 0.5}, {});
        const Complex vb = entry_at(b, k, r, col, {0.8, 0.5}, {});
        CHECK(std::abs(va - vb) <= 1e-15);
      }
  const std::vector<Complex> lambdas{Complex(0.0, 0.0)};
  CHECK(zero_curvature_residual(a, lambdas, a.grid).max_frobenius() <= 1e-10);
  CHECK(zero_curvature_residual(b, lambdas, b.grid).max_frobenius() <= 1e-10);
}

TEST_CASE("perturbed sphere breaks zero curvature at the expected scale") {
  const auto c = build_connection(LaxVariant::ConstantCurvature, sphere("sin(u1) + 0.001*u1"), {});
  const std::vector<Complex> lambdas{Complex(0.0, 0.0)};
  const auto rep = zero_curvature_residual(c, lambdas, c.grid);
  // F_12 = [[0, delta*u1, 0], ...]: max ~ sqrt(2)*1e-3*1.4
  CHECK(rep.max_frobenius() >= 1e-6);
  CHECK(rep.max_frobenius() <= 1e-2);
  CHECK(rep.max_frobenius() == doctest::Approx(std::sqrt(2.0) * 1.4e-3).epsilon(0.05));
}

TEST_CASE("FULL without nonlocal sets equals LOCAL") {
  const auto p = flat_pencil_sqrt();
  const auto full = build_connection(LaxVariant::Full, p, {});
  const auto local = build_connection(LaxVariant::Local, p, {});
  REQUIRE(full.dim == local.dim);
  const Complex lam(0.7, 0.3);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r)
      for (int col = 0; col < 2; ++col) {
        const Complex a = entry_at(full, k, r, col, {1.3, 2.9}, lam);
        const Complex b = entry_at(local, k, r, col, {1.3, 2.9}, lam);
        CHECK(std::abs(a - b) <= 1e-15);
      }
}

TEST_CASE("CC_PENCIL at K1 = K2 = 0 equals LOCAL plus a zero row/column") {
  const auto p = flat_pencil_sqrt();
  LaxExtras extras;
  extras.k1 = Complex(0.0, 0.0);
  extras.k2 = Complex(0.0, 0.0);
  const auto cc = build_connection(LaxVariant::ConstantCurvaturePencil, p, extras);
  const auto local = build_connection(LaxVariant::Local, p, {});
  REQUIRE(cc.dim == 3);
  const Complex lam(1.2, 0.0);
  for (int k = 0; k < 2; ++k) {
    for (int r = 0; r < 2; ++r)
      for (int col = 0; col < 2; ++col) {
        const Complex a = entry_at(cc, k, r, col, {1.4, 3.1}, lam);
        const Complex b = entry_at(local, k, r, col, {1.4, 3.1}, lam);
        CHECK(std::abs(a - b) <= 1e-15);
      }
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(entry_at(cc, k, i, 2, {1.4, 3.1}, lam)) == 0.0);
      CHECK(std::abs(entry_at(cc, k, 2, i, {1.4, 3.1}, lam)) == 0.0);
    }
  }
}

TEST_CASE("LOCAL converges to DARBOUX as lambda grows") {
  ProblemSpec p = polar();
  p.pencil = PencilSpec{{parse_expression("u1"), parse_expression("u2 + 3")}, {1, 1}};
  const auto local = build_connection(LaxVariant::Local, p, {});
  const auto darboux = build_connection(LaxVariant::Darboux, p, {});
  const Complex lam(1e6, 0.0);
  double dev = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r)
      for (int col = 0; col < 2; ++col) {
        const Complex a = entry_at(local, k, r, col, {0.9, 1.1}, lam);
        const Complex b = entry_at(darboux, k, r, col, {0.9, 1.1}, {});
        dev = std::max(dev, std::abs(a - b));
      }
  CHECK(dev <= 1e-4);
}

TEST_CASE("curvature antisymmetry holds bitwise") {
  // F_mk evaluated from the defining formula with swapped arguments is
  // the exact negation of F_km.
  const auto p = sphere("sin(u1) + 0.001*u1"); // non-flat so F != 0
  const auto c = build_connection(LaxVariant::ConstantCurvature, p, {});
  const GridSpec& g = c.grid;
  auto curvature_entry = [&](int k, int m, int r, int col) {
    Field acc = c.matrix(m).at(r, col).partial(k) - c.matrix(k).at(r, col).partial(m);
    for (int s = 0; s < c.dim; ++s)
      acc = acc + (c.matrix(m).at(r, s) * c.matrix(k).at(s, col) -
                   c.matrix(k).at(r, s) * c.matrix(m).at(s, col));
    return sample_values(acc, g, std::nullopt);
  };
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 3; ++col) {
      const auto fkm = curvature_entry(0, 1, r, col);
      const auto fmk = curvature_entry(1, 0, r, col);
      for (size_t i = 0; i < fkm.size(); ++i) CHECK(fkm[i] == -fmk[i]);
    }
}

TEST_CASE("spectral pole guards") {
  const auto p = flat_pencil_sqrt(); // f ranges over [1,2] x [2.6,3.6]
  const auto c = build_connection(LaxVariant::Full, p, {});
  const std::vector<Complex> bad{Complex(-1.5, 0.0)}; // -f^1 hits -1.5 on the grid
  CHECK_THROWS_AS((void)zero_curvature_residual(c, bad, c.grid), SpectralPole);
  CHECK_THROWS_AS((void)default_lambda_samples(p, -4.0, 0.0, 16, false), SpectralPole);
  // transport crossing lambda = -f^1 along the path
  const std::vector<std::vector<double>> path{{1.2, 2.8}, {1.8, 3.2}};
  const std::vector<Complex> phi0{Complex(1.0, 0.0), Complex(0.0, 0.0)};
  CHECK_THROWS_AS((void)transport(c, path, Complex(-1.5, 0.0), phi0, 8), SpectralPole);
}

TEST_CASE("connection dimensions follow the nonlocal counts") {
  // two bracket-2 tails and one bracket-1 tail: BASE is N+2, FULL is N+3
  ProblemSpec p = flat_pencil_sqrt();
  NonlocalSet nl2;
  nl2.entries.push_back({1, {Field::closed(parse_expression("1")),
                             Field::closed(parse_expression("u1"))}});
  nl2.entries.push_back({-1, {Field::closed(parse_expression("u2")),
                              Field::closed(parse_expression("2"))}});
  p.nl2 = nl2;
  NonlocalSet nl1;
  nl1.entries.push_back({1, {Field::closed(parse_expression("u1 + u2")),
                             Field::closed(parse_expression("3"))}});
  p.nl1 = nl1;

  const auto base = build_connection(LaxVariant::Base, p, {});
  CHECK(base.dim == 4);
  const auto full = build_connection(LaxVariant::Full, p, {});
  CHECK(full.dim == 5);

  // coupling layout: psi columns first, then chi; rows mirror them
  const Complex lam(3.0, 0.0);
  const Complex v_psi0 = entry_at(full, 0, 0, 2, {1.5, 3.0}, lam);
  const Complex v_chi = entry_at(full, 0, 0, 4, {1.5, 3.0}, lam);
  // sqrt(eps lambda)/sqrt(lambda+f^1) * H^1_{2,1} at the probe point
  const Complex want_psi0 = principal_sqrt(lam) / principal_sqrt(lam + Complex(1.5, 0.0));
  CHECK(std::abs(v_psi0 - want_psi0) < 1e-14);
  const Complex want_chi =
      Complex(1.0, 0.0) / principal_sqrt(lam + Complex(1.5, 0.0)) * Complex(4.5, 0.0);
  CHECK(std::abs(v_chi - want_chi) < 1e-14);
  // mirrored rows carry the negated couplings
  CHECK(std::abs(entry_at(full, 0, 2, 0, {1.5, 3.0}, lam) + want_psi0) < 1e-14);
  CHECK(std::abs(entry_at(full, 0, 4, 0, {1.5, 3.0}, lam) + want_chi) < 1e-14);
  // off-diagonal phi rows stay sparse regardless of the tails
  CHECK(full.matrix(0).at(1, 2).expr().is_zero());
  CHECK(full.matrix(0).at(1, 4).expr().is_zero());
}

TEST_CASE("finite-difference curvature backend") {
  const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
  const std::vector<Complex> lambdas{Complex(0.0, 0.0)};
  const auto rep = zero_curvature_residual(c, lambdas, c.grid, Backend::FiniteDifference);
  const double h = c.grid.spacing(0);
  CHECK(rep.max_frobenius() <= 5.0 * h * h);
  CHECK(rep.max_frobenius() > 0.0);
}

TEST_CASE("transport on the trivial connection returns the input") {
  ProblemSpec p;
  p.frame = make_frame({"1", "1"});
  p.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
  const auto c = build_connection(LaxVariant::Darboux, p, {});
  const std::vector<std::vector<double>> path{{0.1, 0.1}, {0.9, 0.4}, {0.3, 0.8}};
  const std::vector<Complex> phi0{Complex(1.0, 2.0), Complex(-3.0, 0.5)};
  const auto out = transport(c, path, Complex(0.0, 0.0), phi0, 16);
  CHECK(out[0] == phi0[0]);
  CHECK(out[1] == phi0[1]);
}

TEST_CASE("transport against the rotation oracle") {
  // Polar frame, DARBOUX: A_2 = [[0, 1], [-1, 0]] is constant, so
  // transport along u2 by t is rotation by angle t.
  const auto c = build_connection(LaxVariant::Darboux, polar(), {});
  const double t = 1.25;
  const std::vector<std::vector<double>> path{{0.7, 0.0}, {0.7, t}};
  const std::vector<Complex> phi0{Complex(1.0, 0.0), Complex(0.0, 0.0)};

  auto defect_at = [&](int steps) {
    const auto out = transport(c, path, Complex(0.0, 0.0), phi0, steps);
    const Complex want0(std::cos(t), 0.0);
    const Complex want1(-std::sin(t), 0.0);
    return std::max(std::abs(out[0] - want0), std::abs(out[1] - want1));
  };
  const double d1 = defect_at(32);
  const double d2 = defect_at(64);
  CHECK(d1 < 1e-6);
  const double ratio = d1 / d2;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("monodromy") {
  SUBCASE("trivial connection has zero defect") {
    ProblemSpec p;
    p.frame = make_frame({"1", "1"});
    p.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
    const auto c = build_connection(LaxVariant::Darboux, p, {});
    CHECK(monodromy_defect(c, 0, 0.2, 0.8, 1, 0.2, 0.8, Complex(0.0, 0.0), 8) == 0.0);
  }
  SUBCASE("sphere CC loop closes to RK4 accuracy") {
    const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
    const double d = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 256);
    CHECK(d <= 1e-8);
  }
  SUBCASE("doubling the steps shows fourth order") {
    const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
    const double d1 = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 64);
    const double d2 = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 128);
    const double ratio = d1 / d2;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
  }
  SUBCASE("perturbed sphere leaves a visible defect") {
    const auto c =
        build_connection(LaxVariant::ConstantCurvature, sphere("sin(u1) + 0.001*u1"), {});
    const double d = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 256);
    CHECK(d >= 1e-5);
  }
  SUBCASE("orientation reversal agrees within tolerance") {
    const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
    const double fwd = monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 128);
    const double rev = monodromy_defect(c, 1, 0.5, 1.5, 0, 0.3, 1.2, Complex(0.0, 0.0), 128);
    CHECK(std::abs(fwd - rev) <= 2.0 * std::max(fwd, rev));
  }
  SUBCASE("zero steps are rejected") {
    const auto c = build_connection(LaxVariant::ConstantCurvature, sphere(), {});
    CHECK_THROWS_AS((void)monodromy_defect(c, 0, 0.3, 1.2, 1, 0.5, 1.5, Complex(0.0, 0.0), 0),
                    ConfigError);
  }
}

TEST_CASE("FULL with nonzero beta and an active psi coupling") {
  // Sphere frame with the matched pencil f = (1/cos(u1)^2, -2): the
  // spectral family carries both the sqrt(eps(lambda+f)) beta weights and
  // the sqrt(eps_alpha * lambda) tail coupling, and must still be flat.
  ProblemSpec p = sphere();
  p.pencil = PencilSpec{{parse_expression("1/cos(u1)^2"), parse_expression("-2")}, {1, -1}};
  // poles live in [-1/cos(0.2)^2 - 0.1, 2 + 0.1]; sample above that band
  const auto samples = default_lambda_samples(p, 2.5, 12.0, 16);
  REQUIRE(samples.size() == 20);
  const auto c = build_connection(LaxVariant::Full, p, {});
  CHECK(c.dim == 3); // phi_1, phi_2, psi
  const auto rep = zero_curvature_residual(c, samples, c.grid);
  CHECK(rep.max_frobenius() <= 1e-8);
}

TEST_CASE("equivalence both ways across the sample set") {
  // forward: satisfying data keeps every lambda sample flat
  const auto p = flat_pencil_sqrt();
  const auto samples = default_lambda_samples(p);
  REQUIRE(samples.size() >= 16);
  const auto c = build_connection(LaxVariant::Full, p, {});
  CHECK(zero_curvature_residual(c, samples, c.grid).max_frobenius() <= 1e-8);

  // converse: a perturbation visible in the nonlinear residuals shows up
  // in the curvature of the spectral connection for some sample
  ProblemSpec q = p;
  q.frame.H[1] = Field::closed(parse_expression("1 + 0.001*u1"));
  const auto sys = system_residuals(q, Backend::Symbolic);
  CHECK(sys.max_abs() >= 1e-4);
  const auto cq = build_connection(LaxVariant::Full, q, {});
  const auto rep = zero_curvature_residual(cq, samples, cq.grid);
  CHECK(rep.max_frobenius() >= 1e-6);
}

TEST_CASE("variant names round trip") {
  for (LaxVariant v : {LaxVariant::Base, LaxVariant::Full, LaxVariant::Local,
                       LaxVariant::Darboux, LaxVariant::ConstantCurvature,
                       LaxVariant::ConstantCurvaturePencil})
    CHECK(variant_from_name(variant_name(v)) == v);
  CHECK_THROWS_AS((void)variant_from_name("NOPE"), ConfigError);
}

TEST_CASE("missing data errors") {
  CHECK_THROWS_AS((void)build_connection(LaxVariant::Full, polar(), {}), MissingPencil);
  CHECK_THROWS_AS((void)build_connection(LaxVariant::ConstantCurvature, polar(), {}),
                  MissingCurvature);
}
