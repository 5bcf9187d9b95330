#include "hydrolax/catalog.hpp"

namespace hydrolax {

namespace {

LameFrame frame2(const char* h1, const char* h2) {
  LameFrame f;
  f.dim = 2;
  f.eps2 = {1, 1};
  f.H = {Field::closed(parse_expression(h1)), Field::closed(parse_expression(h2))};
  return f;
}

PencilSpec pencil2(const char* f1, const char* f2) {
  return PencilSpec{{parse_expression(f1), parse_expression(f2)}, {1, 1}};
}

CatalogEntry make_cartesian() {
  CatalogEntry e;
  e.name = "cartesian";
  e.problem.frame = frame2("1", "1");
  e.problem.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
  e.expected_max = {{"lamx0", 1e-12}, {"lamx1", 1e-12}, {"lamx2", 1e-12}};
  e.notes = "flat orthonormal frame; every residual vanishes identically";
  return e;
}

CatalogEntry make_polar() {
  CatalogEntry e;
  e.name = "polar";
  e.problem.frame = frame2("1", "u1");
  e.problem.grid = GridSpec({{0.2, 1.2, 9}, {0.0, 2.0, 9}});
  e.expected_max = {{"lamx0", 1e-12}, {"lamx1", 1e-12}, {"lamx2", 1e-12}};
  e.notes = "flat metric in curvilinear coordinates; beta_12 = 1";
  return e;
}

CatalogEntry make_sphere() {
  CatalogEntry e;
  e.name = "sphere";
  e.problem.frame = frame2("1", "sin(u1)");
  e.problem.nl2.curvature_shortcut = Complex(1.0, 0.0);
  e.problem.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  e.expected_max = {{"lamx0", 1e-12}, {"lamx1", 1e-12}, {"lamx2", 1e-10}};
  e.notes = "unit-curvature frame with the K-shortcut tail";
  return e;
}

CatalogEntry make_flat_pencil_const() {
  CatalogEntry e;
  e.name = "flat_pencil_const";
  e.problem.frame = frame2("1", "1");
  e.problem.pencil = pencil2("2", "5");
  e.problem.grid = GridSpec({{0.0, 1.0, 9}, {0.0, 1.0, 9}});
  e.expected_max = {{"lamx0", 1e-12}, {"lamx1", 1e-12}, {"lamx2", 1e-12},
                    {"lam3", 1e-12},  {"lam00", 1e-12}, {"resolved", 1e-12}};
  e.notes = "constant eigenvalues; beta = 0 so all systems are trivial";
  return e;
}

CatalogEntry make_flat_pencil_sqrt() {
  CatalogEntry e;
  e.name = "flat_pencil_sqrt";
  e.problem.frame = frame2("1", "1");
  e.problem.pencil = pencil2("u1", "u2");
  // disjoint axis ranges keep the eigenvalue gap >= 0.6 at every node
  e.problem.grid = GridSpec({{1.0, 2.0, 9}, {2.6, 3.6, 9}});
  e.expected_max = {{"lamx0", 1e-10}, {"lamx1", 1e-10}, {"lamx2", 1e-10},
                    {"lam3", 1e-10},  {"lam00", 1e-10}, {"resolved", 1e-10}};
  e.notes = "coordinate eigenvalues; the reduced frame 1/sqrt(u^i) is flat";
  return e;
}

CatalogEntry make_sphere_perturbed() {
  CatalogEntry e;
  e.name = "sphere_perturbed";
  // H_2 = sin(u1) + 1e-3*u1 realizes beta_12 = cos(u1) + 1e-3 through the
  // defining relation, so the offset survives the file round trip and the
  // transport equations stay exactly satisfied.
  e.problem.frame = frame2("1", "sin(u1) + 0.001*u1");
  e.problem.nl2.curvature_shortcut = Complex(1.0, 0.0);
  e.problem.grid = GridSpec({{0.2, 1.4, 9}, {0.0, 2.0, 9}});
  e.expected_max = {{"lamx0", 1e-12}, {"lamx1", 1e-12}, {"lamx2", 1e-2}};
  e.expected_min = {{"lamx2", 1e-4}};
  e.notes = "sphere data with beta_12 offset by 1e-3; lamx2 = 1e-3*u1";
  return e;
}

} // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "cartesian",        "polar",
      "sphere",           "flat_pencil_const",
      "flat_pencil_sqrt", "sphere_perturbed",
  };
  return names;
}

CatalogEntry get_example(std::string_view name) {
  if (name == "cartesian") return make_cartesian();
  if (name == "polar") return make_polar();
  if (name == "sphere") return make_sphere();
  if (name == "flat_pencil_const") return make_flat_pencil_const();
  if (name == "flat_pencil_sqrt") return make_flat_pencil_sqrt();
  if (name == "sphere_perturbed") return make_sphere_perturbed();
  throw UnknownExample("no catalog example named '" + std::string(name) + "'");
}

} // namespace hydrolax
