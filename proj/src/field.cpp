#include "hydrolax/field.hpp"

#include "hydrolax/kernels.hpp"

namespace hydrolax {

namespace {

[[noreturn]] void raise_sample_error(const kernels::SampleError& err, const GridSpec& g) {
  const std::string at = format_coords(g.node(err.node));
  if (err.status == kernels::EvalStatus::DivZero)
    throw PoleOnGrid("field evaluation hit a pole at node (" + at + ")");
  throw UnboundVariable("unbound variable while sampling at node (" + at + ")");
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid_spec() == b.grid_spec()))
    throw ConfigError("grid fields defined on different grids");
}

} // namespace

Field Field::closed(Expr e) {
  Field f;
  f.kind_ = Kind::ClosedForm;
  f.expr_ = std::move(e);
  return f;
}

Field Field::grid(GridSpec g, std::vector<Complex> values) {
  if (values.size() != g.size())
    throw ConfigError("sample array size does not match the grid");
  Field f;
  f.kind_ = Kind::GridSampled;
  f.grid_ = std::move(g);
  f.values_ = std::make_shared<const std::vector<Complex>>(std::move(values));
  return f;
}

const Expr& Field::expr() const {
  if (!is_closed()) throw ConfigError("expr() on a grid-sampled field");
  return expr_;
}

const std::vector<Complex>& Field::values() const {
  if (!is_grid()) throw ConfigError("values() on a closed-form field");
  return *values_;
}

const GridSpec& Field::grid_spec() const {
  if (!is_grid()) throw ConfigError("grid_spec() on a closed-form field");
  return grid_;
}

bool Field::depends_on_lambda() const {
  return is_closed() && expr_.depends_on_lambda();
}

Field Field::partial(int axis) const {
  if (is_closed()) return closed(expr_.diff(axis));
  std::vector<Complex> out(values_->size());
  kernels::fd_partial(*values_, grid_, axis, out);
  return grid(grid_, std::move(out));
}

Field Field::sampled(const GridSpec& g, std::optional<Complex> lambda) const {
  if (is_grid()) {
    if (!(grid_ == g)) throw ConfigError("grid field sampled on a different grid");
    return *this;
  }
  std::vector<Complex> out(g.size());
  if (auto err = kernels::sample(expr_, g, lambda, out)) raise_sample_error(*err, g);
  return grid(g, std::move(out));
}

Complex Field::eval(std::span<const Complex> coords, std::optional<Complex> lambda) const {
  if (!is_closed()) throw ConfigError("point evaluation of a grid-sampled field");
  return expr_.eval(coords, lambda);
}

Complex Field::at(std::size_t flat) const {
  if (!is_grid()) throw ConfigError("at() on a closed-form field");
  return (*values_)[flat];
}

namespace {

template <typename ExprFn, typename GridFn>
Field binary_op(const Field& a, const Field& b, ExprFn&& ef, GridFn&& gf) {
  if (a.is_closed() && b.is_closed()) return Field::closed(ef(a.expr(), b.expr()));
  if (a.is_grid() && b.is_grid()) {
    require_same_grid(a, b);
    std::vector<Complex> out(a.values().size());
    gf(a.values(), b.values(), out);
    return Field::grid(a.grid_spec(), std::move(out));
  }
  throw ConfigError("field algebra requires a single backend");
}

} // namespace

Field operator+(const Field& a, const Field& b) {
  return binary_op(
      a, b, [](const Expr& x, const Expr& y) { return x + y; },
      [](std::span<const Complex> x, std::span<const Complex> y, std::span<Complex> o) {
        kernels::add(x, y, o);
      });
}

Field operator-(const Field& a, const Field& b) {
  return binary_op(
      a, b, [](const Expr& x, const Expr& y) { return x - y; },
      [](std::span<const Complex> x, std::span<const Complex> y, std::span<Complex> o) {
        kernels::sub(x, y, o);
      });
}

Field operator*(const Field& a, const Field& b) {
  return binary_op(
      a, b, [](const Expr& x, const Expr& y) { return x * y; },
      [](std::span<const Complex> x, std::span<const Complex> y, std::span<Complex> o) {
        kernels::mul(x, y, o);
      });
}

Field operator/(const Field& a, const Field& b) {
  if (a.is_closed() && b.is_closed()) return Field::closed(a.expr() / b.expr());
  if (a.is_grid() && b.is_grid()) {
    require_same_grid(a, b);
    std::vector<Complex> out(a.values().size());
    if (auto err = kernels::div(a.values(), b.values(), out))
      raise_sample_error(*err, a.grid_spec());
    return Field::grid(a.grid_spec(), std::move(out));
  }
  throw ConfigError("field algebra requires a single backend");
}

Field operator-(const Field& a) {
  if (a.is_closed()) return Field::closed(-a.expr());
  std::vector<Complex> out(a.values().size());
  kernels::neg(a.values(), out);
  return Field::grid(a.grid_spec(), std::move(out));
}

Field operator*(Complex s, const Field& a) {
  if (a.is_closed()) return Field::closed(Expr::constant(s) * a.expr());
  std::vector<Complex> out(a.values().size());
  kernels::scale(s, a.values(), out);
  return Field::grid(a.grid_spec(), std::move(out));
}

Field sqrt(const Field& a) {
  if (a.is_closed()) return Field::closed(sqrt(a.expr()));
  std::vector<Complex> out(a.values().size());
  kernels::sqrt_ew(a.values(), out);
  return Field::grid(a.grid_spec(), std::move(out));
}

std::vector<Complex> sample_values(const Field& f, const GridSpec& g,
                                   std::optional<Complex> lambda) {
  return f.sampled(g, lambda).values();
}

FieldExtreme max_abs(const Field& f, const GridSpec& g, std::optional<Complex> lambda) {
  const Field s = f.sampled(g, lambda);
  const auto m = kernels::max_abs(s.values());
  return {m.value, m.index};
}

FieldExtreme min_abs(const Field& f, const GridSpec& g, std::optional<Complex> lambda) {
  const Field s = f.sampled(g, lambda);
  const auto m = kernels::min_abs(s.values());
  return {m.value, m.index};
}

} // namespace hydrolax
