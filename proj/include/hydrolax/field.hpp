#ifndef HYDROLAX_FIELD_HPP
#define HYDROLAX_FIELD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "hydrolax/grid.hpp"

namespace hydrolax {

/// A scalar field over the coordinates, in one of two backends:
///
///  * ClosedForm  — an Expr; partial() is exact symbolic differentiation.
///  * GridSampled — complex samples on a GridSpec at a fixed lambda;
///                  partial() is the second-order stencil (central in the
///                  interior, one-sided at the boundary).
///
/// Algebra is defined within one backend; residual evaluation samples
/// closed forms onto the grid first when running the finite-difference
/// backend. Fields are immutable and cheap to copy.
class Field {
public:
  enum class Kind { ClosedForm, GridSampled };

  /// Default field is the closed-form constant 0.
  Field() = default;

  static Field closed(Expr e);
  static Field constant(Complex c) { return closed(Expr::constant(c)); }
  static Field grid(GridSpec g, std::vector<Complex> values);

  Kind kind() const { return kind_; }
  bool is_closed() const { return kind_ == Kind::ClosedForm; }
  bool is_grid() const { return kind_ == Kind::GridSampled; }

  const Expr& expr() const;                  // ClosedForm only
  const std::vector<Complex>& values() const; // GridSampled only
  const GridSpec& grid_spec() const;          // GridSampled only

  bool depends_on_lambda() const;

  /// d/du^axis in this field's backend.
  Field partial(int axis) const;

  /// Closed form sampled at all grid nodes (lambda substituted when given).
  /// Grid fields pass through unchanged when the grids match.
  /// Throws PoleOnGrid when evaluation hits a pole at a node.
  Field sampled(const GridSpec& g, std::optional<Complex> lambda) const;

  /// Point evaluation of a closed form.
  Complex eval(std::span<const Complex> coords,
               std::optional<Complex> lambda = std::nullopt) const;

  /// Value at a flat node index of a grid field.
  Complex at(std::size_t flat) const;

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);
  friend Field operator*(const Field& a, const Field& b);
  friend Field operator/(const Field& a, const Field& b);
  friend Field operator-(const Field& a);
  friend Field operator*(Complex s, const Field& a);
  friend Field sqrt(const Field& a);

private:
  Kind kind_ = Kind::ClosedForm;
  Expr expr_;
  std::shared_ptr<const std::vector<Complex>> values_;
  GridSpec grid_;
};

struct FieldExtreme {
  double value = 0.0;
  std::size_t node = 0;
};

/// Samples of a field on a grid (identity for matching grid fields).
std::vector<Complex> sample_values(const Field& f, const GridSpec& g,
                                   std::optional<Complex> lambda);

/// Max |f| over grid nodes, with the arg-max flat node (lowest on ties).
FieldExtreme max_abs(const Field& f, const GridSpec& g, std::optional<Complex> lambda);

/// Min |f| over grid nodes.
FieldExtreme min_abs(const Field& f, const GridSpec& g, std::optional<Complex> lambda);

} // namespace hydrolax

#endif
