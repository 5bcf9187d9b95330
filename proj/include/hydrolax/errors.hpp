#ifndef HYDROLAX_ERRORS_HPP
#define HYDROLAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hydrolax {

/// Base class for all toolkit errors. CLI commands map these to exit code 2.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A free variable was not assigned a value during evaluation.
class UnboundVariable : public Error {
public:
  using Error::Error;
};

/// Exact division by zero during evaluation (a pole of the field).
class DivisionByZero : public Error {
public:
  using Error::Error;
};

/// Evaluation of a field hit a pole at a grid node.
class PoleOnGrid : public Error {
public:
  using Error::Error;
};

/// A pencil eigenvalue function vanishes where it must not.
class ZeroEigenvalue : public Error {
public:
  using Error::Error;
};

/// Two eigenvalue functions collide at a node (division by f^j - f^i).
class ZeroEigenvalueGap : public Error {
public:
  using Error::Error;
};

/// An operation that needs pencil data was invoked without one.
class MissingPencil : public Error {
public:
  using Error::Error;
};

/// A constant-curvature connection was requested without its K constant.
class MissingCurvature : public Error {
public:
  using Error::Error;
};

/// lambda hit a pole -f^i(u^i) of a spectral connection.
class SpectralPole : public Error {
public:
  using Error::Error;
};

/// The second metric of a pencil degenerates at the probed point.
class DegenerateSecondMetric : public Error {
public:
  using Error::Error;
};

/// A lambda-combination of metrics degenerates on the grid.
class SingularCombination : public Error {
public:
  using Error::Error;
};

/// Catalog lookup with a name that is not registered.
class UnknownExample : public Error {
public:
  using Error::Error;
};

/// Problem-file syntax or structural error.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Bad command-line or problem configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace hydrolax

#endif
