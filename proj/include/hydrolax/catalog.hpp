#ifndef HYDROLAX_CATALOG_HPP
#define HYDROLAX_CATALOG_HPP

#include <map>
#include <string>
#include <string_view>

#include "hydrolax/residuals.hpp"

namespace hydrolax {

/// A built-in example with known analytic behavior: the problem data plus
/// the residual bounds it is guaranteed to satisfy (upper bounds for the
/// symbolic backend; the perturbed entry also carries lower bounds).
struct CatalogEntry {
  std::string name;
  ProblemSpec problem;
  std::map<std::string, double> expected_max;
  std::map<std::string, double> expected_min;
  std::string notes;
};

/// Registered names, in a fixed order.
const std::vector<std::string>& catalog_names();

/// Throws UnknownExample for names outside the registry.
CatalogEntry get_example(std::string_view name);

} // namespace hydrolax

#endif
