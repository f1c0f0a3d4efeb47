#pragma once

#include "symvp/func.hpp"

#include <string>
#include <vector>

namespace symvp {

struct CatalogEntry {
  std::string name;
  std::string description;
  bool anyDimension = true;  ///< false: fixedDimension applies
  int fixedDimension = 0;
  bool smooth = false;
};

/// Built-in objectives addressable by name from configs and tests.
const std::vector<CatalogEntry>& objectiveCatalog();

/// Instantiates a catalog objective at the given dimension.
ScalarFunction catalogObjective(const std::string& name, int dim);

}  // namespace symvp
