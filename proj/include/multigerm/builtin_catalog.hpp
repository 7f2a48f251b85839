#pragma once

#include "multigerm/catalog.hpp"
#include "multigerm/catalog_data.hpp"

namespace multigerm {

// The catalog shipped with the build, parsed once.
inline const Catalog& builtin_catalog() {
  static const Catalog catalog = parse_catalog(builtin_catalog_text());
  return catalog;
}

}  // namespace multigerm
