#pragma once

#include <string>
#include <vector>

#include "fekit/fe_space.hpp"

namespace fekit {

struct VtkField {
  std::string name;
  int field = 0;
  const FeFunction* function = nullptr;
};

/// Legacy ASCII unstructured-grid writer. Points are duplicated per cell so
/// discontinuous fields keep their jumps; point data holds the field values
/// sampled at the cell corner nodes (higher-order DOFs are not written), and
/// cell data carries the cell set ids.
void write_vtk(FeSpace& space, const std::vector<VtkField>& fields, const std::string& path);

/// Geometry-only variant.
void write_vtk(const Triangulation& triangulation, const std::string& path);

}  // namespace fekit
