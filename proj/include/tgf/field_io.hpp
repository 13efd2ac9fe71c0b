#pragma once
// Field (de)serialization: a small JSON header (grid dims, spacings) followed
// by the raw binary payload, row-major, u-block then v-block, little-endian
// float64. Also CSV export of cell-centered samples for plotting.

#include <string>

#include "tgf/field.hpp"

namespace tgf {

void save_field(const VelocityField& f, const std::string& path);
VelocityField load_field(const std::string& path);

// cell-centered x,y,u,v rows
void write_field_csv(const VelocityField& f, const std::string& path);

}  // namespace tgf
