#pragma once

#include <string>
#include <string_view>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

// {"L": .., "n": .., "re": [..], "im": [..]} with k ascending from -n to n.
// Doubles are written in shortest round-trip form, so the round trip is exact.
std::string field_to_json(const Field& u);
// n_phys = 0 selects the default padded size.
Field field_from_json(std::string_view text, int n_phys = 0);

void write_field_json(const std::string& path, const Field& u);
Field read_field_json(const std::string& path, int n_phys = 0);

}  // namespace nlslab
