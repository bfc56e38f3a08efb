#pragma once

#include <optional>
#include <string>

#include "bazykin/grid.hpp"

namespace bazykin {

/// Shortest round-trip decimal form of x, locale independent, so identical
/// runs emit byte-identical files.
std::string format_double(double x);

std::string format_optional(const std::optional<double>& x);

/// CSV of a field: node index, coordinate(s), value. Header included.
std::string field_csv(const ScalarField& field);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bazykin
