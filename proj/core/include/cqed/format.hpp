// format.hpp - Shortest round-trip number formatting for text outputs

#pragma once

#include <string>

namespace cqed {

// Shortest representation that parses back to the same double.
std::string format_double(double value);

} // namespace cqed
