#pragma once
// The acceptance suite: thirteen property checks with pinned tolerances.
// Each returns a report whose verdict is the pass/fail of that criterion.

#include <string>
#include <vector>

#include "hardy/compop.hpp"

namespace hardy {

constexpr int kCriterionCount = 13;

std::string criterion_title(int id);
// Throws std::out_of_range for ids outside 1..kCriterionCount. Exceptions
// raised by the numerics are caught and recorded as a failed verdict.
DiagnosticsReport run_criterion(int id);

}  // namespace hardy
