#pragma once

#include <span>
#include <vector>

namespace kdv {

/// Finite-difference weights for the derivative of the given order at x0
/// from values at `nodes` (Fornberg's recursion).
std::vector<double> fd_weights(std::span<const double> nodes, double x0, int order);

/// Weights on the uniform offsets first..first+count-1 (in units of h, already
/// divided by h^order) for the derivative of the given order at offset 0.
std::vector<double> fd_weights_uniform(int first, int count, int order, double h);

}  // namespace kdv
