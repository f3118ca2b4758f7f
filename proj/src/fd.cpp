#include "kdvcm/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace kdv {

std::vector<double> fd_weights(std::span<const double> nodes, double x0, int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 0 || n <= order) throw std::invalid_argument("fd_weights: too few nodes for order");
  // c[k][j]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(order + 1),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[static_cast<std::size_t>(order)];
}

std::vector<double> fd_weights_uniform(int first, int count, int order, double h) {
  std::vector<double> nodes(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = first + i;
  auto w = fd_weights(nodes, 0.0, order);
  const double scale = std::pow(h, -order);
  for (auto& v : w) v *= scale;
  return w;
}

}  // namespace kdv
