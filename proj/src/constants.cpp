#include "kdvcm/constants.hpp"

#include <cmath>
#include <numbers>

namespace kdv {

namespace {

Constants compute() {
  using ld = long double;
  const ld pi = std::numbers::pi_v<ld>;
  const ld s21 = std::sqrt(ld{21});
  const ld quarter37 = std::pow(ld{3} / ld{7}, ld{0.25});

  Constants c{};
  c.length = static_cast<double>(2 * pi * std::sqrt(ld{7} / ld{3}));
  c.sqrt21 = static_cast<double>(s21);
  c.q = static_cast<double>(ld{20} / (ld{21} * s21));
  c.theta = static_cast<double>(quarter37 / std::sqrt(ld{14} * pi));
  c.c1 = static_cast<double>(ld{177147} / (ld{392392} * pi) *
                             std::sqrt(ld{1} / (2 * pi)) * quarter37);
  c.sqrt3 = static_cast<double>(std::sqrt(ld{3}));
  return c;
}

}  // namespace

double Constants::freq(int k) const {
  return static_cast<double>(static_cast<long double>(k) /
                             std::sqrt(static_cast<long double>(21)));
}

const Constants& constants() {
  static const Constants c = compute();
  return c;
}

}  // namespace kdv
