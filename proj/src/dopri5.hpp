#pragma once

// Dormand-Prince 5(4) single step on a fixed-size state.

#include <array>
#include <cstddef>

namespace indefsl::detail {

template <class T, std::size_t N>
struct Dopri5Result {
  std::array<T, N> y;    // fifth-order solution
  std::array<T, N> err;  // difference to the embedded fourth-order solution
};

template <class T, std::size_t N, class Rhs>
Dopri5Result<T, N> dopri5_step(const Rhs& rhs, double x, double h, const std::array<T, N>& y0) {
  using S = std::array<T, N>;
  auto axpy = [&](std::initializer_list<std::pair<double, const S*>> terms) {
    S r = y0;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) r[i] += (h * c) * (*k)[i];
    return r;
  };
  const S k1 = rhs(x, y0);
  const S k2 = rhs(x + h / 5.0, axpy({{1.0 / 5.0, &k1}}));
  const S k3 = rhs(x + 3.0 * h / 10.0, axpy({{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
  const S k4 = rhs(x + 4.0 * h / 5.0,
                   axpy({{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}));
  const S k5 = rhs(x + 8.0 * h / 9.0, axpy({{19372.0 / 6561.0, &k1},
                                            {-25360.0 / 2187.0, &k2},
                                            {64448.0 / 6561.0, &k3},
                                            {-212.0 / 729.0, &k4}}));
  const S k6 = rhs(x + h, axpy({{9017.0 / 3168.0, &k1},
                                {-355.0 / 33.0, &k2},
                                {46732.0 / 5247.0, &k3},
                                {49.0 / 176.0, &k4},
                                {-5103.0 / 18656.0, &k5}}));
  Dopri5Result<T, N> out;
  out.y = axpy({{35.0 / 384.0, &k1},
                {500.0 / 1113.0, &k3},
                {125.0 / 192.0, &k4},
                {-2187.0 / 6784.0, &k5},
                {11.0 / 84.0, &k6}});
  const S k7 = rhs(x + h, out.y);
  for (std::size_t i = 0; i < N; ++i) {
    out.err[i] = h * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] + 71.0 / 1920.0 * k4[i] -
                      17253.0 / 339200.0 * k5[i] + 22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
  }
  return out;
}

}  // namespace indefsl::detail
