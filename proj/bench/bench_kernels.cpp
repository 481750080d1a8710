// Compare the OpenMP dense kernels against the serial reference
// implementations kept for testing.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#include "spinweb/linalg.hpp"

namespace {

using spinweb::la::CMatrix;

CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = {unit(rng), unit(rng)};
  return m;
}

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

} // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 384;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::mt19937_64 rng(12345);
  const CMatrix a = random_matrix(n, rng);
  const CMatrix b = random_matrix(n, rng);
  const std::size_t k = 24;
  const CMatrix c = random_matrix(k, rng);
  const CMatrix d = random_matrix(k, rng);

  CMatrix parallel_out, serial_out;
  const double mul_par = time_ms([&] { parallel_out = spinweb::la::multiply(a, b); }, repeats);
  const double mul_ser =
      time_ms([&] { serial_out = spinweb::la::multiply_serial(a, b); }, repeats);
  const double mul_diff = spinweb::la::max_abs_diff(parallel_out, serial_out);

  CMatrix kron_par_out, kron_ser_out;
  const double kron_par = time_ms([&] { kron_par_out = spinweb::la::kron(c, d); }, repeats);
  const double kron_ser =
      time_ms([&] { kron_ser_out = spinweb::la::kron_serial(c, d); }, repeats);
  const double kron_diff = spinweb::la::max_abs_diff(kron_par_out, kron_ser_out);

  std::cout << "matmul " << n << "x" << n << ": parallel " << mul_par << " ms, serial "
            << mul_ser << " ms, speedup " << mul_ser / mul_par << ", max diff "
            << mul_diff << "\n";
  std::cout << "kron " << k << "x" << k << ": parallel " << kron_par << " ms, serial "
            << kron_ser << " ms, speedup " << kron_ser / kron_par << ", max diff "
            << kron_diff << "\n";
  return (mul_diff < 1e-12 && kron_diff < 1e-12) ? 0 : 1;
}
