#pragma once

// Dense arithmetic kernels with a portable scalar reference and SIMD variants.
// The active backend is chosen once at startup from the CPU features (AVX2 +
// FMA on x86-64) and can be forced with DEGENWAVE_SIMD=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace degenwave::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);

bool backend_supported(Backend b);

Backend active_backend();

// Throws std::invalid_argument if the backend is not supported on this CPU.
void set_backend(Backend b);

double dot(std::span<const double> x, std::span<const double> y);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

// y = A x, A row-major rows x cols.
void gemv(const double* a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

// y += A x
void gemv_acc(const double* a, std::size_t rows, std::size_t cols,
              std::span<const double> x, std::span<double> y);

// C = A B; A is m x k, B is k x n, all row-major. C must not alias A or B.
void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t k, std::size_t n);

// Direct access to one implementation, bypassing dispatch (equivalence tests).
struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*,
               bool accumulate);
  void (*gemm)(const double*, const double*, double*, std::size_t, std::size_t,
               std::size_t);
};

const Table& table(Backend b);

}  // namespace degenwave::kernels
