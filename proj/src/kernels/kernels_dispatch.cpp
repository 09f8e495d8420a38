#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace degenwave::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(DEGENWAVE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("DEGENWAVE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{&table(initial_backend())};
  return t;
}

}  // namespace

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
  return b == Backend::scalar || cpu_has_avx2();
}

const Table& table(Backend b) {
#if defined(DEGENWAVE_HAVE_AVX2)
  if (b == Backend::avx2) return detail::avx2_table;
#endif
  (void)b;
  return detail::scalar_table;
}

Backend active_backend() {
#if defined(DEGENWAVE_HAVE_AVX2)
  if (current().load() == &detail::avx2_table) return Backend::avx2;
#endif
  return Backend::scalar;
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(backend_name(b)));
  current().store(&table(b));
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  return current().load()->dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  current().load()->axpy(a, x.data(), y.data(), x.size());
}

void gemv(const double* a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  if (x.size() != cols || y.size() != rows)
    throw std::invalid_argument("gemv: size mismatch");
  current().load()->gemv(a, rows, cols, x.data(), y.data(), false);
}

void gemv_acc(const double* a, std::size_t rows, std::size_t cols,
              std::span<const double> x, std::span<double> y) {
  if (x.size() != cols || y.size() != rows)
    throw std::invalid_argument("gemv_acc: size mismatch");
  current().load()->gemv(a, rows, cols, x.data(), y.data(), true);
}

void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t k, std::size_t n) {
  current().load()->gemm(a, b, c, m, k, n);
}

}  // namespace degenwave::kernels
