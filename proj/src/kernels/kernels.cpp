// Backend selection. Picked once at startup from CPU features; the
// RBC_KERNELS environment variable ("scalar" or "avx2") overrides.

#include "rbc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace rbc::kernels {
namespace {

bool avx2_available() {
#if defined(RBC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::KernelTable* table_for(Backend b) {
#if defined(RBC_HAVE_AVX2)
  if (b == Backend::avx2) return &detail::avx2_table;
#endif
  (void)b;
  return &detail::scalar_table;
}

Backend initial_backend() {
  if (const char* env = std::getenv("RBC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

struct State {
  std::atomic<Backend> backend{initial_backend()};
  std::atomic<const detail::KernelTable*> table{table_for(backend.load())};
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend.load(); }

const char* backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

bool force_backend(Backend backend) {
  if (backend == Backend::avx2 && !avx2_available()) return false;
  state().backend.store(backend);
  state().table.store(table_for(backend));
  return true;
}

void axpby(cd alpha, const cd* x, cd beta, const cd* y, cd* z, std::size_t n) {
  state().table.load()->axpby(alpha, x, beta, y, z, n);
}

void scale(cd alpha, const cd* x, cd* z, std::size_t n) {
  state().table.load()->scale(alpha, x, z, n);
}

cd dot_conj(const cd* x, const cd* y, std::size_t n) {
  return state().table.load()->dot_conj(x, y, n);
}

double norm2sq(const cd* x, std::size_t n) {
  return state().table.load()->norm2sq(x, n);
}

void matmul(const cd* a, const cd* b, cd* c, std::size_t m, std::size_t k,
            std::size_t n) {
  state().table.load()->matmul(a, b, c, m, k, n);
}

void rotate_rows(cd* x, cd* y, double c, cd s, std::size_t n) {
  state().table.load()->rotate_rows(x, y, c, s, n);
}

}  // namespace rbc::kernels
