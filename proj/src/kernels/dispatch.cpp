#include "fsv/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "scalar_impl.hpp"
#include "table.hpp"

namespace fsv::kernels {
namespace {

using detail::KernelTable;

Backend g_backend = Backend::scalar;
const KernelTable* g_table = nullptr;

bool cpu_has_avx2() {
#if FSV_HAVE_AVX2_TU && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void init() {
  if (g_table) return;
  Backend want = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("FSV_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) want = Backend::avx2;
  }
  g_backend = want;
#if FSV_HAVE_AVX2_TU
  g_table = (want == Backend::avx2) ? &detail::avx2_table() : &detail::scalar_table();
#else
  g_table = &detail::scalar_table();
#endif
}

const KernelTable& table() {
  init();
  return *g_table;
}

}  // namespace

Backend active_backend() {
  init();
  return g_backend;
}

bool avx2_supported() { return cpu_has_avx2(); }

bool set_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_has_avx2()) return false;
  init();
  g_backend = b;
#if FSV_HAVE_AVX2_TU
  g_table = (b == Backend::avx2) ? &detail::avx2_table() : &detail::scalar_table();
#endif
  return true;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void vexp(const double* x, double* out, std::size_t n) { table().vexp(x, out, n); }
void vlog(const double* x, double* out, std::size_t n) { table().vlog(x, out, n); }
double exp1(double x) { return detail::exp_core(x); }
double log1(double x) { return detail::log_core(x); }

void log_sq_offset(const double* x, double offset, double* z, std::size_t n) {
  table().log_sq_offset(x, offset, z, n);
}

void vsub(const double* a, const double* b, double* out, std::size_t n) {
  table().vsub(a, b, out, n);
}
void vadd_inplace(double* acc, const double* x, std::size_t n) {
  table().vadd_inplace(acc, x, n);
}
void vmax_inplace(double* acc, const double* x, std::size_t n) {
  table().vmax_inplace(acc, x, n);
}
void vrecip(const double* x, double* out, std::size_t n) { table().vrecip(x, out, n); }

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double wdot(const double* a, const double* b, const double* w, std::size_t n) {
  return table().wdot(a, b, w, n);
}
double vsum(const double* x, std::size_t n) { return table().vsum(x, n); }

void mix_logweights(const double* d, std::size_t n, const double* lc,
                    const double* mk, const double* inv2v, std::size_t nk,
                    double* lw) {
  table().mix_logweights(d, n, lc, mk, inv2v, nk, lw);
}

}  // namespace fsv::kernels
