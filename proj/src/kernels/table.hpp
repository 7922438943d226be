#pragma once

#include <cstddef>

namespace fsv::kernels::detail {

struct KernelTable {
  void (*vexp)(const double*, double*, std::size_t);
  void (*vlog)(const double*, double*, std::size_t);
  void (*log_sq_offset)(const double*, double, double*, std::size_t);
  void (*vsub)(const double*, const double*, double*, std::size_t);
  void (*vadd_inplace)(double*, const double*, std::size_t);
  void (*vmax_inplace)(double*, const double*, std::size_t);
  void (*vrecip)(const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*wdot)(const double*, const double*, const double*, std::size_t);
  double (*vsum)(const double*, std::size_t);
  void (*mix_logweights)(const double*, std::size_t, const double*,
                         const double*, const double*, std::size_t, double*);
};

const KernelTable& scalar_table();
#if FSV_HAVE_AVX2_TU
const KernelTable& avx2_table();
#endif

}  // namespace fsv::kernels::detail
