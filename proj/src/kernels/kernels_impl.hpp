#pragma once

#include "degenwave/kernels.hpp"

namespace degenwave::kernels::detail {

extern const Table scalar_table;

#if defined(DEGENWAVE_HAVE_AVX2)
extern const Table avx2_table;
#endif

}  // namespace degenwave::kernels::detail
