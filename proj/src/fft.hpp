#pragma once

#include <complex>
#include <vector>

namespace pointkg::detail {

/// In-place unnormalised DFT. sign = -1: sum x_n e^{-2 pi i nk/N}; sign = +1: e^{+...}.
void dft_inplace(std::vector<std::complex<double>>& data, int sign);

}  // namespace pointkg::detail
