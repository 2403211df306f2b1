// SPDX-License-Identifier: Apache-2.0
#include "tws/core/convolve.hpp"

#include "tws/core/error.hpp"
#include "tws/core/fft.hpp"

#include <complex>

namespace tws
{

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw InvalidArgumentError("convolution of an empty sequence");
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = next_power_of_two(out_len);
    RealFft fft(n);
    std::vector<std::complex<double>> fa(fft.bins());
    std::vector<std::complex<double>> fb(fft.bins());
    fft.forward(a, fa);
    fft.forward(b, fb);
    for (std::size_t k = 0; k < fa.size(); ++k)
        fa[k] *= fb[k];
    std::vector<double> full(n);
    fft.inverse(fa, full);
    full.resize(out_len);
    return full;
}

} // namespace tws
