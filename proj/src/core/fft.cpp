// SPDX-License-Identifier: Apache-2.0
#include "tws/core/fft.hpp"

#include "tws/core/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

namespace tws
{

namespace
{

// FFTW planning is not re-entrant; execution on distinct buffers is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace

RealFft::RealFft(std::size_t n): _n(n)
{
    if (n == 0)
        throw InvalidArgumentError("FFT length must be positive");
    const std::lock_guard lock(planner_mutex());
    _real = fftw_alloc_real(n);
    auto* spec = fftw_alloc_complex(n / 2 + 1);
    _spectrum = spec;
    const int len = static_cast<int>(n);
    _forward = fftw_plan_dft_r2c_1d(len, _real, spec, FFTW_ESTIMATE);
    _inverse = fftw_plan_dft_c2r_1d(len, spec, _real, FFTW_ESTIMATE);
}

RealFft::~RealFft()
{
    release();
}

RealFft::RealFft(RealFft&& other) noexcept:
    _n(std::exchange(other._n, 0)),
    _real(std::exchange(other._real, nullptr)),
    _spectrum(std::exchange(other._spectrum, nullptr)),
    _forward(std::exchange(other._forward, nullptr)),
    _inverse(std::exchange(other._inverse, nullptr))
{
}

RealFft& RealFft::operator=(RealFft&& other) noexcept
{
    if (this != &other)
    {
        release();
        _n = std::exchange(other._n, 0);
        _real = std::exchange(other._real, nullptr);
        _spectrum = std::exchange(other._spectrum, nullptr);
        _forward = std::exchange(other._forward, nullptr);
        _inverse = std::exchange(other._inverse, nullptr);
    }
    return *this;
}

void RealFft::release() noexcept
{
    if (_real == nullptr)
        return;
    const std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(_forward));
    fftw_destroy_plan(static_cast<fftw_plan>(_inverse));
    fftw_free(_real);
    fftw_free(_spectrum);
    _real = nullptr;
    _spectrum = nullptr;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out)
{
    if (in.size() > _n || out.size() < bins())
        throw InvalidArgumentError("RealFft::forward buffer size mismatch");
    std::copy(in.begin(), in.end(), _real);
    std::fill(_real + in.size(), _real + _n, 0.0);
    fftw_execute(static_cast<fftw_plan>(_forward));
    const auto* spec = static_cast<const fftw_complex*>(_spectrum);
    for (std::size_t k = 0; k < bins(); ++k)
        out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out)
{
    if (in.size() < bins() || out.size() < _n)
        throw InvalidArgumentError("RealFft::inverse buffer size mismatch");
    auto* spec = static_cast<fftw_complex*>(_spectrum);
    for (std::size_t k = 0; k < bins(); ++k)
    {
        spec[k][0] = in[k].real();
        spec[k][1] = in[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(_inverse));
    const double scale = 1.0 / static_cast<double>(_n);
    for (std::size_t i = 0; i < _n; ++i)
        out[i] = _real[i] * scale;
}

bool is_power_of_two(std::size_t n) noexcept
{
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) noexcept
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1U;
    return p;
}

} // namespace tws
