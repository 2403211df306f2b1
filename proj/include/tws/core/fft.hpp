// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace tws
{

/// Real-input DFT of a fixed length backed by FFTW. Instances own their plan and
/// aligned scratch buffers; use one instance per thread.
class RealFft
{
  public:
    explicit RealFft(std::size_t n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    RealFft(RealFft&& other) noexcept;
    RealFft& operator=(RealFft&& other) noexcept;

    [[nodiscard]] std::size_t size() const noexcept { return _n; }
    [[nodiscard]] std::size_t bins() const noexcept { return _n / 2 + 1; }

    /// `in` shorter than size() is zero-padded. `out` must hold bins() values.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);

    /// Inverse including the 1/n normalization. `out` must hold size() values.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

  private:
    void release() noexcept;

    std::size_t _n = 0;
    double* _real = nullptr;
    void* _spectrum = nullptr;
    void* _forward = nullptr;
    void* _inverse = nullptr;
};

[[nodiscard]] bool is_power_of_two(std::size_t n) noexcept;
[[nodiscard]] std::size_t next_power_of_two(std::size_t n) noexcept;

} // namespace tws
