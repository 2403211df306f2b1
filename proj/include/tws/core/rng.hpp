// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string_view>

namespace tws
{

/// Seeded random stream with platform-independent derived distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; uniform, normal and Bernoulli draws are computed here rather than
/// through the implementation-defined <random> distributions so that corpora are
/// byte-identical across standard libraries.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed);

    /// Stream keyed by a path of integers, e.g. (master_seed, utterance, kind).
    static Rng substream(std::span<const std::uint64_t> path);
    static Rng substream(std::initializer_list<std::uint64_t> path);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal via Box–Muller.
    double normal();
    bool bernoulli(double p);
    /// Uniform integer on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  private:
    std::mt19937_64 _engine;
    std::optional<double> _spare_normal;
};

/// Stable 32-bit FNV-1a hash, used to key substreams by string ids.
[[nodiscard]] std::uint32_t stable_hash32(std::string_view s) noexcept;

/// SplitMix64 finaliser.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

} // namespace tws
