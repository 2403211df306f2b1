// SPDX-License-Identifier: Apache-2.0
#include "tws/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace tws
{

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

std::uint32_t stable_hash32(std::string_view s) noexcept
{
    std::uint32_t h = 2166136261U;
    for (char c: s)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619U;
    }
    return h;
}

Rng::Rng(std::uint64_t seed): _engine(mix64(seed))
{
}

Rng Rng::substream(std::span<const std::uint64_t> path)
{
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (std::uint64_t p: path)
        h = mix64(h ^ mix64(p));
    return Rng(h);
}

Rng Rng::substream(std::initializer_list<std::uint64_t> path)
{
    return substream(std::span<const std::uint64_t>(path.begin(), path.size()));
}

std::uint64_t Rng::next_u64()
{
    return _engine();
}

double Rng::uniform()
{
    return static_cast<double>(_engine() >> 11U) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double Rng::normal()
{
    if (_spare_normal)
    {
        const double v = *_spare_normal;
        _spare_normal.reset();
        return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    _spare_normal = radius * std::sin(angle);
    return radius * std::cos(angle);
}

bool Rng::bernoulli(double p)
{
    return uniform() < p;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi <= lo)
        return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1U;
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span);
}

} // namespace tws
