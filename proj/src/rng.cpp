#include "qrec/rng.hpp"

#include <cmath>
#include <numbers>

namespace qrec {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_)
        word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t m) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
    std::uint64_t r = next_u64();
    while (r >= limit)
        r = next_u64();
    return r % m;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform01_closed() {
    return static_cast<double>(next_u64() >> 11) / static_cast<double>((1ull << 53) - 1);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log stays finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(angle);
    has_cached_normal_ = true;
    return r * std::cos(angle);
}

Complex Rng::complex_normal() {
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return Complex(re * inv_sqrt2, im * inv_sqrt2);
}

Rng Rng::split(std::uint64_t stream) const {
    std::uint64_t s = stream ^ 0xA3C59AC2F0E4D1B7ull;
    const std::uint64_t mixed_stream = splitmix64(s);
    std::uint64_t t = seed_ ^ mixed_stream;
    return Rng(splitmix64(t));
}

ComplexMatrix ginibre(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            m(r, c) = rng.complex_normal();
    return m;
}

} // namespace qrec
