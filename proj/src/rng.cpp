#include "bsrbm/rng.hpp"

#include <cmath>

namespace bsrbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    // Expand the seed through splitmix64 so nearby seeds give unrelated states.
    std::uint64_t s = seed;
    std::seed_seq::result_type words[8];
    for (auto& w : words) {
        s = splitmix64(s);
        w = static_cast<std::seed_seq::result_type>(s & 0xffffffffULL);
    }
    std::seed_seq seq(std::begin(words), std::end(words));
    gen_.seed(seq);
}

int Rng::uniform_int(int n) {
    if (n < 1) throw ValidationError("Rng::uniform_int: n must be >= 1");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t bound = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= bound);
    return static_cast<int>(x % un);
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

Vector Rng::normal_vector(int n) {
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = normal();
    return out;
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
    std::uint64_t h = splitmix64(seed_ ^ fnv1a64(label));
    h = splitmix64(h ^ (index * 0x9e3779b97f4a7c15ULL + 1));
    return Rng(h);
}

}  // namespace bsrbm
