#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace shopstab {

// Deterministic random source. All draws go through u01() so that results
// do not depend on the standard library's distribution implementations,
// which differ between platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        auto span = static_cast<double>(hi - lo + 1);
        auto off = static_cast<std::int64_t>(u01() * span);
        if (off > hi - lo) off = hi - lo;
        return lo + off;
    }

    int uniform_int(int lo, int hi) { return static_cast<int>(uniform(lo, hi)); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace shopstab
