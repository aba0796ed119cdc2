#pragma once
// Counter-based 64-bit generator (SplitMix64). A stream is identified by
// (seed, stream id); the id is mixed into the starting counter, so derived
// substreams are independent and a trial can be replayed in isolation. All
// derived variates (uniform doubles, Box-Muller gaussians, sphere points) are
// produced by explicit arithmetic on the raw 64-bit outputs, which keeps
// sequences bit-identical across platforms and standard libraries.

#include <cstdint>

#include "spoly/common.hpp"

namespace spoly {

class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  // Substream k of a master seed. mix64 is a bijection, so distinct
  // (seed, stream) pairs start at distinct counters with scrambled spacing.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(mix64(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in the open interval (0,1); never returns 0 or 1, safe for log().
  double uniform() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t bound = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= bound);
    return x % n;
  }

  // Box-Muller; one spare is cached between calls.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Uniform direction via normalized gaussians.
inline VecN random_unit(Rng& rng, int dim) {
  if (dim < 2 || dim > kMaxDim) throw DomainError("random_unit: bad dimension");
  for (;;) {
    VecN v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
    double nr = norm(v);
    if (nr > 1e-8) return scale(v, 1.0 / nr);
  }
}

// Fisher-Yates over indices [0, n).
template <typename Int>
inline void shuffle_indices(Rng& rng, std::vector<Int>& idx) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::size_t j = std::size_t(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace spoly
