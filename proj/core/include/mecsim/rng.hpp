#ifndef MECSIM_RNG_HPP
#define MECSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace mecsim {

// Deterministic RNG wrapper. All uniform mappings are implemented by hand on
// top of std::mt19937_64 so that results are bit-identical across standard
// library implementations. One master seed derives independent named streams
// (e.g. "scenario/tasks", "ga/mutation"), which keeps draw order stable when
// parts of a pipeline run concurrently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t derive_seed(std::uint64_t master, std::string_view stream_name) {
    // FNV-1a over the stream name, mixed with the master seed by splitmix64.
    std::uint64_t h = 14695981039346656037ull;
    for (char c : stream_name) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return splitmix64(master ^ splitmix64(h));
  }

  static Rng stream(std::uint64_t master, std::string_view stream_name) {
    return Rng(derive_seed(master, stream_name));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform index in [0, n).
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace mecsim

#endif
