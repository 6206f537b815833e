#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace pa {

/// Seeded random stream (xoshiro256++ core, splitmix64 seeding). The
/// generator and the Gaussian transform are implemented here rather than
/// taken from <random> so that a given seed yields the same draw sequence
/// on every platform and standard library.
///
/// Streams are single-owner: copying is disabled, all mutation happens in
/// the owning run loop.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) = default;
  RngStream& operator=(RngStream&&) = default;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform on (0, 1]; safe to pass to log().
  double uniform_pos();

  /// One standard normal draw (Box-Muller; the pair's second value is
  /// discarded so the stream position is a pure function of the call count).
  double normal();

  /// Fills out with standard normals, pairwise; an odd tail discards the
  /// spare of its final pair.
  void fill_normal(std::span<double> out);

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

/// splitmix64 step: advances state and returns the next scrambled value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic sub-seed for a (master, path...) coordinate, e.g.
/// (master, sweep, grid index, replicate, purpose).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace pa
