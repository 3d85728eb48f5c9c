#ifndef UBTCP_RNG_H_
#define UBTCP_RNG_H_

#include <cstdint>

namespace ubtcp {

// splitmix64. Fully specified so a given seed yields the same stream on any
// platform. Each consumer (node, loss process) owns its own instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  // Independent stream for a named consumer of a run seeded with `seed`.
  static Rng ForStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t Next();

  // Uniform in [lo, hi). Throws std::invalid_argument when lo > hi.
  double Uniform(double lo, double hi);

  // True with probability p.
  bool Bernoulli(double p);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace ubtcp

#endif  // UBTCP_RNG_H_
