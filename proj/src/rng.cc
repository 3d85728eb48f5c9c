#include "ubtcp/rng.h"

#include <cmath>
#include <stdexcept>

namespace ubtcp {

namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::ForStream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(Mix(seed + 0x9E3779B97F4A7C15ULL) ^
             Mix(stream_id * 0xD1B54A32D192ED03ULL + 1));
}

std::uint64_t Rng::Next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return Mix(state_);
}

double Rng::Uniform(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("Rng::Uniform: lo > hi");
  // Top 53 bits so the result is exactly representable and strictly < 1.
  const double unit =
      static_cast<double>(Next() >> 11) * (1.0 / 9007199254740992.0);
  double v = lo + unit * (hi - lo);
  // Rounding in lo + unit*(hi-lo) can land on hi for wide intervals.
  if (v >= hi && hi > lo) v = std::nextafter(hi, lo);
  return v;
}

bool Rng::Bernoulli(double p) {
  if (p <= 0.0) return false;
  return Uniform(0.0, 1.0) < p;
}

}  // namespace ubtcp
