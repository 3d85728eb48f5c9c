#ifndef UBTCP_UNITS_H_
#define UBTCP_UNITS_H_

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace ubtcp {

// A number tagged with its unit. Only same-unit addition, subtraction and
// comparison are defined; crossing units goes through the named conversion
// functions below.
template <typename Tag, typename Rep>
class Quantity {
 public:
  using rep = Rep;

  constexpr Quantity() = default;
  constexpr explicit Quantity(Rep value) : value_(value) {}

  constexpr Rep value() const { return value_; }

  friend constexpr Quantity operator+(Quantity a, Quantity b) {
    return Quantity(a.value_ + b.value_);
  }
  friend constexpr Quantity operator-(Quantity a, Quantity b) {
    return Quantity(a.value_ - b.value_);
  }
  friend constexpr Quantity operator*(Quantity a, Rep k) {
    return Quantity(a.value_ * k);
  }
  friend constexpr Quantity operator*(Rep k, Quantity a) {
    return Quantity(a.value_ * k);
  }
  // Ratio of two same-unit quantities is dimensionless.
  friend constexpr double operator/(Quantity a, Quantity b) {
    return static_cast<double>(a.value_) / static_cast<double>(b.value_);
  }
  constexpr Quantity& operator+=(Quantity o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity o) {
    value_ -= o.value_;
    return *this;
  }
  friend constexpr auto operator<=>(Quantity, Quantity) = default;

 private:
  Rep value_{};
};

using Bytes = Quantity<struct BytesTag, std::int64_t>;
using Bits = Quantity<struct BitsTag, std::int64_t>;
using Seconds = Quantity<struct SecondsTag, double>;
using Micros = Quantity<struct MicrosTag, std::int64_t>;
using Segments = Quantity<struct SegmentsTag, std::int64_t>;
using Rate = Quantity<struct BitsPerSecondTag, double>;
using Meters = Quantity<struct MetersTag, double>;
using MetersPerSecond = Quantity<struct MetersPerSecondTag, double>;

constexpr Bits BitsOf(Bytes bytes) { return Bits(bytes.value() * 8); }

constexpr Seconds ToSeconds(Micros us) {
  return Seconds(static_cast<double>(us.value()) / 1e6);
}

inline Micros ToMicros(Seconds s) {
  return Micros(static_cast<std::int64_t>(std::llround(s.value() * 1e6)));
}

// bits / seconds
inline Rate RateOf(double bits, Seconds interval) {
  return Rate(bits / interval.value());
}

// Time to serialize `bits` onto a link of `rate`.
inline Seconds TransmissionTime(Bits bits, Rate rate) {
  return Seconds(static_cast<double>(bits.value()) / rate.value());
}

inline Seconds TravelTime(Meters distance, MetersPerSecond speed) {
  return Seconds(distance.value() / speed.value());
}

// Point in simulated time. Integer microseconds keep event ordering exact.
class SimTime {
 public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::int64_t micros) : micros_(micros) {}

  static constexpr SimTime Zero() { return SimTime(0); }
  static constexpr SimTime Max() {
    return SimTime(std::numeric_limits<std::int64_t>::max());
  }
  static SimTime FromSeconds(double s) {
    return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
  }

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double seconds() const {
    return static_cast<double>(micros_) / 1e6;
  }

  friend constexpr SimTime operator+(SimTime t, Micros d) {
    return SimTime(t.micros_ + d.value());
  }
  friend constexpr Micros operator-(SimTime a, SimTime b) {
    return Micros(a.micros_ - b.micros_);
  }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace ubtcp

#endif  // UBTCP_UNITS_H_
