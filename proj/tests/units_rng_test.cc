#include <cstdint>
#include <set>
#include <stdexcept>
#include <type_traits>

#include <gtest/gtest.h>

#include "ubtcp/rng.h"
#include "ubtcp/units.h"

namespace ubtcp {
namespace {

template <typename A, typename B>
concept Addable = requires(A a, B b) { a + b; };

template <typename A, typename B>
concept Comparable = requires(A a, B b) { a < b; };

// Mixing units only works through the named conversions.
static_assert(Addable<Bytes, Bytes>);
static_assert(!Addable<Bytes, Bits>);
static_assert(!Addable<Seconds, Micros>);
static_assert(!Addable<Segments, Bytes>);
static_assert(!Addable<Meters, MetersPerSecond>);
static_assert(!Comparable<Rate, Seconds>);
static_assert(!std::is_convertible_v<double, Seconds>);
static_assert(!std::is_convertible_v<Bytes, Bits>);

TEST(BitsOf, Examples) {
  EXPECT_EQ(BitsOf(Bytes(1040)).value(), 8320);
  EXPECT_EQ(BitsOf(Bytes(0)).value(), 0);
  EXPECT_EQ(BitsOf(Bytes(40)).value(), 320);
}

TEST(Units, Conversions) {
  EXPECT_EQ(ToMicros(Seconds(0.125)).value(), 125000);
  EXPECT_DOUBLE_EQ(ToSeconds(Micros(2500)).value(), 0.0025);
  EXPECT_DOUBLE_EQ(TransmissionTime(Bits(8320), Rate(2e6)).value(), 0.00416);
  EXPECT_DOUBLE_EQ(TravelTime(Meters(500), MetersPerSecond(10)).value(), 50.0);
  EXPECT_DOUBLE_EQ(RateOf(8320.0, Seconds(0.01)).value(), 832000.0);
}

TEST(SimTime, ArithmeticAndOrder) {
  const SimTime a = SimTime::FromSeconds(1.5);
  const SimTime b = a + Micros(250);
  EXPECT_EQ(a.micros(), 1500000);
  EXPECT_EQ((b - a).value(), 250);
  EXPECT_LT(a, b);
  EXPECT_GE((b - a).value(), 0);
  EXPECT_DOUBLE_EQ(b.seconds(), 1.50025);
}

// Reference outputs computed separately by executing the three mixing steps.
TEST(Rng, SplitmixGoldenSeed0) {
  Rng r(0);
  EXPECT_EQ(r.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.Next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.Next(), 0x06c45d188009454fULL);
}

TEST(Rng, SplitmixGoldenSeeds1And2) {
  Rng r1(1), r2(2);
  EXPECT_EQ(r1.Next(), 0x910a2dec89025cc1ULL);
  EXPECT_EQ(r1.Next(), 0xbeeb8da1658eec67ULL);
  EXPECT_EQ(r1.Next(), 0xf893a2eefb32555eULL);
  EXPECT_EQ(r2.Next(), 0x975835de1c9756ceULL);
  EXPECT_EQ(r2.Next(), 0xbfc846100bfc1e42ULL);
  EXPECT_EQ(r2.Next(), 0x987bbcbfdd7e532fULL);
}

TEST(Rng, SameSeedSameStream) {
  for (std::uint64_t seed : {0ULL, 7ULL, 42ULL, 0xdeadbeefULL}) {
    Rng a(seed), b(seed);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.Next(), b.Next());
  }
}

TEST(Rng, StreamsAreDistinctAndDeterministic) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t stream = 0; stream < 64; ++stream) {
    Rng a = Rng::ForStream(42, stream);
    Rng b = Rng::ForStream(42, stream);
    const std::uint64_t v = a.Next();
    EXPECT_EQ(v, b.Next());
    firsts.insert(v);
  }
  EXPECT_EQ(firsts.size(), 64u);
  EXPECT_NE(Rng::ForStream(1, 5).Next(), Rng::ForStream(2, 5).Next());
}

TEST(Rng, UniformDegenerateInterval) {
  Rng r(3);
  EXPECT_EQ(r.Uniform(5.0, 5.0), 5.0);
}

TEST(Rng, UniformContainment) {
  Rng r(11);
  for (int i = 0; i < 100000; ++i) {
    const double a = r.Uniform(0.0, 1000.0);
    ASSERT_GE(a, 0.0);
    ASSERT_LT(a, 1000.0);
    const double v = r.Uniform(0.0, 35.0);
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 35.0);
  }
}

TEST(Rng, UniformRejectsInvertedBounds) {
  Rng r(0);
  EXPECT_THROW(r.Uniform(2.0, 1.0), std::invalid_argument);
}

TEST(Rng, UniformMeanIsCentred) {
  Rng r(5);
  double sum = 0;
  constexpr int kN = 200000;
  for (int i = 0; i < kN; ++i) sum += r.Uniform(0.0, 1.0);
  EXPECT_NEAR(sum / kN, 0.5, 0.005);
}

TEST(Rng, BernoulliEdges) {
  Rng r(9);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(r.Bernoulli(0.0));
    hits += r.Bernoulli(0.25) ? 1 : 0;
  }
  EXPECT_NEAR(hits, 250, 60);
}

}  // namespace
}  // namespace ubtcp
