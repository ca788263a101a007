#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dlcpriv/rng.hpp"

using dlcpriv::rng::Cursor;
using dlcpriv::rng::Stream;

TEST(Rng, FnvKnownValues) {
  EXPECT_EQ(dlcpriv::rng::label_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(dlcpriv::rng::label_hash("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, PureFunctionOfKeyAndCounter) {
  const Stream a(7, "x", 3), b(7, "x", 3);
  for (std::uint64_t c = 0; c < 100; ++c) EXPECT_EQ(a.bits(c), b.bits(c));
  EXPECT_NE(Stream(7, "x", 3).bits(0), Stream(7, "x", 4).bits(0));
  EXPECT_NE(Stream(7, "x").bits(0), Stream(7, "y").bits(0));
  EXPECT_NE(Stream(7, "x").bits(0), Stream(8, "x").bits(0));
}

TEST(Rng, UniformMoments) {
  const Stream s(1, "moments");
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 2e-3);
}

TEST(Rng, NormalMoments) {
  const Stream s(2, "normal");
  const int n = 200000;
  double sum = 0.0, sq = 0.0, within = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(i);
    sum += z;
    sq += z * z;
    if (std::fabs(z) < 1.0) within += 1.0;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  EXPECT_NEAR(within / n, 0.682689, 0.005);
}

TEST(Rng, CursorMatchesCounters) {
  const Stream s(3, "cursor");
  Cursor c(s, 10);
  EXPECT_EQ(c.uniform(), s.uniform(10));
  EXPECT_EQ(c.normal(), s.normal(11));
  EXPECT_EQ(c.position(), 12u);
}

TEST(Rng, SubstreamsDistinct) {
  const Stream s(4, "sub");
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(s.substream(i).key());
  EXPECT_EQ(keys.size(), 1000u);
}
