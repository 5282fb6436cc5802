#include <gtest/gtest.h>

#include <random>

#include "memeground/errors.hpp"
#include "memeground/timestamp.hpp"
#include "oracles.hpp"

using namespace memeground;
using memeground::testing::oracle_epoch_to_iso;

TEST(NormalizeTimestamp, EpochMatchesCalendarOracle) {
  // Frozen values cross-checked against Python's datetime.
  EXPECT_EQ(oracle_epoch_to_iso(1688169600), "2023-07-01T00:00:00Z");
  EXPECT_EQ(oracle_epoch_to_iso(951782400), "2000-02-29T00:00:00Z");

  EXPECT_EQ(normalize_timestamp(std::int64_t{1688169600}), "2023-07-01T00:00:00Z");
  EXPECT_EQ(normalize_timestamp(std::int64_t{0}), "1970-01-01T00:00:00Z");
  EXPECT_EQ(normalize_timestamp(std::int64_t{1690848000}), "2023-08-01T00:00:00Z");
  EXPECT_EQ(normalize_timestamp(std::int64_t{951782400}), "2000-02-29T00:00:00Z");
  EXPECT_EQ(normalize_timestamp(std::int64_t{4102444799}), "2099-12-31T23:59:59Z");
}

TEST(NormalizeTimestamp, RandomEpochsAgreeWithOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(0, 253402300799);
  for (int i = 0; i < 20000; ++i) {
    const std::int64_t t = dist(rng);
    ASSERT_EQ(normalize_timestamp(t), oracle_epoch_to_iso(t)) << t;
  }
}

TEST(NormalizeTimestamp, OffsetsConvertToUtc) {
  EXPECT_EQ(normalize_timestamp("2023-07-15T10:00:00+02:00"), "2023-07-15T08:00:00Z");
  EXPECT_EQ(normalize_timestamp("2023-07-01T01:30:00-05:30"), "2023-07-01T07:00:00Z");
  EXPECT_EQ(normalize_timestamp("2023-07-01T00:30:00+0100"), "2023-06-30T23:30:00Z");
  EXPECT_EQ(normalize_timestamp("2023-07-15T10:00:00Z"), "2023-07-15T10:00:00Z");
}

TEST(NormalizeTimestamp, NoOffsetMeansUtcAndFractionsTruncate) {
  EXPECT_EQ(normalize_timestamp("2023-07-15T10:00:00"), "2023-07-15T10:00:00Z");
  EXPECT_EQ(normalize_timestamp("2023-07-15 10:00:00.999+00:00"), "2023-07-15T10:00:00Z");
  EXPECT_EQ(normalize_timestamp("2023-07-15T10:00:59.123456Z"), "2023-07-15T10:00:59Z");
}

TEST(NormalizeTimestamp, DigitStringsAreEpochs) {
  EXPECT_EQ(normalize_timestamp("1688169600"), "2023-07-01T00:00:00Z");
  EXPECT_EQ(normalize_timestamp("0"), "1970-01-01T00:00:00Z");
}

TEST(NormalizeTimestamp, IsIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> dist(0, 4102444799);
  for (int i = 0; i < 2000; ++i) {
    const std::string once = normalize_timestamp(dist(rng));
    EXPECT_EQ(normalize_timestamp(once), once);
  }
  const std::string shifted = normalize_timestamp("2023-07-15T10:00:00+02:00");
  EXPECT_EQ(normalize_timestamp(shifted), shifted);
}

TEST(NormalizeTimestamp, RejectsGarbage) {
  for (const char* bad : {"", "yesterday", "2023-07-15", "2023-13-01T00:00:00Z", "2023-02-29T00:00:00Z",
                          "2023-07-15T24:00:00Z", "2023-07-15T10:00:00+25:00", "2023-07-15T10:00:00Zjunk",
                          "2023-07-15T10:00:00.", "-5", "1969-12-31T23:59:59Z"}) {
    EXPECT_THROW(normalize_timestamp(std::string_view(bad)), TimestampError) << bad;
  }
  EXPECT_THROW(normalize_timestamp(std::int64_t{-1}), TimestampError);
}
