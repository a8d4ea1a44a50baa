#include <gtest/gtest.h>

#include <cmath>

#include "qflake/error.hpp"
#include "qflake/resample.hpp"
#include "support.hpp"

using namespace qflake;

TEST(Smote, SegmentInterpolation) {
  const Matrix x = Matrix::from_rows({{0, 0}, {2, 0}, {5, 5}, {6, 5}, {7, 5}});
  const Labels y{Label::Flaky, Label::Flaky, Label::NonFlaky, Label::NonFlaky, Label::NonFlaky};
  const ResampledSet r = smote_resample(x, y, 1, 9);
  ASSERT_EQ(r.x.rows(), 6u);
  EXPECT_EQ(r.synthetic_count(), 1u);
  EXPECT_TRUE(r.synthetic_mask[5]);
  EXPECT_EQ(r.y[5], Label::Flaky);
  EXPECT_GE(r.x(5, 0), 0.0);
  EXPECT_LE(r.x(5, 0), 2.0);
  EXPECT_EQ(r.x(5, 1), 0.0);
}

TEST(Smote, EqualCountsIsNoOp) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const Labels y{Label::Flaky, Label::NonFlaky, Label::Flaky, Label::NonFlaky};
  const ResampledSet r = smote_resample(x, y);
  EXPECT_EQ(r.x, x);
  EXPECT_EQ(r.y, y);
  EXPECT_EQ(r.synthetic_count(), 0u);
  EXPECT_EQ(r.synthetic_mask, std::vector<bool>(4, false));
}

TEST(Smote, PaperRatioReachesParity) {
  Rng rng(17);
  const Matrix x = qflake::testing::random_matrix(288, 6, rng, 4.0);
  Labels y(288, Label::NonFlaky);
  for (std::size_t i = 0; i < 45; ++i) y[i * 6] = Label::Flaky;
  const ResampledSet r = smote_resample(x, y, 5, 42);
  EXPECT_EQ(r.x.rows(), 486u);
  EXPECT_EQ(r.synthetic_count(), 198u);
  EXPECT_EQ(std::count(r.y.begin(), r.y.end(), Label::Flaky), 243);
  for (std::size_t i = 0; i < 288; ++i) {
    EXPECT_FALSE(r.synthetic_mask[i]);
    for (std::size_t j = 0; j < 6; ++j) ASSERT_EQ(r.x(i, j), x(i, j));
  }
  for (std::size_t s = 0; s < r.synthetic_count(); ++s) {
    const auto& o = r.origins[s];
    const std::size_t row = 288 + s;
    EXPECT_TRUE(r.synthetic_mask[row]);
    EXPECT_EQ(y[o.base], Label::Flaky);
    EXPECT_EQ(y[o.neighbor], Label::Flaky);
    EXPECT_GE(o.coefficient, 0.0);
    EXPECT_LE(o.coefficient, 1.0);
    for (std::size_t j = 0; j < 6; ++j) {
      const double expect = x(o.base, j) + o.coefficient * (x(o.neighbor, j) - x(o.base, j));
      EXPECT_NEAR(r.x(row, j), expect, 1e-12);
    }
  }
}

TEST(Smote, MajorityFlakyOversamplesNonFlaky) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {10}, {11}});
  const Labels y{Label::Flaky, Label::Flaky, Label::Flaky, Label::NonFlaky, Label::NonFlaky};
  const ResampledSet r = smote_resample(x, y, 5, 1);
  EXPECT_EQ(r.synthetic_count(), 1u);
  EXPECT_EQ(r.y.back(), Label::NonFlaky);
  EXPECT_GE(r.x(5, 0), 10.0);
  EXPECT_LE(r.x(5, 0), 11.0);
}

TEST(Smote, Deterministic) {
  Rng rng(2);
  const Matrix x = qflake::testing::random_matrix(30, 3, rng);
  Labels y(30, Label::NonFlaky);
  for (std::size_t i = 0; i < 6; ++i) y[i] = Label::Flaky;
  const ResampledSet a = smote_resample(x, y, 5, 5);
  const ResampledSet b = smote_resample(x, y, 5, 5);
  EXPECT_EQ(a.x, b.x);
  const ResampledSet c = smote_resample(x, y, 5, 6);
  EXPECT_NE(a.x, c.x);
}

TEST(Smote, NeighborsAreNearestByDistanceThenIndex) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {-1}, {3}, {100}});
  const auto nn = nearest_minority_neighbors(x, {0, 1, 2, 3}, 0, 2);
  EXPECT_EQ(nn, (std::vector<std::size_t>{1, 2}));
}

TEST(Smote, Errors) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}});
  try {
    smote_resample(x, {Label::Flaky, Label::NonFlaky, Label::NonFlaky});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MinorityTooSmall);
  }
  EXPECT_THROW(smote_resample(x, {Label::Flaky}), Error);
  EXPECT_THROW(smote_resample(x, {Label::Flaky, Label::Flaky, Label::NonFlaky}, 0), Error);
}
