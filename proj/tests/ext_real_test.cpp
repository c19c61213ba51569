#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "mdgs/ext_real.hpp"

using mdgs::ExtReal;

TEST(ExtReal, ImplicitFromDoubleMapsInfinities) {
  EXPECT_TRUE(ExtReal(std::numeric_limits<double>::infinity()).is_pos_inf());
  EXPECT_TRUE(ExtReal(-std::numeric_limits<double>::infinity()).is_neg_inf());
  EXPECT_TRUE(ExtReal(1.5).is_finite());
  EXPECT_EQ(ExtReal(1.5).value(), 1.5);
}

TEST(ExtReal, SubtractingInfinitySaturates) {
  EXPECT_TRUE((ExtReal(3.0) - ExtReal::pos_inf()).is_neg_inf());
  EXPECT_TRUE((ExtReal(3.0) - ExtReal::neg_inf()).is_pos_inf());
  EXPECT_TRUE((ExtReal::pos_inf() + ExtReal(2.0)).is_pos_inf());
  EXPECT_TRUE((-ExtReal::pos_inf()).is_neg_inf());
}

TEST(ExtReal, OppositeInfinitiesDoNotAdd) {
  EXPECT_THROW(ExtReal::pos_inf() + ExtReal::neg_inf(), mdgs::Error);
  EXPECT_THROW(ExtReal::pos_inf() - ExtReal::pos_inf(), mdgs::Error);
}

TEST(ExtReal, OrderingIsTotalOnExtendedLine) {
  EXPECT_LT(ExtReal::neg_inf(), ExtReal(-1e300));
  EXPECT_LT(ExtReal(1e300), ExtReal::pos_inf());
  EXPECT_EQ(ExtReal::pos_inf(), ExtReal::pos_inf());
  EXPECT_FALSE(ExtReal(3.0) > ExtReal::pos_inf());
  EXPECT_EQ(max(ExtReal(1.0), ExtReal::neg_inf()), ExtReal(1.0));
  EXPECT_EQ(min(ExtReal(1.0), ExtReal::pos_inf()), ExtReal(1.0));
}

TEST(ExtReal, AbsDiff) {
  EXPECT_EQ(abs_diff(ExtReal::pos_inf(), ExtReal::pos_inf()), 0.0);
  EXPECT_EQ(abs_diff(ExtReal(1.0), ExtReal(3.5)), 2.5);
  EXPECT_TRUE(std::isinf(abs_diff(ExtReal(1.0), ExtReal::pos_inf())));
}

TEST(ExtReal, ValueOfInfinityThrows) { EXPECT_THROW((void)ExtReal::pos_inf().value(), mdgs::Error); }

TEST(ExtReal, Streams) {
  std::ostringstream os;
  os << ExtReal::pos_inf() << ' ' << ExtReal(2.5);
  EXPECT_EQ(os.str(), "+inf 2.5");
}
