#include "eot/compensated_sum.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace eot {
namespace {

TEST(CompensatedSum, RecoversSmallAddendsNextToLargeOnes) {
  CompensatedSum acc;
  acc += 1.0;
  acc += 1e100;
  acc += 1.0;
  acc += -1e100;
  EXPECT_EQ(acc.value(), 2.0);
}

TEST(CompensatedSum, TenthsSumExactly) {
  std::vector<double> v(1000000, 0.1);
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_NE(naive, 100000.0);
  // The exact sum of the double nearest 0.1 rounds to 100000.
  EXPECT_EQ(compensated_sum(v), 100000.0);
}

}  // namespace
}  // namespace eot
