#include "cqt/suites.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace cqt;

namespace {

SuiteConfig small() {
  SuiteConfig c;
  c.Ns = {3};
  c.samples = 3;
  return c;
}

TEST(Suites, AllPassAtSmallSize) {
  for (auto& n : suite_names()) {
    if (n == "all") continue;
    auto r = run_suite(n, small());
    EXPECT_FALSE(r.checks.empty()) << n;
    for (auto& c : r.checks) EXPECT_TRUE(c.pass) << n << ": " << c.name << " residual " << c.residual << " " << c.note;
  }
}

TEST(Suites, DeterministicForFixedSeed) {
  auto a = to_json(run_suite("dilog", small()));
  auto b = to_json(run_suite("dilog", small()));
  EXPECT_EQ(a.dump(), b.dump());
  auto c = small();
  c.seed = 2;
  auto d = to_json(run_suite("dilog", c));
  EXPECT_EQ(d["checks"].size(), a["checks"].size());
}

TEST(Suites, UnknownNameRejected) { EXPECT_THROW(run_suite("nope", small()), std::invalid_argument); }

TEST(Suites, ReportAccounting) {
  SuiteReport r{"x"};
  r.add("fine", 1e-12, 1e-9);
  EXPECT_TRUE(r.ok());
  r.add("nan", std::numeric_limits<double>::quiet_NaN(), 1e-9);
  EXPECT_FALSE(r.ok());
  r.fail("thrown", "boom");
  auto j = to_json(r);
  ASSERT_EQ(j["checks"].size(), 3u);
  EXPECT_TRUE(j["checks"][2]["residual"].is_null());
  EXPECT_FALSE(j["checks"][1]["pass"].get<bool>());
}

}  // namespace
