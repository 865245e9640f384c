#include <cmath>
#include <cstdlib>
#include <optional>

#include "doctest.h"
#include "pi_forge/k2_analysis.hpp"
#include "support.hpp"

using namespace pi_forge;

namespace {

BigInt fact(std::int64_t n) {
  BigInt r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

// Every (w, v, u, z) with w, v in [2, m/2], positive joint counts and
// u/(v-u) = z/(m-v-z) = w/(m-w), found by trying all u and z.
std::vector<K2Cell> brute_cells(std::int64_t m) {
  std::vector<K2Cell> out;
  for (std::int64_t w = 2; w <= m / 2; ++w) {
    for (std::int64_t v = 2; v <= m / 2; ++v) {
      for (std::int64_t u = 1; u < v; ++u) {
        const std::int64_t z = w - u;
        if (z < 1 || m - v - z < 1) continue;
        if (u * (m - w) == w * (v - u) && z * (m - w) == w * (m - v - z)) out.push_back({m, w, v, u, z});
      }
    }
  }
  return out;
}

double lgamma_ratio(const K2Cell& c) {
  const auto lf = [](double n) { return std::lgamma(n + 1.0); };
  const double log_phi = lf(c.w) + lf(c.m - c.w) - lf(c.m + 1);
  const double log_y = lf(c.u) + lf(c.v - c.u) + lf(c.z) + lf(c.m - c.v - c.z) - lf(c.v + 1) - lf(c.m - c.v + 1);
  return std::exp(log_phi - log_y);
}

}  // namespace

TEST_CASE("g_phi and g_y") {
  CHECK(g_phi(4, 2) == Rational(1, 30));
  CHECK(g_phi(2, 0) == Rational(1, 3));
  CHECK(g_phi(12, 6) == Rational(fact(6) * fact(6), fact(13)));
  CHECK(to_double(g_phi(12, 6)) == doctest::Approx(8.325e-5).epsilon(1e-3));
  CHECK(g_y({4, 2, 2, 1, 1}) == Rational(1, 36));
  CHECK(g_y({4, 2, 2, 2, 0}) == Rational(1, 9));
  for (std::int64_t m = 1; m <= 20; ++m) {
    for (std::int64_t w = 0; w <= m; ++w) CHECK(g_phi(m, w) == Rational(fact(w) * fact(m - w), fact(m + 1)));
  }
  CHECK(testing::throws_code(ErrorCode::InvalidCell, [] { (void)g_y({4, 2, 2, 3, 0}); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)g_phi(3, 4); }));
}

TEST_CASE("ratio r") {
  CHECK(ratio_r_exact({4, 2, 2, 1, 1}) == Rational(6, 5));
  CHECK(ratio_r({4, 2, 2, 1, 1}) == doctest::Approx(1.2));
  CHECK(ratio_r({12, 6, 6, 3, 3}) > 1.0);
  CHECK(testing::throws_code(ErrorCode::InvalidCell, [] { (void)ratio_r({12, 6, 6, 2, 4}); }));
  CHECK(testing::throws_code(ErrorCode::InvalidCell, [] { (void)ratio_r_exact({4, 2, 2, 2, 1}); }));
}

TEST_CASE("r' checkpoints and the crossing at m = 14") {
  CHECK(ratio_r_prime(14, 7, 2) == doctest::Approx(1.0096).epsilon(5e-4));
  CHECK(ratio_r_prime(12, 6, 2) == doctest::Approx(0.9855).epsilon(5e-4));
  CHECK(std::fabs(min_r_prime(14) - 1.0096) <= 5e-4);
  CHECK(std::fabs(min_r_prime(12) - 0.9855) <= 5e-4);
  CHECK(min_r_prime(13) < 1.0);
  CHECK(min_r_prime(14) > 1.0);
  for (double m = 4; m <= 60; ++m) CHECK(min_r_prime(m) == doctest::Approx(ratio_r_prime(m, m / 2, 2)));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)ratio_r_prime(12, 1, 2); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)ratio_r_prime(12, 6, 7); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)min_r_prime(3); }));
}

TEST_CASE("h factors increase in v") {
  for (double m : {8.0, 12.0, 20.0, 40.0, 64.0}) {
    for (double w = 2; w <= m / 2; w += 1) {
      HFactors prev = h_factors(m, w, 2.0);
      for (int i = 1; i < 100; ++i) {
        const double v = 2.0 + (m / 2 - 2.0) * i / 99.0;
        const auto h = h_factors(m, w, v);
        CHECK(h.h1 > prev.h1);
        CHECK(h.h2 > prev.h2);
        CHECK(h.h3 > prev.h3);
        CHECK(h_of_v(m, w, v) == doctest::Approx(h.product()));
        prev = h;
      }
    }
  }
  CHECK(testing::throws_code(ErrorCode::Domain, [] { (void)h_factors(10, 3, 0); }));
  CHECK(testing::throws_code(ErrorCode::Domain, [] { (void)h_factors(10, 3, 10); }));
}

TEST_CASE("independence cells match brute-force enumeration") {
  for (std::int64_t m = 4; m <= 40; ++m) {
    const auto cells = independence_cells(m);
    CHECK(cells == brute_cells(m));
    for (const auto& c : cells) {
      CHECK(c.feasible());
      CHECK(c.independent());
    }
  }
  const std::vector<K2Cell> four{{4, 2, 2, 1, 1}};
  CHECK(independence_cells(4) == four);
}

TEST_CASE("bound chain on every valid cell") {
  for (std::int64_t m = 4; m <= 48; ++m) {
    const double floor_r_prime = min_r_prime(double(m));
    for (const auto& c : independence_cells(m)) {
      CAPTURE(c.m);
      CAPTURE(c.w);
      CAPTURE(c.v);
      const double r = ratio_r(c);
      const double rp = ratio_r_prime(double(c.m), double(c.w), double(c.v));
      CHECK(r > rp);
      CHECK(rp >= floor_r_prime - 1e-12);
      CHECK(std::fabs(lgamma_ratio(c) / r - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("exhaustive minimum of r") {
  const auto r4 = exhaustive_min_r(4);
  CHECK(r4.cells_examined == 1);
  REQUIRE(r4.min_r);
  CHECK(*r4.min_r == doctest::Approx(1.2));
  CHECK(*r4.argmin == K2Cell{4, 2, 2, 1, 1});

  const auto r12 = exhaustive_min_r(12);
  REQUIRE(r12.min_r_exact);
  CHECK(*r12.min_r_exact == Rational(18, 13));
  CHECK(std::fabs(*r12.min_r - 1.3846) <= 1e-4);

  for (std::int64_t m = 4; m <= 13; ++m) {
    const auto r = exhaustive_min_r(m);
    CHECK(r.cells_examined == brute_cells(m).size());
    if (r.min_r) CHECK(*r.min_r_exact > 1);
  }
  for (std::int64_t prime : {5, 7, 11, 13}) CHECK_FALSE(exhaustive_min_r(prime).min_r);

  // The argmin is the smallest (w, v) among exact ties, whatever the thread count.
  for (std::int64_t m = 4; m <= 40; ++m) {
    const auto r = exhaustive_min_r(m);
    if (!r.min_r) continue;
    std::optional<K2Cell> first;
    for (const auto& c : brute_cells(m)) {
      if (ratio_r_exact(c) == *r.min_r_exact && !first) first = c;
    }
    CHECK(r.argmin == first);
  }
  setenv("PI_FORGE_THREADS", "1", 1);
  const auto serial = exhaustive_min_r(36);
  setenv("PI_FORGE_THREADS", "6", 1);
  const auto threaded = exhaustive_min_r(36);
  unsetenv("PI_FORGE_THREADS");
  CHECK(serial.argmin == threaded.argmin);
  CHECK(serial.min_r_exact == threaded.min_r_exact);

  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)exhaustive_min_r(3); }));
  CHECK(testing::throws_code(ErrorCode::InvalidArgument, [] { (void)exhaustive_min_r(65); }));
  CHECK(exhaustive_min_r(80, 100).m == 80);
}
