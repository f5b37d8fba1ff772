/*
 * Copyright 2026 The ltwkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <random>

#include "distance.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"

using namespace ltw;
using oracle::Vec;

namespace {

Vec random_ints(std::mt19937_64& gen, std::size_t n, int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  Vec v(n);
  for (auto& e : v) e = d(gen);
  return v;
}

}  // namespace

TEST_SUITE("dtw") {
  TEST_CASE("self distance is zero") {
    std::mt19937_64 gen(1);
    auto x = oracle::random_vec(gen, 50, -3, 3);
    for (std::size_t w : {0u, 1u, 10u, 50u}) CHECK(dtw(x, x, w) == 0.0);
    CHECK(dtw(x, x, std::nullopt) == 0.0);
  }

  TEST_CASE("hand evaluated table") {
    CHECK(dtw(Vec{0, 0}, Vec{1, 1}, 2, PointCost::Abs) == 2.0);
    CHECK(dtw(Vec{0, 0}, Vec{1, 1}, 2, PointCost::Squared) == 2.0);
    CHECK(dtw(Vec{0, 1, 2}, Vec{0, 2, 2}, 1, PointCost::Abs) == 1.0);
  }

  TEST_CASE("window zero is the pointwise sum") {
    std::mt19937_64 gen(2);
    auto x = oracle::random_vec(gen, 30, 0, 1), y = oracle::random_vec(gen, 30, 0, 1);
    double sq = 0;
    for (std::size_t i = 0; i < 30; ++i) sq += (x[i] - y[i]) * (x[i] - y[i]);
    CHECK(dtw(x, y, 0) == doctest::Approx(sq).epsilon(1e-12));
  }

  TEST_CASE("matches the recursion oracle with and without a band") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + gen() % 6;
      auto x = random_ints(gen, n, 3), y = random_ints(gen, n, 3);
      const long w = static_cast<long>(gen() % n);
      const bool sq = gen() % 2;
      const auto cost = sq ? PointCost::Squared : PointCost::Abs;
      CHECK(dtw(x, y, static_cast<std::size_t>(w), cost) == oracle::dtw(x, y, w, sq));
      CHECK(dtw(x, y, std::nullopt, cost) == oracle::dtw(x, y, -1, sq));
    }
  }

  TEST_CASE("matches a full-table reference on longer series") {
    std::mt19937_64 gen(13);
    for (int t = 0; t < 400; ++t) {
      const std::size_t n = 1 + gen() % 41;
      auto x = oracle::random_vec(gen, n, -2.0, 2.0), y = oracle::random_vec(gen, n, -2.0, 2.0);
      const long w = static_cast<long>(gen() % (n + 1));
      const bool sq = gen() % 2;
      const auto cost = sq ? PointCost::Squared : PointCost::Abs;
      CHECK(dtw(x, y, static_cast<std::size_t>(w), cost) == oracle::dtw_table(x, y, w, sq));
      CHECK(dtw(x, y, std::nullopt, cost) == oracle::dtw_table(x, y, -1, sq));
    }
  }

  TEST_CASE("is symmetric and shrinks as the band widens") {
    std::mt19937_64 gen(4);
    for (int t = 0; t < 50; ++t) {
      auto x = oracle::random_vec(gen, 40, -1, 1), y = oracle::random_vec(gen, 40, -1, 1);
      CHECK(dtw(x, y, 5) == dtw(y, x, 5));
      CHECK(dtw(x, y, 10) <= dtw(x, y, 5));
      CHECK(dtw(x, y, std::nullopt) <= dtw(x, y, 10));
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(dtw(Vec{1, 2}, Vec{1}, 1), Error);
    CHECK_THROWS_AS(dtw(Vec{1, 2}, Vec{1, 2}, 3), Error);
    CHECK_THROWS_AS(dtw(Vec{}, Vec{}, std::nullopt), Error);
  }
}

TEST_SUITE("ltw") {
  TEST_CASE("non-commutativity witness") {
    const Vec x{0, 2, 0, 0}, y{0, 0, 2, 0};
    CHECK(ltw_k(x, y, 1) == 0.0);
    CHECK(ltw_k(y, x, 1) == 2.0);
    const auto g = WarpIndexSet::parse("1");
    CHECK(ltw_com(x, y, g) == 2.0);
    CHECK(ltw_com(y, x, g) == 2.0);
  }

  TEST_CASE("self distance is zero") {
    std::mt19937_64 gen(5);
    auto x = oracle::random_vec(gen, 200, -5, 5);
    CHECK(ltw::ltw(x, x, WarpIndexSet::range(1, 10)) == 0.0);
    CHECK(ltw_com(x, x, WarpIndexSet::range(1, 10)) == 0.0);
  }

  TEST_CASE("matches the literal evaluator") {
    std::mt19937_64 gen(6);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 3 + gen() % 60;
      auto x = oracle::random_vec(gen, n, -2, 2), y = oracle::random_vec(gen, n, -2, 2);
      const std::size_t kmax = (n - 1) / 2;
      const std::size_t k = 1 + gen() % kmax;
      CHECK(ltw_k(x, y, k) == oracle::ltw_term(x, y, k));
    }
  }

  TEST_CASE("singleton reduction and additivity") {
    std::mt19937_64 gen(7);
    auto x = oracle::random_vec(gen, 100, 0, 1), y = oracle::random_vec(gen, 100, 0, 1);
    CHECK(ltw::ltw(x, y, WarpIndexSet({7})) == ltw_k(x, y, 7));
    const double whole = ltw::ltw(x, y, WarpIndexSet::parse("1-4+8"));
    const double parts = ltw::ltw(x, y, WarpIndexSet::range(1, 4)) + ltw::ltw(x, y, WarpIndexSet({8}));
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
  }

  TEST_CASE("bounded by the pointwise distance") {
    std::mt19937_64 gen(8);
    auto x = oracle::random_vec(gen, 80, 0, 1), y = oracle::random_vec(gen, 80, 0, 1);
    double pointwise = 0;
    for (std::size_t i = 0; i < 80; ++i) pointwise += std::abs(x[i] - y[i]);
    CHECK(ltw_k(x, y, 3) <= pointwise);
  }

  TEST_CASE("commutative variant is symmetric") {
    std::mt19937_64 gen(9);
    for (int t = 0; t < 20; ++t) {
      auto x = oracle::random_vec(gen, 60, 0, 1), y = oracle::random_vec(gen, 60, 0, 1);
      CHECK(ltw_com(x, y, WarpIndexSet::range(1, 10)) == ltw_com(y, x, WarpIndexSet::range(1, 10)));
    }
  }

  TEST_CASE("offset range errors") {
    CHECK_THROWS_AS(ltw_k(Vec{1, 2, 3}, Vec{1, 2, 3}, 2), Error);
    CHECK_THROWS_AS(ltw_k(Vec{1, 2, 3}, Vec{1, 2, 3}, 0), Error);
    CHECK_NOTHROW(ltw_k(Vec{1, 2, 3}, Vec{1, 2, 3}, 1));
    CHECK_THROWS_AS(ltw_k(Vec{1, 2, 3}, Vec{1, 2}, 1), Error);
  }
}

TEST_SUITE("warp index set") {
  TEST_CASE("parsing and printing") {
    CHECK(WarpIndexSet::parse("1-10").offsets() == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(WarpIndexSet::parse("1-4+8").offsets() == std::vector<std::size_t>{1, 2, 3, 4, 8});
    CHECK(WarpIndexSet::parse("5,1,2-3,2").offsets() == std::vector<std::size_t>{1, 2, 3, 5});
    CHECK(WarpIndexSet::parse("1,2,3,5,7,8").to_string() == "1-3+5+7-8");
    CHECK(WarpIndexSet::parse("10").to_string() == "10");
  }

  TEST_CASE("invalid sets") {
    CHECK_THROWS_AS(WarpIndexSet::parse(""), Error);
    CHECK_THROWS_AS(WarpIndexSet::parse("0-3"), Error);
    CHECK_THROWS_AS(WarpIndexSet::parse("4-2"), Error);
    CHECK_THROWS_AS(WarpIndexSet::parse("a"), Error);
    CHECK_THROWS_AS(WarpIndexSet(std::vector<std::size_t>{}), Error);
  }
}

TEST_SUITE("lb_keogh") {
  TEST_CASE("zero inside the envelope") {
    const Vec y{0, 1, 2, 1, 0};
    const Vec x{0.5, 1.5, 1.5, 1.5, 0.5};
    CHECK(lb_keogh(x, y, 1) == 0.0);
    CHECK(lb_keogh(y, y, 0) == 0.0);
  }

  TEST_CASE("lower bounds dtw with matching cost") {
    std::mt19937_64 gen(10);
    for (int t = 0; t < 200; ++t) {
      auto x = oracle::random_vec(gen, 64, -1, 1), y = oracle::random_vec(gen, 64, -1, 1);
      for (std::size_t w : {0u, 3u, 10u}) {
        CHECK(lb_keogh(x, y, w, PointCost::Squared) <= dtw(x, y, w, PointCost::Squared) + 1e-12);
        CHECK(lb_keogh(x, y, w, PointCost::Abs) <= dtw(x, y, w, PointCost::Abs) + 1e-12);
      }
    }
  }

  TEST_CASE("envelope from a brute-force window scan") {
    std::mt19937_64 gen(11);
    auto x = oracle::random_vec(gen, 40, -1, 1), y = oracle::random_vec(gen, 40, -1, 1);
    const std::size_t w = 4;
    double expected = 0;
    for (std::size_t i = 0; i < 40; ++i) {
      double lo = y[i], hi = y[i];
      for (std::size_t j = (i >= w ? i - w : 0); j <= std::min<std::size_t>(39, i + w); ++j) {
        lo = std::min(lo, y[j]);
        hi = std::max(hi, y[j]);
      }
      if (x[i] > hi) expected += (x[i] - hi) * (x[i] - hi);
      if (x[i] < lo) expected += (lo - x[i]) * (lo - x[i]);
    }
    CHECK(lb_keogh(x, y, w) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("window must be shorter than the series") {
    CHECK_THROWS_AS(lb_keogh(Vec{1, 2}, Vec{1, 2}, 2), Error);
  }
}

TEST_SUITE("msm") {
  TEST_CASE("self distance and simple cases") {
    CHECK(msm(Vec{1, 2, 3}, Vec{1, 2, 3}, 1.0) == 0.0);
    CHECK(msm(Vec{0}, Vec{3}, 1.0) == 3.0);
    CHECK(msm(Vec{1}, Vec{1, 1}, 0.5) == 0.5);   // one split
    CHECK(msm(Vec{1, 1}, Vec{1}, 0.5) == 0.5);   // one merge
  }

  TEST_CASE("matches the edit-script oracle on short series") {
    const Vec alphabet{0, 1, 2};
    std::mt19937_64 gen(12);
    for (int t = 0; t < 30; ++t) {
      auto x = random_ints(gen, 1 + gen() % 3, 2);
      auto targets = oracle::msm_all_targets(x, alphabet, 5, 1.0);
      auto y = random_ints(gen, 1 + gen() % 3, 2);
      CHECK(msm(x, y, 1.0) == targets.at(y));
    }
  }

  TEST_CASE("is symmetric and a metric on samples") {
    std::mt19937_64 gen(13);
    for (int t = 0; t < 40; ++t) {
      auto x = oracle::random_vec(gen, 12, 0, 3), y = oracle::random_vec(gen, 9, 0, 3),
           z = oracle::random_vec(gen, 10, 0, 3);
      CHECK(msm(x, y, 0.7) == doctest::Approx(msm(y, x, 0.7)));
      CHECK(msm(x, z, 0.7) <= msm(x, y, 0.7) + msm(y, z, 0.7) + 1e-9);
    }
  }

  TEST_CASE("cost must be positive") {
    CHECK_THROWS_AS(msm(Vec{1}, Vec{1}, 0.0), Error);
    CHECK_THROWS_AS(msm(Vec{}, Vec{1}, 1.0), Error);
  }
}

TEST_SUITE("cid") {
  TEST_CASE("complexity estimate") {
    CHECK(complexity_estimate(Vec{4, 4, 4}) == 0.0);
    CHECK(complexity_estimate(Vec{0, 3, 0}) == std::sqrt(18.0));
    std::mt19937_64 gen(14);
    auto x = oracle::random_vec(gen, 30, -1, 1);
    Vec scaled = x;
    for (auto& v : scaled) v *= -2.5;
    CHECK(complexity_estimate(scaled) == doctest::Approx(2.5 * complexity_estimate(x)));
    CHECK(complexity_estimate(x) == doctest::Approx(oracle::complexity(x)));
  }

  TEST_CASE("enhancement never shrinks and is neutral for equal complexity") {
    std::mt19937_64 gen(15);
    for (int t = 0; t < 100; ++t) {
      auto x = oracle::random_vec(gen, 20, -1, 1), y = oracle::random_vec(gen, 20, -3, 3);
      CHECK(cid_enhance(2.5, x, y) >= 2.5);
      Vec mirrored = x;  // same squared differences in the same order
      for (auto& v : mirrored) v = -v;
      CHECK(cid_enhance(2.5, x, mirrored) == 2.5);
    }
    CHECK(cid_enhance(1.5, Vec{1, 1, 1}, Vec{2, 2, 2}) == 1.5);
  }
}

TEST_SUITE("distance spec") {
  TEST_CASE("parses the documented forms") {
    auto d = DistanceSpec::parse("dtw:w=30:cost=sq");
    CHECK(d.kind == DistanceKind::Dtw);
    CHECK(d.window == 30u);
    CHECK(d.cost == PointCost::Squared);
    CHECK(d.to_string() == "dtw:w=30:cost=sq");
    CHECK(DistanceSpec::parse("dtw:w=30").to_string() == "dtw:w=30:cost=sq");
    CHECK(DistanceSpec::parse("dtwm:w=5").cost == PointCost::Abs);
    CHECK(DistanceSpec::parse("dtw_manhattan:w=5") == DistanceSpec::parse("dtw:w=5:cost=abs"));
    CHECK(DistanceSpec::parse("ltw:G=1-10:cid").to_string() == "ltw:G=1-10:cid");
    CHECK(DistanceSpec::parse("ltw_com:G=1-10") == DistanceSpec::parse("ltwcom:G=1-10"));
    CHECK(DistanceSpec::parse("lbk:w=5").kind == DistanceKind::LbKeogh);
    CHECK(DistanceSpec::parse("msm:c=1.0").msm_cost == 1.0);
    CHECK(DistanceSpec::parse("euclidean") == DistanceSpec::parse("ed"));
  }

  TEST_CASE("canonical text round trips") {
    for (const char* s : {"dtw:w=30:cost=sq", "dtw:cost=abs", "ltw:G=1-4+8", "ltwcom:G=10:cid", "lbk:w=5:cost=abs",
                          "msm:c=0.5", "ed:cid"}) {
      auto spec = DistanceSpec::parse(s);
      CHECK(DistanceSpec::parse(spec.to_string()) == spec);
    }
  }

  TEST_CASE("rejects unknown kinds, keys and missing parameters") {
    for (const char* s : {"foo", "dtw:q=1", "ltw", "ltw:w=3:G=1", "lbk", "msm", "msm:c=-1", "dtw:w=-2", "dtw:cost=l1",
                          "ed:G=1", "dtw:w=abc"}) {
      CAPTURE(s);
      CHECK_THROWS_AS(DistanceSpec::parse(s), Error);
    }
  }

  TEST_CASE("evaluation composes kernels") {
    std::mt19937_64 gen(16);
    auto x = oracle::random_vec(gen, 200, 0, 1), y = oracle::random_vec(gen, 200, 0, 1);
    CHECK(evaluate(DistanceSpec::parse("ed"), x, x) == 0.0);
    CHECK(evaluate(DistanceSpec::parse("ltw:G=10:cid"), x, y) == cid_enhance(ltw::ltw(x, y, WarpIndexSet({10})), x, y));
    CHECK(evaluate(DistanceSpec::parse("dtw:w=30"), x, y) == dtw(x, y, 30, PointCost::Squared));
    CHECK(evaluate(DistanceSpec::parse("msm:c=1"), x, y) == msm(x, y, 1.0));
    CHECK(evaluate(DistanceSpec::parse("ltwcom:G=1-3"), x, y) == ltw_com(x, y, WarpIndexSet::range(1, 3)));
  }

  TEST_CASE("commutativity flags") {
    CHECK_FALSE(DistanceSpec::parse("ltw:G=1").commutative());
    CHECK(DistanceSpec::parse("ltwcom:G=1").commutative());
    CHECK(DistanceSpec::parse("dtw:w=3").commutative());
    CHECK_FALSE(DistanceSpec::parse("lbk:w=3").commutative());
  }

  TEST_CASE("validation against a window length") {
    CHECK_THROWS_AS(DistanceSpec::parse("ltw:G=1-12").validate(20), Error);
    CHECK_NOTHROW(DistanceSpec::parse("ltw:G=1-12").validate(200));
    CHECK_THROWS_AS(DistanceSpec::parse("dtw:w=300").validate(200), Error);
  }
}
