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
#include <numeric>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "hybrid.hpp"
#include "nn.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace ltw;
using oracle::Vec;

namespace {

Dataset one_per_class(std::size_t classes, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Series> w;
  for (std::size_t c = 0; c < classes; ++c)
    w.emplace_back(oracle::random_vec(gen, n, 0, 1), static_cast<int>(c), "t" + std::to_string(c));
  return Dataset(std::move(w), classes);
}

Dataset labeled(const std::vector<int>& labels, std::size_t classes) {
  std::vector<Series> w;
  for (std::size_t i = 0; i < labels.size(); ++i)
    w.emplace_back(Vec{static_cast<double>(i), 0.0, 1.0}, labels[i], "t" + std::to_string(i));
  return Dataset(std::move(w), classes);
}

double sum(const Vec& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

TEST_SUITE("nearest neighbour") {
  TEST_CASE("copy of a training window is its own nearest neighbour") {
    auto train = one_per_class(6, 40, 1);
    for (const char* s : {"ed", "dtw:w=5", "ltw:G=1-10", "ltwcom:G=1-10:cid", "lbk:w=5", "msm:c=1"}) {
      CAPTURE(s);
      auto spec = DistanceSpec::parse(s);
      auto nb = nearest_neighbors(train[3].values(), train, spec, 2);
      CHECK(nb.front().index == 3);
      CHECK(nb.front().distance == 0.0);
      CHECK(classify_1nn(train[3].values(), train, spec) == 3);
    }
  }

  TEST_CASE("ties go to the lower training index") {
    const Vec d{2.0, 1.0, 1.0, 0.5, 0.5};
    auto nb = select_neighbors(d, 4);
    CHECK(nb[0].index == 3);
    CHECK(nb[1].index == 4);
    CHECK(nb[2].index == 1);
    CHECK(nb[3].index == 2);
  }

  TEST_CASE("neighbour count is validated") {
    const Vec d{1.0, 2.0};
    CHECK_THROWS_AS(select_neighbors(d, 0), Error);
    CHECK_THROWS_AS(select_neighbors(d, 3), Error);
  }

  TEST_CASE("rank-weighted vote from the hand example") {
    auto train = labeled({2, 2, 7, 2, 7}, 8);
    NeighborList nb;
    for (std::size_t i = 0; i < 5; ++i) nb.push_back({i, static_cast<double>(i)});
    auto p = rank_weighted_vote(nb, train);
    CHECK(p[2] == doctest::Approx(0.8));
    CHECK(p[7] == doctest::Approx(0.2));
    CHECK(sum(p) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("two neighbours give a one-hot vote on the nearest") {
    auto train = labeled({4, 1}, 5);
    auto p = rank_weighted_vote({{1, 0.1}, {0, 0.2}}, train);
    CHECK(p == Vec{0, 1, 0, 0, 0});
  }

  TEST_CASE("argmax of the m=2 vote equals the 1nn decision") {
    std::mt19937_64 gen(2);
    std::vector<Series> w;
    for (int i = 0; i < 30; ++i) w.emplace_back(oracle::random_vec(gen, 25, 0, 1), i % 4, "t" + std::to_string(i));
    Dataset train(std::move(w), 4);
    auto spec = DistanceSpec::parse("ltw:G=1-5:cid");
    for (int q = 0; q < 40; ++q) {
      auto query = oracle::random_vec(gen, 25, 0, 1);
      CHECK(static_cast<int>(argmax(prob_vector_knn(query, train, spec, 2))) == classify_1nn(query, train, spec));
    }
  }

  TEST_CASE("vote needs at least two neighbours") {
    auto train = labeled({0, 1}, 2);
    CHECK_THROWS_AS(rank_weighted_vote({{0, 0.0}}, train), Error);
  }

  TEST_CASE("distances are query first") {
    auto train = labeled({0}, 1);
    const Vec q{0, 2, 0, 0};
    std::vector<Series> w{Series(Vec{0, 0, 2, 0}, 0, "y")};
    Dataset ds(std::move(w), 1);
    CHECK(distances_to(q, ds, DistanceSpec::parse("ltw:G=1")) == Vec{0.0});
  }

  TEST_CASE("argmax prefers the lowest index") {
    CHECK(argmax(Vec{0.2, 0.4, 0.4}) == 1);
    CHECK(argmax(Vec{1.0}) == 0);
    CHECK_THROWS_AS(argmax(Vec{}), Error);
  }
}

TEST_SUITE("hybrid") {
  TEST_CASE("agreeing components") {
    Vec a(13, 0.0), b(13, 0.0);
    a[4] = b[4] = 1.0;
    CHECK(fuse(a, b) == 4);
  }

  TEST_CASE("a confident lstm overrides a split vote") {
    Vec p_ltw(13, 0.0), p_lstm(13, 0.1 / 12);
    p_ltw[2] = 0.8;
    p_ltw[7] = 0.2;
    p_lstm[7] = 0.9;
    CHECK(fuse(p_ltw, p_lstm) == 7);
  }

  TEST_CASE("exact ties resolve to the lower class") {
    CHECK(fuse(Vec{0.5, 0.5}, Vec{0.5, 0.5}) == 0);
    CHECK(fuse(Vec{0.0, 0.6, 0.4}, Vec{0.2, 0.2, 0.4}) == 1);
  }

  TEST_CASE("matches the literal rule on random and tied vectors") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 2000; ++t) {
      Vec a(13), b(13);
      std::uniform_int_distribution<int> q(0, 3);
      for (auto& v : a) v = t % 2 ? q(gen) / 10.0 : std::uniform_real_distribution<double>(0, 1)(gen);
      for (auto& v : b) v = t % 2 ? q(gen) / 10.0 : std::uniform_real_distribution<double>(0, 1)(gen);
      CHECK(fuse(a, b) == oracle::fuse(a, b));
    }
  }

  TEST_CASE("fusion can recover a class neither component ranks first") {
    const Vec from_distance{0.5, 0.05, 0.45};
    const Vec from_network{0.05, 0.5, 0.45};
    CHECK(argmax(from_distance) == 0);
    CHECK(argmax(from_network) == 1);
    CHECK(fuse(from_distance, from_network) == 2);
  }

  TEST_CASE("mismatched vectors are rejected") {
    CHECK_THROWS_AS(fuse(Vec{1.0}, Vec{0.5, 0.5}), Error);
    CHECK_THROWS_AS(fuse(Vec{}, Vec{}), Error);
  }

  TEST_CASE("component fusion keeps both vectors and all decisions") {
    auto train = labeled({1, 0, 1, 2, 0}, 3);
    const Vec distances{0.3, 0.1, 0.2, 0.9, 0.5};
    auto r = fuse_components(distances, train, 5, Vec{0.1, 0.1, 0.8});
    CHECK(r.pred_ltw == 0);  // nearest is index 1
    CHECK(r.pred_lstm == 2);
    // Rank weights 4, 3, 2, 1, 0 over ten go to labels 0, 1, 1, 0, 2.
    REQUIRE(r.p_ltw.size() == 3);
    CHECK(r.p_ltw[0] == doctest::Approx(0.5));
    CHECK(r.p_ltw[1] == doctest::Approx(0.5));
    CHECK(r.p_ltw[2] == 0.0);
    CHECK(r.pred_hybrid == 2);
    CHECK(r.pred_hybrid == oracle::fuse(r.p_ltw, r.p_lstm));
    CHECK(sum(r.p_ltw) == doctest::Approx(1.0));
    CHECK_THROWS_AS(fuse_components(distances, train, 5, Vec{0.5, 0.5}), Error);
  }

  TEST_CASE("end to end with an untrained network follows the vote") {
    auto train = one_per_class(4, 30, 5);
    LstmModel model;
    model.params = LstmParams::zeros(3, 4);
    HybridConfig cfg;
    cfg.m_neighbors = 3;
    for (std::size_t i = 0; i < train.size(); ++i) CHECK(hybrid_classify(train[i].values(), train, cfg, model) == train.label_of(i));
  }

  TEST_CASE("batch audit ids, labels and normalization") {
    auto train = one_per_class(4, 30, 6);
    Rng rng(1);
    LstmModel model;
    model.params = LstmParams::uniform(3, 4, 0.5, rng);
    HybridConfig cfg;
    auto queries = one_per_class(4, 30, 7);
    HybridConfig three = cfg;
    three.m_neighbors = 3;
    auto audit = hybrid_classify_batch(queries, train, three, model);
    REQUIRE(audit.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(audit[i].query_id == "t" + std::to_string(i) + "#" + std::to_string(i));
      CHECK(audit[i].true_label == static_cast<int>(i));
      CHECK(sum(audit[i].p_ltw) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(sum(audit[i].p_lstm) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(audit[i].pred_hybrid == oracle::fuse(audit[i].p_ltw, audit[i].p_lstm));
    }
    CHECK(parse_audit_csv(format_audit_csv(audit)) == audit);
  }

  TEST_CASE("component failures are attributed") {
    auto train = one_per_class(4, 10, 8);
    LstmModel model;
    model.params = LstmParams::zeros(2, 4);
    HybridConfig cfg;  // G = 1..10 does not fit windows of length 10
    try {
      hybrid_classify(train[0].values(), train, cfg, model);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("nearest-neighbour component") != std::string::npos);
    }
    LstmModel wrong;
    wrong.params = LstmParams::zeros(2, 5);
    cfg.ltw_spec = DistanceSpec::parse("ed");
    CHECK_THROWS_AS(hybrid_classify(train[0].values(), train, cfg, wrong), Error);
  }

  TEST_CASE("audit csv rejects malformed rows") {
    CHECK_THROWS_AS(parse_audit_csv("query_id,true_label,pred_ltw,pred_lstm,pred_hybrid,p_ltw_0,p_lstm_0\nq,0,0,0\n"),
                    Error);
    CHECK(parse_audit_csv("query_id,true_label,pred_ltw,pred_lstm,pred_hybrid\n").empty());
  }
}
