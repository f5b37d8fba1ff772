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
#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "distance.hpp"
#include "doctest.h"
#include "error.hpp"
#include "nn.hpp"
#include "random.hpp"
#include "synth.hpp"

using namespace ltw;

TEST_SUITE("synth") {
  TEST_CASE("default bundle shape") {
    auto profiles = default_profiles();
    REQUIRE(profiles.size() == 13);
    for (std::size_t c = 0; c < profiles.size(); ++c) {
      CHECK(profiles[c].class_id == static_cast<int>(c));
      CHECK_NOTHROW(validate_profile(profiles[c]));
    }
    CHECK(profiles[12].continuous);
    for (std::size_t c = 0; c < 12; ++c) {
      CHECK_FALSE(profiles[c].continuous);
      CHECK(profiles[c].stages.size() >= 2);
      CHECK(profiles[c].stages.size() <= 6);
    }
  }

  TEST_CASE("three program pairs share two motifs") {
    auto profiles = default_profiles();
    std::map<std::set<int>, std::vector<int>> by_motifs;
    for (const auto& p : profiles)
      if (!p.motif_ids.empty()) by_motifs[std::set<int>(p.motif_ids.begin(), p.motif_ids.end())].push_back(p.class_id);
    int shared_pairs = 0;
    for (const auto& [motifs, classes] : by_motifs) {
      if (classes.size() < 2) continue;
      CHECK(classes.size() == 2);
      CHECK(motifs.size() == 2);
      ++shared_pairs;
    }
    CHECK(shared_pairs == 3);
  }

  TEST_CASE("bundle text round trips and its hash is pinned") {
    auto profiles = default_profiles();
    CHECK(parse_profiles(format_profiles(profiles)) == profiles);
    CHECK(profiles_hash(profiles) == profiles_hash(parse_profiles(format_profiles(profiles))));
    CHECK(profiles_hash(profiles) == 0x9e2a36e075628748ull);  // bundle version 1
    auto changed = profiles;
    changed[3].noise_std += 0.01;
    CHECK(profiles_hash(changed) != profiles_hash(profiles));
  }

  TEST_CASE("bundle file round trip") {
    auto path = (std::filesystem::temp_directory_path() / "ltwkit_profiles_test.txt").string();
    save_profiles(default_profiles(), path);
    CHECK(load_profiles(path) == default_profiles());
    std::filesystem::remove(path);
  }

  TEST_CASE("invalid bundles are rejected") {
    CHECK_THROWS_AS(parse_profiles("[class 0]\nstage = 10 1 1.0 0.1 wobble\n"), Error);
    CHECK_THROWS_AS(parse_profiles("[class 0]\nmotif = 99\n"), Error);
    CHECK_THROWS_AS(parse_profiles("[class 0]\nnoise = -1\nstage = 10 1 1 0 flat\nstage = 10 1 1 0 flat\n"), Error);
    CHECK_THROWS_AS(parse_profiles("version = 2\n"), Error);
    CHECK_THROWS_AS(parse_profiles("[class 0]\nunknown_key = 1\n"), Error);
  }

  TEST_CASE("calm profiles repeat exactly") {
    auto calm = calm_profiles(default_profiles());
    for (const auto& p : calm) {
      Rng a(1), b(99);
      auto x = generate_trace(p, 220, "x", a);
      auto y = generate_trace(p, 220, "y", b);
      CHECK(x.size() >= 220);
      CHECK(std::vector<double>(x.values().begin(), x.values().end()) ==
            std::vector<double>(y.values().begin(), y.values().end()));
    }
  }

  TEST_CASE("corpus is deterministic, labeled and long enough") {
    auto profiles = default_profiles();
    auto a = generate_corpus(profiles, 5, 220, 42);
    auto b = generate_corpus(profiles, 5, 220, 42);
    CHECK(a == b);
    CHECK(a.size() == 65);
    std::set<std::string> ids;
    for (const auto& t : a) {
      CHECK(t.size() >= 220);
      CHECK(t.label().has_value());
      ids.insert(t.source_id());
    }
    CHECK(ids.size() == a.size());
    CHECK(a[7].source_id() == "c1-t2");
    CHECK(generate_corpus(profiles, 5, 220, 43) != a);
  }

  TEST_CASE("corpus needs enough traces per class") {
    CHECK_THROWS_AS(generate_corpus(default_profiles(), 2, 220, 1), Error);
  }

  TEST_CASE("noise and warping leave nearest neighbour mostly intact") {
    auto corpus = generate_corpus(default_profiles(), 6, 220, 5);
    std::vector<Series> windows;
    for (const auto& t : corpus) windows.push_back(t.slice(0, 200));
    Dataset ds = Dataset::from_windows(windows);
    auto spec = DistanceSpec::parse("dtw:w=30");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      auto d = distances_to(ds[i].values(), ds, spec);
      d[i] = 1e300;
      correct += ds.label_of(select_neighbors(d, 1).front().index) == ds.label_of(i);
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(ds.size()) > 0.7);
  }
}
