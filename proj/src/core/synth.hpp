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
#pragma once

// Seedable generator of labeled power-like traces. Staged classes emulate
// batch jobs (piecewise patterns of map/shuffle/reduce-like phases); the
// continuous class emulates a web server's fluctuating draw. Some staged
// classes share motifs so that distinct programs look partly alike.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"
#include "series.hpp"

namespace ltw {

enum class StageShape { Flat, Ramp, Oscillate, Spiky };

struct Stage {
  double duration_mean = 0;  // steps
  double duration_std = 0;
  double level_mean = 0;  // normalized watts
  double level_std = 0;
  StageShape shape = StageShape::Flat;
  double period = 0;     // Oscillate, Spiky
  double amplitude = 0;  // Oscillate, Spiky
  int motif = 0;         // 0 when the stage is not part of a shared motif

  friend bool operator==(const Stage&, const Stage&) = default;
};

struct ClassProfile {
  int class_id = 0;
  std::string name;
  bool continuous = false;
  std::vector<Stage> stages;   // expanded template, shared motifs inlined
  std::vector<int> motif_ids;  // motifs this class uses, in template order
  double noise_std = 0;
  double warp_intensity = 1;  // max local stretch factor
  std::size_t max_onset = 0;  // idle steps before the job starts
  std::size_t max_tail = 0;   // idle steps after it ends

  // Continuous profiles only.
  double length_mean = 0;
  double length_std = 0;
  double level_mean = 0;
  double level_std = 0;
  double fluctuation = 0;  // stationary std of the walk
  double smoothing = 0;    // AR(1) coefficient in [0, 1)

  friend bool operator==(const ClassProfile&, const ClassProfile&) = default;
};

inline constexpr double kIdleLevel = 1.0;
inline constexpr int kProfileBundleVersion = 1;

/// Throws InvalidArgument when a profile is inconsistent.
void validate_profile(const ClassProfile& profile);

/// The versioned 13-class bundle: 12 staged profiles and the continuous
/// web-server profile as class 12.
std::vector<ClassProfile> default_profiles();

/// Same classes with every source of randomness switched off: no noise, no
/// warping, fixed durations and levels, no onset or tail.
std::vector<ClassProfile> calm_profiles(std::span<const ClassProfile> profiles);

/// Text config, `key = value` lines in `[motif N]` and `[class N]` sections.
std::string format_profiles(std::span<const ClassProfile> profiles);
std::vector<ClassProfile> parse_profiles(std::string_view text);
std::vector<ClassProfile> load_profiles(const std::string& path);
void save_profiles(std::span<const ClassProfile> profiles, const std::string& path);

/// FNV-1a of the canonical text form.
std::uint64_t profiles_hash(std::span<const ClassProfile> profiles);

/// One trace of a class.
Series generate_trace(const ClassProfile& profile, std::size_t min_len, const std::string& source_id, Rng& rng);

/// traces_per_class traces per profile, source ids "c<class>-t<index>".
std::vector<Series> generate_corpus(std::span<const ClassProfile> profiles, std::size_t traces_per_class,
                                    std::size_t min_len, std::uint64_t seed);

}  // namespace ltw
