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
#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "error.hpp"
#include "text.hpp"

namespace ltw {
namespace {

// Version 1 of the default bundle. Classes 0-2 (Spark) and 9-11 (Hadoop)
// run the same three programs and share two motifs per program; classes 3-8
// are iterative library jobs; class 12 is the web server.
constexpr std::string_view kDefaultBundle = R"(# ltwkit synthetic class profiles
version = 1

# stage = duration_mean duration_std level_mean level_std shape [period amplitude]

[motif 1]
stage = 50 6 2.5 0.06 osc 10 0.3

[motif 2]
stage = 30 4 2.2 0.05 ramp

[motif 3]
stage = 40 5 2.1 0.05 spiky 7 0.5

[motif 4]
stage = 55 6 2.8 0.06 ramp

[motif 5]
stage = 60 6 2.9 0.06 flat

[motif 6]
stage = 30 4 1.9 0.05 osc 15 0.25

[class 0]
name = spark-wordcount
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
motif = 1
stage = 40 5 2.0 0.05 spiky 5 0.3
motif = 2
stage = 45 5 2.3 0.05 osc 20 0.15

[class 1]
name = spark-sort
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
motif = 3
stage = 35 5 2.6 0.05 flat
motif = 4
stage = 40 5 1.9 0.05 osc 8 0.2

[class 2]
name = spark-pi
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
motif = 5
stage = 45 5 2.2 0.05 spiky 9 0.4
motif = 6
stage = 35 5 2.7 0.05 ramp

[class 3]
name = spark-crossvalidator
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 35 4 2.4 0.05 flat
stage = 20 3 1.7 0.04 flat
stage = 35 4 2.4 0.05 flat
stage = 20 3 1.7 0.04 flat
stage = 50 5 2.9 0.05 osc 12 0.2

[class 4]
name = spark-kmeans
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 150 12 2.2 0.06 osc 25 0.4
stage = 40 5 1.5 0.04 ramp
stage = 50 6 2.6 0.05 flat

[class 5]
name = spark-lr
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 30 4 2.0 0.05 flat
stage = 120 10 2.7 0.06 ramp
stage = 60 6 2.3 0.05 spiky 6 0.35

[class 6]
name = spark-svm
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 70 6 2.6 0.05 osc 12 0.3
stage = 25 3 1.8 0.04 flat
stage = 70 6 2.6 0.05 osc 12 0.3
stage = 40 5 2.1 0.05 ramp

[class 7]
name = spark-cosine
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 100 8 3.0 0.06 flat
stage = 80 8 1.8 0.05 spiky 4 0.6
stage = 40 5 2.4 0.05 flat

[class 8]
name = spark-pca
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 25 4 1.6 0.04 flat
stage = 50 5 2.8 0.05 flat
stage = 50 5 2.4 0.05 flat
stage = 50 5 2.0 0.05 flat
stage = 50 5 1.6 0.05 flat

[class 9]
name = hadoop-wordcount
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 45 5 1.3 0.04 spiky 4 0.3
motif = 1
stage = 50 6 1.7 0.05 ramp
motif = 2
stage = 35 5 2.0 0.05 flat

[class 10]
name = hadoop-sort
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 45 5 1.3 0.04 spiky 4 0.3
motif = 3
stage = 50 6 2.4 0.05 osc 18 0.3
motif = 4
stage = 30 4 1.5 0.05 ramp

[class 11]
name = hadoop-pi
noise = 0.05
warp = 1.3
onset = 40
tail = 40
stage = 45 5 1.3 0.04 spiky 4 0.3
motif = 5
stage = 40 5 2.0 0.05 flat
motif = 6
stage = 45 5 1.7 0.05 osc 10 0.35

[class 12]
name = web-server
continuous = 1
noise = 0.05
warp = 1.3
length = 380 60
level = 1.9 0.15
fluctuation = 0.25
smoothing = 0.92
)";

std::string_view shape_name(StageShape s) {
  switch (s) {
    case StageShape::Flat: return "flat";
    case StageShape::Ramp: return "ramp";
    case StageShape::Oscillate: return "osc";
    case StageShape::Spiky: return "spiky";
  }
  return "flat";
}

StageShape parse_shape(std::string_view s) {
  if (s == "flat") return StageShape::Flat;
  if (s == "ramp") return StageShape::Ramp;
  if (s == "osc") return StageShape::Oscillate;
  if (s == "spiky") return StageShape::Spiky;
  fail(ErrorCode::Parse, "unknown stage shape '" + std::string(s) + "'");
}

bool periodic(StageShape s) { return s == StageShape::Oscillate || s == StageShape::Spiky; }

Stage parse_stage(std::string_view value) {
  std::vector<std::string_view> f;
  for (auto tok : text::split(value, ' '))
    if (!text::trim(tok).empty()) f.push_back(text::trim(tok));
  if (f.size() < 5) fail(ErrorCode::Parse, "stage needs at least 5 fields");
  Stage s;
  s.duration_mean = text::parse_double(f[0]);
  s.duration_std = text::parse_double(f[1]);
  s.level_mean = text::parse_double(f[2]);
  s.level_std = text::parse_double(f[3]);
  s.shape = parse_shape(f[4]);
  if (periodic(s.shape)) {
    if (f.size() != 7) fail(ErrorCode::Parse, "periodic stage needs period and amplitude");
    s.period = text::parse_double(f[5]);
    s.amplitude = text::parse_double(f[6]);
  } else if (f.size() != 5) {
    fail(ErrorCode::Parse, "non-periodic stage takes exactly 5 fields");
  }
  return s;
}

std::string format_stage(const Stage& s) {
  std::string out = text::format_double(s.duration_mean) + ' ' + text::format_double(s.duration_std) + ' ' +
                    text::format_double(s.level_mean) + ' ' + text::format_double(s.level_std) + ' ' +
                    std::string(shape_name(s.shape));
  if (periodic(s.shape)) out += ' ' + text::format_double(s.period) + ' ' + text::format_double(s.amplitude);
  return out;
}

std::pair<double, double> parse_pair(std::string_view value) {
  std::vector<std::string_view> f;
  for (auto tok : text::split(value, ' '))
    if (!text::trim(tok).empty()) f.push_back(tok);
  if (f.size() != 2) fail(ErrorCode::Parse, "expected two numbers");
  return {text::parse_double(f[0]), text::parse_double(f[1])};
}

// Piecewise-linear resampling of the time axis: every segment of the output
// advances through the input at a rate drawn log-uniformly from
// [1/intensity, intensity].
std::vector<double> time_warp(const std::vector<double>& in, double intensity, Rng& rng) {
  if (intensity <= 1.0 || in.size() < 2) return in;
  constexpr std::size_t kSegment = 40;
  const double span = std::log(intensity);
  std::vector<double> out;
  out.reserve(in.size() * 2);
  const double last = static_cast<double>(in.size() - 1);
  double pos = 0.0, rate = 1.0;
  for (std::size_t t = 0; pos <= last; ++t) {
    if (t % kSegment == 0) rate = std::exp(rng.uniform(-span, span));
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    out.push_back(i + 1 < in.size() ? in[i] * (1.0 - frac) + in[i + 1] * frac : in[i]);
    pos += rate;
  }
  return out;
}

std::size_t sample_duration(double mean, double stddev, Rng& rng) {
  const double d = stddev > 0 ? rng.normal(mean, stddev) : mean;
  return static_cast<std::size_t>(std::max(4.0, std::round(d)));
}

std::vector<double> render_stages(const ClassProfile& p, Rng& rng) {
  std::vector<double> v;
  double prev_level = kIdleLevel;
  for (const Stage& s : p.stages) {
    const std::size_t d = sample_duration(s.duration_mean, s.duration_std, rng);
    const double level = s.level_std > 0 ? rng.normal(s.level_mean, s.level_std) : s.level_mean;
    for (std::size_t t = 0; t < d; ++t) {
      const double td = static_cast<double>(t);
      double value = level;
      switch (s.shape) {
        case StageShape::Flat:
          break;
        case StageShape::Ramp:
          value = prev_level + (level - prev_level) * (td + 1.0) / static_cast<double>(d);
          break;
        case StageShape::Oscillate:
          value = level + s.amplitude * std::sin(2.0 * std::numbers::pi * td / s.period);
          break;
        case StageShape::Spiky:
          value = level + (std::fmod(td, s.period) < 2.0 ? s.amplitude : 0.0);
          break;
      }
      v.push_back(value);
    }
    prev_level = level;
  }
  return v;
}

std::vector<double> render_continuous(const ClassProfile& p, Rng& rng) {
  const double len = p.length_std > 0 ? rng.normal(p.length_mean, p.length_std) : p.length_mean;
  const auto n = static_cast<std::size_t>(std::max(4.0, std::round(len)));
  const double level = p.level_std > 0 ? rng.normal(p.level_mean, p.level_std) : p.level_mean;
  const double innov = p.fluctuation * std::sqrt(1.0 - p.smoothing * p.smoothing);
  std::vector<double> v(n);
  double e = p.fluctuation > 0 ? rng.normal(0.0, p.fluctuation) : 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0 && innov > 0) e = p.smoothing * e + rng.normal(0.0, innov);
    v[t] = level + e;
  }
  return v;
}

}  // namespace

void validate_profile(const ClassProfile& p) {
  const std::string who = "profile " + std::to_string(p.class_id) + " (" + p.name + "): ";
  require(p.class_id >= 0, who + "class id must be non-negative");
  require(p.noise_std >= 0, who + "noise must be non-negative");
  require(p.warp_intensity >= 1.0, who + "warp intensity must be >= 1");
  if (p.continuous) {
    require(p.length_mean >= 4 && p.length_std >= 0, who + "invalid length");
    require(p.level_std >= 0 && p.fluctuation >= 0, who + "invalid level or fluctuation");
    require(p.smoothing >= 0 && p.smoothing < 1, who + "smoothing must be in [0, 1)");
    return;
  }
  require(p.stages.size() >= 2, who + "staged profiles need at least 2 stages");
  for (const Stage& s : p.stages) {
    require(s.duration_mean > 0 && s.duration_std >= 0, who + "stage durations must be positive");
    require(s.level_std >= 0, who + "stage level std must be non-negative");
    if (periodic(s.shape)) require(s.period > 0, who + "periodic stages need a positive period");
  }
}

std::vector<ClassProfile> parse_profiles(std::string_view text) {
  std::map<int, std::vector<Stage>> motifs;
  std::vector<ClassProfile> out;
  enum class Section { None, Motif, Class } section = Section::None;
  int motif_id = 0;
  std::size_t pos = 0, line_no = 0;
  bool version_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text::trim(text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "profiles line " + std::to_string(line_no) + ": ";
    try {
      if (line.front() == '[') {
        if (line.back() != ']') fail(ErrorCode::Parse, "unterminated section header");
        auto inner = text::trim(line.substr(1, line.size() - 2));
        auto sp = inner.find(' ');
        if (sp == std::string_view::npos) fail(ErrorCode::Parse, "section needs a kind and an id");
        auto kind = inner.substr(0, sp);
        const int id = static_cast<int>(text::parse_int(inner.substr(sp + 1)));
        if (kind == "motif") {
          if (id < 1) fail(ErrorCode::Parse, "motif ids start at 1");
          if (motifs.count(id)) fail(ErrorCode::Parse, "duplicate motif " + std::to_string(id));
          section = Section::Motif;
          motif_id = id;
          motifs[id];
        } else if (kind == "class") {
          section = Section::Class;
          out.emplace_back();
          out.back().class_id = id;
        } else {
          fail(ErrorCode::Parse, "unknown section '" + std::string(kind) + "'");
        }
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(ErrorCode::Parse, "expected key = value");
      const std::string key(text::trim(line.substr(0, eq)));
      const auto value = text::trim(line.substr(eq + 1));
      if (section == Section::None) {
        if (key != "version") fail(ErrorCode::Parse, "unexpected key '" + key + "' before any section");
        if (text::parse_int(value) != kProfileBundleVersion)
          fail(ErrorCode::Parse, "unsupported profile bundle version");
        version_seen = true;
      } else if (section == Section::Motif) {
        if (key != "stage") fail(ErrorCode::Parse, "motif sections only take 'stage'");
        Stage s = parse_stage(value);
        s.motif = motif_id;
        motifs[motif_id].push_back(s);
      } else {
        ClassProfile& p = out.back();
        if (key == "name") {
          p.name = std::string(value);
        } else if (key == "continuous") {
          p.continuous = text::parse_int(value) != 0;
        } else if (key == "noise") {
          p.noise_std = text::parse_double(value);
        } else if (key == "warp") {
          p.warp_intensity = text::parse_double(value);
        } else if (key == "onset") {
          p.max_onset = static_cast<std::size_t>(std::max(0LL, text::parse_int(value)));
        } else if (key == "tail") {
          p.max_tail = static_cast<std::size_t>(std::max(0LL, text::parse_int(value)));
        } else if (key == "stage") {
          p.stages.push_back(parse_stage(value));
        } else if (key == "motif") {
          const int id = static_cast<int>(text::parse_int(value));
          auto it = motifs.find(id);
          if (it == motifs.end()) fail(ErrorCode::Parse, "motif " + std::to_string(id) + " is not defined above");
          p.stages.insert(p.stages.end(), it->second.begin(), it->second.end());
          p.motif_ids.push_back(id);
        } else if (key == "length") {
          std::tie(p.length_mean, p.length_std) = parse_pair(value);
        } else if (key == "level") {
          std::tie(p.level_mean, p.level_std) = parse_pair(value);
        } else if (key == "fluctuation") {
          p.fluctuation = text::parse_double(value);
        } else if (key == "smoothing") {
          p.smoothing = text::parse_double(value);
        } else {
          fail(ErrorCode::Parse, "unknown key '" + key + "'");
        }
      }
    } catch (const Error& e) {
      fail(ErrorCode::Parse, where + e.what());
    }
  }
  if (!version_seen) fail(ErrorCode::Parse, "profile bundle lacks a version line");
  std::set<int> ids;
  for (const auto& p : out) {
    validate_profile(p);
    require(ids.insert(p.class_id).second, "duplicate class id " + std::to_string(p.class_id));
  }
  return out;
}

std::string format_profiles(std::span<const ClassProfile> profiles) {
  std::string out = "# ltwkit synthetic class profiles\nversion = " + std::to_string(kProfileBundleVersion) + "\n";
  std::map<int, std::vector<Stage>> motifs;
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < p.stages.size();) {
      const int id = p.stages[i].motif;
      std::size_t j = i;
      while (j < p.stages.size() && id != 0 && p.stages[j].motif == id) ++j;
      if (id == 0) {
        ++i;
        continue;
      }
      std::vector<Stage> run(p.stages.begin() + static_cast<std::ptrdiff_t>(i),
                             p.stages.begin() + static_cast<std::ptrdiff_t>(j));
      auto [it, inserted] = motifs.emplace(id, run);
      require(inserted || it->second == run, "motif " + std::to_string(id) + " differs between classes");
      i = j;
    }
  }
  for (const auto& [id, stages] : motifs) {
    out += "\n[motif " + std::to_string(id) + "]\n";
    for (const auto& s : stages) out += "stage = " + format_stage(s) + '\n';
  }
  for (const auto& p : profiles) {
    out += "\n[class " + std::to_string(p.class_id) + "]\n";
    out += "name = " + p.name + '\n';
    if (p.continuous) out += "continuous = 1\n";
    out += "noise = " + text::format_double(p.noise_std) + '\n';
    out += "warp = " + text::format_double(p.warp_intensity) + '\n';
    if (p.continuous) {
      out += "length = " + text::format_double(p.length_mean) + ' ' + text::format_double(p.length_std) + '\n';
      out += "level = " + text::format_double(p.level_mean) + ' ' + text::format_double(p.level_std) + '\n';
      out += "fluctuation = " + text::format_double(p.fluctuation) + '\n';
      out += "smoothing = " + text::format_double(p.smoothing) + '\n';
      continue;
    }
    out += "onset = " + std::to_string(p.max_onset) + '\n';
    out += "tail = " + std::to_string(p.max_tail) + '\n';
    for (std::size_t i = 0; i < p.stages.size();) {
      const int id = p.stages[i].motif;
      if (id == 0) {
        out += "stage = " + format_stage(p.stages[i++]) + '\n';
        continue;
      }
      out += "motif = " + std::to_string(id) + '\n';
      i += motifs[id].size();
    }
  }
  return out;
}

std::vector<ClassProfile> default_profiles() { return parse_profiles(kDefaultBundle); }

std::vector<ClassProfile> calm_profiles(std::span<const ClassProfile> profiles) {
  std::vector<ClassProfile> out(profiles.begin(), profiles.end());
  for (auto& p : out) {
    p.noise_std = 0;
    p.warp_intensity = 1;
    p.max_onset = p.max_tail = 0;
    p.length_std = p.level_std = p.fluctuation = 0;
    for (auto& s : p.stages) s.duration_std = s.level_std = 0;
  }
  return out;
}

std::vector<ClassProfile> load_profiles(const std::string& path) { return parse_profiles(text::read_file(path)); }

void save_profiles(std::span<const ClassProfile> profiles, const std::string& path) {
  text::write_file(path, format_profiles(profiles));
}

std::uint64_t profiles_hash(std::span<const ClassProfile> profiles) { return text::fnv1a(format_profiles(profiles)); }

Series generate_trace(const ClassProfile& p, std::size_t min_len, const std::string& source_id, Rng& rng) {
  std::vector<double> v;
  if (p.continuous) {
    v = render_continuous(p, rng);
  } else {
    const std::size_t onset = p.max_onset > 0 ? static_cast<std::size_t>(rng.below(p.max_onset + 1)) : 0;
    v.assign(onset, kIdleLevel);
    const auto body = render_stages(p, rng);
    v.insert(v.end(), body.begin(), body.end());
    const std::size_t tail = p.max_tail > 0 ? static_cast<std::size_t>(rng.below(p.max_tail + 1)) : 0;
    v.insert(v.end(), tail, kIdleLevel);
  }
  v = time_warp(v, p.warp_intensity, rng);
  if (v.size() < min_len) v.resize(min_len, p.continuous ? v.back() : kIdleLevel);
  if (p.noise_std > 0)
    for (double& x : v) x += rng.normal(0.0, p.noise_std);
  return Series(std::move(v), p.class_id, source_id);
}

std::vector<Series> generate_corpus(std::span<const ClassProfile> profiles, std::size_t traces_per_class,
                                    std::size_t min_len, std::uint64_t seed) {
  require(!profiles.empty(), "no class profiles");
  require(traces_per_class >= 5, "need at least 5 traces per class");
  for (const auto& p : profiles) validate_profile(p);
  Rng rng(seed);
  std::vector<Series> out;
  out.reserve(profiles.size() * traces_per_class);
  for (const auto& p : profiles)
    for (std::size_t t = 0; t < traces_per_class; ++t)
      out.push_back(generate_trace(p, min_len, "c" + std::to_string(p.class_id) + "-t" + std::to_string(t), rng));
  return out;
}

}  // namespace ltw
