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
#include "distance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "error.hpp"
#include "text.hpp"

namespace ltw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double point_cost(double a, double b, PointCost cost) {
  const double d = a - b;
  return cost == PointCost::Abs ? std::abs(d) : d * d;
}

void require_equal_lengths(std::span<const double> x, std::span<const double> y, const char* what) {
  require(x.size() == y.size(), [&] {
    return std::string(what) + " needs equal lengths (" + std::to_string(x.size()) + " vs " +
           std::to_string(y.size()) + ")";
  });
  require(!x.empty(), [&] { return std::string(what) + " needs non-empty series"; });
}

}  // namespace

double dtw(std::span<const double> x, std::span<const double> y, std::optional<std::size_t> window, PointCost cost) {
  require_equal_lengths(x, y, "dtw");
  const std::size_t n = x.size();
  if (window)
    require(*window <= n, [&] { return "dtw window " + std::to_string(*window) + " exceeds length " + std::to_string(n); });
  const std::size_t w = window.value_or(n);

  // Rolling rows over D(i, 0..n). Cells outside the band stay +inf; each row
  // writes sentinels on both band edges so the next row never reads a stale
  // value from two rows back. Rows go in pairs, the second trailing the first
  // by one column, so each step carries two independent dependency chains.
  std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf), next(n + 1, kInf);
  prev[0] = 0.0;
  auto band = [&](std::size_t i) { return std::pair{i > w ? i - w : std::size_t{1}, std::min(n, i + w)}; };
  auto cell = [&](const std::vector<double>& up, const std::vector<double>& row, std::size_t j, double xi) {
    return std::min({up[j - 1], up[j], row[j - 1]}) + point_cost(xi, y[j - 1], cost);
  };
  std::size_t i = 1;
  for (; i + 1 <= n; i += 2) {
    const auto [lo1, hi1] = band(i);
    const auto [lo2, hi2] = band(i + 1);
    cur[0] = next[0] = kInf;
    cur[lo1 - 1] = kInf;
    next[lo2 - 1] = kInf;
    if (hi1 < n) cur[hi1 + 1] = kInf;
    const double x1 = x[i - 1], x2 = x[i];
    for (std::size_t j = lo1; j <= hi1; ++j) {
      cur[j] = cell(prev, cur, j, x1);
      if (j - 1 >= lo2) next[j - 1] = cell(cur, next, j - 1, x2);
    }
    for (std::size_t j = std::max(lo2, hi1); j <= hi2; ++j) next[j] = cell(cur, next, j, x2);
    if (hi2 < n) next[hi2 + 1] = kInf;
    std::swap(prev, next);
  }
  if (i == n) {
    const auto [lo, hi] = band(i);
    cur[0] = kInf;
    cur[lo - 1] = kInf;
    const double xi = x[i - 1];
    for (std::size_t j = lo; j <= hi; ++j) cur[j] = cell(prev, cur, j, xi);
    std::swap(prev, cur);
  }
  return prev[n];
}

WarpIndexSet::WarpIndexSet(std::vector<std::size_t> offsets) : offsets_(std::move(offsets)) {
  std::sort(offsets_.begin(), offsets_.end());
  offsets_.erase(std::unique(offsets_.begin(), offsets_.end()), offsets_.end());
  require(!offsets_.empty(), "warp index set must be non-empty");
  require(offsets_.front() >= 1, "warp offsets must be >= 1");
}

WarpIndexSet WarpIndexSet::range(std::size_t first, std::size_t last) {
  require(first >= 1 && first <= last, "invalid warp offset range");
  std::vector<std::size_t> v;
  for (std::size_t k = first; k <= last; ++k) v.push_back(k);
  return WarpIndexSet(std::move(v));
}

WarpIndexSet WarpIndexSet::parse(std::string_view text) {
  std::vector<std::size_t> v;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '+', ',');
  for (auto part : text::split(normalized, ',')) {
    part = text::trim(part);
    if (part.empty()) fail(ErrorCode::Parse, "empty element in warp set '" + std::string(text) + "'");
    auto dash = part.find('-');
    long long lo, hi;
    if (dash == std::string_view::npos) {
      lo = hi = text::parse_int(part);
    } else {
      lo = text::parse_int(part.substr(0, dash));
      hi = text::parse_int(part.substr(dash + 1));
    }
    if (lo < 1 || hi < lo || hi > 100000) fail(ErrorCode::Parse, "invalid warp offsets '" + std::string(part) + "'");
    for (long long k = lo; k <= hi; ++k) v.push_back(static_cast<std::size_t>(k));
  }
  return WarpIndexSet(std::move(v));
}

std::string WarpIndexSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < offsets_.size();) {
    std::size_t j = i;
    while (j + 1 < offsets_.size() && offsets_[j + 1] == offsets_[j] + 1) ++j;
    if (!out.empty()) out += '+';
    out += std::to_string(offsets_[i]);
    if (j > i) out += '-' + std::to_string(offsets_[j]);
    i = j + 1;
  }
  return out;
}

double ltw_k(std::span<const double> x, std::span<const double> y, std::size_t k) {
  require_equal_lengths(x, y, "ltw");
  const std::size_t n = x.size();
  require(k >= 1 && 2 * k + 1 <= n,
          [&] { return "ltw offset " + std::to_string(k) + " out of range for length " + std::to_string(n); });
  // 0-based: i runs over [k, n - k - 1]; the furthest candidate is y[n - 1].
  double sum = 0.0;
  for (std::size_t i = k; i + k < n; ++i) {
    const double xi = x[i];
    sum += std::min({std::abs(xi - y[i]), std::abs(xi - y[i + 1]), std::abs(xi - y[i + k])});
  }
  return sum;
}

double ltw(std::span<const double> x, std::span<const double> y, const WarpIndexSet& offsets) {
  double sum = 0.0;
  for (std::size_t k : offsets.offsets()) sum += ltw_k(x, y, k);
  return sum;
}

double ltw_com(std::span<const double> x, std::span<const double> y, const WarpIndexSet& offsets) {
  return ltw(x, y, offsets) + ltw(y, x, offsets);
}

double lb_keogh(std::span<const double> x, std::span<const double> y, std::size_t window, PointCost cost) {
  require_equal_lengths(x, y, "lb_keogh");
  const std::size_t n = y.size();
  require(window < n,
          [&] { return "lb_keogh window " + std::to_string(window) + " must be below length " + std::to_string(n); });

  // Streaming max/min over y[i - w, i + w] with monotone deques.
  std::deque<std::size_t> upper, lower;
  double sum = 0.0;
  std::size_t pushed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t right = std::min(n - 1, i + window);
    for (; pushed <= right; ++pushed) {
      while (!upper.empty() && y[upper.back()] <= y[pushed]) upper.pop_back();
      upper.push_back(pushed);
      while (!lower.empty() && y[lower.back()] >= y[pushed]) lower.pop_back();
      lower.push_back(pushed);
    }
    const std::size_t left = i > window ? i - window : 0;
    while (upper.front() < left) upper.pop_front();
    while (lower.front() < left) lower.pop_front();
    const double u = y[upper.front()], l = y[lower.front()];
    if (x[i] > u)
      sum += point_cost(x[i], u, cost);
    else if (x[i] < l)
      sum += point_cost(x[i], l, cost);
  }
  return sum;
}

namespace {

// Split/merge cost of producing `p` next to neighbours q and r.
inline double msm_step(double p, double q, double r, double c) {
  if ((q <= p && p <= r) || (r <= p && p <= q)) return c;
  return c + std::min(std::abs(p - q), std::abs(p - r));
}

}  // namespace

double msm(std::span<const double> x, std::span<const double> y, double c) {
  require(c > 0.0 && std::isfinite(c), "msm cost must be positive");
  require(!x.empty() && !y.empty(), "msm needs non-empty series");
  const std::size_t n = x.size(), m = y.size();
  std::vector<double> prev(m), cur(m);
  prev[0] = std::abs(x[0] - y[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + msm_step(y[j], x[0], y[j - 1], c);
  for (std::size_t i = 1; i < n; ++i) {
    cur[0] = prev[0] + msm_step(x[i], x[i - 1], y[0], c);
    for (std::size_t j = 1; j < m; ++j) {
      cur[j] = std::min({prev[j - 1] + std::abs(x[i] - y[j]), prev[j] + msm_step(x[i], x[i - 1], y[j], c),
                         cur[j - 1] + msm_step(y[j], x[i], y[j - 1], c)});
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double euclidean(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x, y, "euclidean");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum);
}

double complexity_estimate(std::span<const double> x) {
  require(x.size() >= 2, "complexity estimate needs at least two points");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += (x[i + 1] - x[i]) * (x[i + 1] - x[i]);
  return std::sqrt(sum);
}

double complexity_factor(std::span<const double> x, std::span<const double> y) {
  const double cx = complexity_estimate(x), cy = complexity_estimate(y);
  return (std::max(cx, cy) + kCidEpsilon) / (std::min(cx, cy) + kCidEpsilon);
}

double cid_enhance(double distance, std::span<const double> x, std::span<const double> y) {
  return distance * complexity_factor(x, y);
}

namespace {

struct KindName {
  std::string_view name;
  DistanceKind kind;
};

constexpr KindName kKindNames[] = {
    {"dtw", DistanceKind::Dtw},         {"ltw", DistanceKind::Ltw}, {"ltwcom", DistanceKind::LtwCom},
    {"lbk", DistanceKind::LbKeogh},     {"msm", DistanceKind::Msm}, {"ed", DistanceKind::Euclidean},
};

std::string_view kind_name(DistanceKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "?";
}

}  // namespace

DistanceSpec DistanceSpec::parse(std::string_view text) {
  auto parts = text::split(text::trim(text), ':');
  const std::string head(text::trim(parts[0]));
  DistanceSpec spec;
  bool known = false;
  for (const auto& k : kKindNames)
    if (head == k.name) spec.kind = k.kind, known = true;
  if (head == "dtwm" || head == "dtw_manhattan") spec.kind = DistanceKind::Dtw, spec.cost = PointCost::Abs, known = true;
  if (head == "ltw_com") spec.kind = DistanceKind::LtwCom, known = true;
  if (head == "lb_keogh") spec.kind = DistanceKind::LbKeogh, known = true;
  if (head == "euclidean") spec.kind = DistanceKind::Euclidean, known = true;
  if (!known) fail(ErrorCode::Parse, "unknown distance kind '" + head + "'");

  const auto k = spec.kind;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto part = text::trim(parts[i]);
    const auto eq = part.find('=');
    const std::string key(text::trim(part.substr(0, eq)));
    const std::string_view value = eq == std::string_view::npos ? std::string_view{} : text::trim(part.substr(eq + 1));
    auto reject = [&] { fail(ErrorCode::Parse, "key '" + key + "' is not valid for '" + head + "'"); };
    if (key == "cid" && eq == std::string_view::npos) {
      spec.cid = true;
    } else if (eq == std::string_view::npos) {
      fail(ErrorCode::Parse, "expected key=value, got '" + std::string(part) + "'");
    } else if (key == "w") {
      if (k != DistanceKind::Dtw && k != DistanceKind::LbKeogh) reject();
      long long w = text::parse_int(value);
      if (w < 0) fail(ErrorCode::Parse, "window must be non-negative");
      spec.window = static_cast<std::size_t>(w);
    } else if (key == "cost") {
      if (k != DistanceKind::Dtw && k != DistanceKind::LbKeogh) reject();
      if (value == "sq")
        spec.cost = PointCost::Squared;
      else if (value == "abs")
        spec.cost = PointCost::Abs;
      else
        fail(ErrorCode::Parse, "cost must be 'sq' or 'abs'");
    } else if (key == "G") {
      if (k != DistanceKind::Ltw && k != DistanceKind::LtwCom) reject();
      spec.offsets = WarpIndexSet::parse(value);
    } else if (key == "c") {
      if (k != DistanceKind::Msm) reject();
      spec.msm_cost = text::parse_double(value);
      if (!(*spec.msm_cost > 0.0) || !std::isfinite(*spec.msm_cost)) fail(ErrorCode::Parse, "msm cost must be positive");
    } else {
      fail(ErrorCode::Parse, "unknown key '" + key + "' in distance '" + std::string(text) + "'");
    }
  }
  if ((k == DistanceKind::Ltw || k == DistanceKind::LtwCom) && !spec.offsets)
    fail(ErrorCode::Parse, "'" + head + "' needs G=<offsets>");
  if (k == DistanceKind::LbKeogh && !spec.window) fail(ErrorCode::Parse, "'lbk' needs w=<window>");
  if (k == DistanceKind::Msm && !spec.msm_cost) fail(ErrorCode::Parse, "'msm' needs c=<cost>");
  return spec;
}

std::string DistanceSpec::to_string() const {
  std::string out(kind_name(kind));
  if (window) out += ":w=" + std::to_string(*window);
  if (kind == DistanceKind::Dtw || kind == DistanceKind::LbKeogh)
    out += cost == PointCost::Squared ? ":cost=sq" : ":cost=abs";
  if (offsets) out += ":G=" + offsets->to_string();
  if (msm_cost) out += ":c=" + text::format_double(*msm_cost);
  if (cid) out += ":cid";
  return out;
}

bool DistanceSpec::commutative() const { return kind != DistanceKind::Ltw && kind != DistanceKind::LbKeogh; }

void DistanceSpec::validate(std::size_t n) const {
  switch (kind) {
    case DistanceKind::Dtw:
      require(!window || *window <= n, "dtw window exceeds window length " + std::to_string(n));
      break;
    case DistanceKind::LbKeogh:
      require(window && *window < n, "lbk window must be below window length " + std::to_string(n));
      break;
    case DistanceKind::Ltw:
    case DistanceKind::LtwCom:
      require(offsets && 2 * offsets->max() + 1 <= n,
              "ltw offsets must satisfy 2k+1 <= " + std::to_string(n));
      break;
    case DistanceKind::Msm:
      require(msm_cost && *msm_cost > 0.0, "msm needs a positive cost");
      break;
    case DistanceKind::Euclidean:
      break;
  }
  if (cid) require(n >= 2, "cid needs series of length >= 2");
}

double evaluate(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  switch (spec.kind) {
    case DistanceKind::Dtw:
      d = dtw(x, y, spec.window, spec.cost);
      break;
    case DistanceKind::Ltw:
      require(spec.offsets.has_value(), "ltw needs offsets");
      d = ltw(x, y, *spec.offsets);
      break;
    case DistanceKind::LtwCom:
      require(spec.offsets.has_value(), "ltwcom needs offsets");
      d = ltw_com(x, y, *spec.offsets);
      break;
    case DistanceKind::LbKeogh:
      require(spec.window.has_value(), "lbk needs a window");
      d = lb_keogh(x, y, *spec.window, spec.cost);
      break;
    case DistanceKind::Msm:
      require(spec.msm_cost.has_value(), "msm needs a cost");
      d = msm(x, y, *spec.msm_cost);
      break;
    case DistanceKind::Euclidean:
      d = euclidean(x, y);
      break;
  }
  return spec.cid ? cid_enhance(d, x, y) : d;
}

}  // namespace ltw
