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

// Elastic distance kernels: DTW, Local Time Warping (LTW) and its symmetric
// form, LB_Keogh, Move-Split-Merge, Euclidean, and the complexity-invariant
// correction factor that can wrap any of them.
//
// All kernels are pure functions over spans and are safe to call
// concurrently.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltw {

enum class PointCost { Abs, Squared };

/// Sakoe-Chiba band constrained DTW. `window` bounds |i - j|; nullopt runs
/// the full quadratic recurrence. Squared costs are accumulated without a
/// final square root.
double dtw(std::span<const double> x, std::span<const double> y, std::optional<std::size_t> window,
           PointCost cost = PointCost::Squared);

/// Local warping offsets. Sorted, distinct, all >= 1.
class WarpIndexSet {
 public:
  explicit WarpIndexSet(std::vector<std::size_t> offsets);

  /// Accepts "10", "1-10", "1-4+8", "1,2,5-7".
  static WarpIndexSet parse(std::string_view text);
  static WarpIndexSet range(std::size_t first, std::size_t last);

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  std::size_t max() const { return offsets_.back(); }

  /// Compact text form using '-' for runs and '+' between parts.
  std::string to_string() const;

  friend bool operator==(const WarpIndexSet&, const WarpIndexSet&) = default;

 private:
  std::vector<std::size_t> offsets_;
};

/// One LTW term: for every step i of the base sequence x (1-based,
/// i = k+1 .. n-k) the smallest of |x_i - y_i|, |x_i - y_{i+1}|,
/// |x_i - y_{i+k}|. Linear in n whatever k is.
double ltw_k(std::span<const double> x, std::span<const double> y, std::size_t k);

/// Sum of ltw_k over the set. x is the base (query) sequence; the measure is
/// not symmetric.
double ltw(std::span<const double> x, std::span<const double> y, const WarpIndexSet& offsets);

/// ltw(x, y) + ltw(y, x).
double ltw_com(std::span<const double> x, std::span<const double> y, const WarpIndexSet& offsets);

/// Envelope lower bound on windowed DTW. The envelope is built over y, so the
/// measure is not symmetric. Uses the same point cost as the DTW it bounds.
double lb_keogh(std::span<const double> x, std::span<const double> y, std::size_t window,
                PointCost cost = PointCost::Squared);

/// Move-Split-Merge with split/merge cost c. Lengths may differ.
double msm(std::span<const double> x, std::span<const double> y, double c);

double euclidean(std::span<const double> x, std::span<const double> y);

/// sqrt(sum (x_{i+1} - x_i)^2).
double complexity_estimate(std::span<const double> x);

inline constexpr double kCidEpsilon = 1e-9;

/// (max(CE_x, CE_y) + eps) / (min(CE_x, CE_y) + eps); always >= 1.
double complexity_factor(std::span<const double> x, std::span<const double> y);

double cid_enhance(double distance, std::span<const double> x, std::span<const double> y);

enum class DistanceKind { Dtw, Ltw, LtwCom, LbKeogh, Msm, Euclidean };

/// A configured distance. Text form: `kind[:key=value|:flag]...`, e.g.
///   dtw:w=30:cost=sq   dtwm:w=30   ltw:G=1-10:cid   ltwcom:G=1-10
///   lbk:w=5   msm:c=1.0   ed
/// Keys: w (window), cost (sq|abs), G (warp offsets), c (MSM cost), cid (flag).
/// `dtwm` is dtw with cost=abs.
struct DistanceSpec {
  DistanceKind kind = DistanceKind::Euclidean;
  std::optional<std::size_t> window;
  PointCost cost = PointCost::Squared;
  std::optional<WarpIndexSet> offsets;
  std::optional<double> msm_cost;
  bool cid = false;

  static DistanceSpec parse(std::string_view text);
  std::string to_string() const;

  /// Whether d(x, y) may differ from d(y, x).
  bool commutative() const;

  /// Throws unless the configuration is usable on windows of length n.
  void validate(std::size_t n) const;

  friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;
};

/// Dispatches to the configured kernel, applying the CID factor last.
/// For asymmetric kinds x is the query.
double evaluate(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y);

}  // namespace ltw
