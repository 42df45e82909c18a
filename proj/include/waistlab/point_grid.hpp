// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "waistlab/errors.hpp"

namespace waistlab {

//! Uniform hash grid over point-cloud coordinates.  Queries walk Chebyshev
//! shells of cells outward, so a query that finds its answer nearby never
//! touches the rest of the cloud.  Pruning works for any metric that is
//! bounded below by `alpha` times the Euclidean coordinate distance.
class PointGrid {
 public:
  PointGrid(const std::vector<Eigen::VectorXd>& pts, double cell) : cell_(cell) {
    if (pts.empty()) throw ValidationError("point grid: empty cloud");
    if (!(cell > 0)) throw ValidationError("point grid: cell size must be > 0");
    dim_ = static_cast<int>(pts.front().size());
    pts_.resize(dim_, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != dim_)
        throw ValidationError("point grid: mixed point dimensions");
      pts_.col(static_cast<Eigen::Index>(i)) = pts[i];
      cells_[cell_key(pts[i])].push_back(static_cast<int>(i));
    }
  }

  int dim() const { return dim_; }
  Eigen::Index size() const { return pts_.cols(); }
  const Eigen::MatrixXd& points() const { return pts_; }

  //! Index and metric distance of the nearest point within `cap`, or
  //! (-1, +inf) when no point is that close.  `metric(i)` returns the
  //! metric distance from the query to point i and must satisfy
  //! metric(i) >= alpha * ||query - p_i||.  If any distance <= early_exit
  //! turns up, the search stops there; indicator queries use this to skip
  //! the exact minimum once membership is settled.
  template <class Metric>
  std::pair<int, double> nearest_within(const Eigen::VectorXd& q, double cap,
                                        double alpha, Metric&& metric,
                                        double early_exit = -1.0) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<long> base(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i)
      base[static_cast<std::size_t>(i)] = coord_index(q[i]);

    const long max_shell =
        static_cast<long>(std::ceil(cap / (alpha * cell_))) + 1;
    std::vector<long> off(static_cast<std::size_t>(dim_));
    for (long shell = 0; shell <= max_shell; ++shell) {
      // cells on this shell are at Euclidean distance >= (shell-1) * cell
      const double shell_floor = alpha * static_cast<double>(shell - 1) * cell_;
      if (shell_floor > cap || shell_floor >= best_d) break;
      bool done = false;
      for_each_shell_cell(off, 0, shell, [&](const std::vector<long>& o) {
        if (done) return;
        std::uint64_t key = 0;
        for (int i = 0; i < dim_; ++i)
          key = mix(key, base[static_cast<std::size_t>(i)] + o[static_cast<std::size_t>(i)]);
        const auto it = cells_.find(key);
        if (it == cells_.end()) return;
        for (const int idx : it->second) {
          const double e = (pts_.col(idx) - q).norm();
          if (alpha * e >= best_d || alpha * e > cap) continue;
          const double d = metric(idx);
          if (d < best_d && d <= cap) {
            best_d = d;
            best = idx;
            if (best_d <= early_exit) {
              done = true;
              return;
            }
          }
        }
      });
      if (done) break;
    }
    return {best, best_d};
  }

 private:
  long coord_index(double x) const { return static_cast<long>(std::floor(x / cell_)); }

  static std::uint64_t mix(std::uint64_t h, long v) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }

  std::uint64_t cell_key(const Eigen::VectorXd& p) const {
    std::uint64_t key = 0;
    for (int i = 0; i < dim_; ++i) key = mix(key, coord_index(p[i]));
    return key;
  }

  template <class Fn>
  void for_each_shell_cell(std::vector<long>& off, int d, long shell, Fn&& fn) const {
    if (d == dim_) {
      long cheb = 0;
      for (const long o : off) cheb = std::max(cheb, std::labs(o));
      if (cheb == shell) fn(off);
      return;
    }
    for (long o = -shell; o <= shell; ++o) {
      off[static_cast<std::size_t>(d)] = o;
      for_each_shell_cell(off, d + 1, shell, fn);
    }
  }

  int dim_ = 0;
  double cell_ = 1.0;
  Eigen::MatrixXd pts_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace waistlab
