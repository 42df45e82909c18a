// SPDX-License-Identifier: Apache-2.0
#include "waistlab/sampled_set.hpp"

#include <algorithm>
#include <cmath>

#include "waistlab/errors.hpp"
#include "waistlab/model_geometry.hpp"

namespace waistlab {

namespace {

//! Golden-section minimization of g on [a, b].
template <class F>
double minimize_1d(F&& g, double a, double b, int iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int i = 0; i < iters; ++i) {
    if (g1 < g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - kInvPhi * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + kInvPhi * (b - a);
      g2 = g(x2);
    }
  }
  return g1 < g2 ? x1 : x2;
}

Eigen::VectorXd wrap_params(const Chart& chart, Eigen::VectorXd p) {
  for (int i = 0; i < chart.k; ++i) {
    if (!chart.periodic[static_cast<std::size_t>(i)]) {
      p[i] = std::clamp(p[i], chart.lo[i], chart.hi[i]);
    } else {
      const double span = chart.hi[i] - chart.lo[i];
      double u = std::fmod(p[i] - chart.lo[i], span);
      if (u < 0) u += span;
      p[i] = chart.lo[i] + u;
    }
  }
  return p;
}

void validate_chart(const Chart& chart) {
  if (chart.k < 1 || chart.k > 3)
    throw ValidationError("chart: parameter dimension must be 1..3");
  if (chart.lo.size() != chart.k || chart.hi.size() != chart.k ||
      chart.periodic.size() != static_cast<std::size_t>(chart.k))
    throw ValidationError("chart: box/periodic sizes disagree with k");
  for (int i = 0; i < chart.k; ++i)
    if (!(chart.hi[i] > chart.lo[i]))
      throw ValidationError("chart: empty parameter box");
  if (!chart.map) throw ValidationError("chart: missing map");
}

}  // namespace

SampledSet sample_chart(std::shared_ptr<const Ambient> ambient, Chart chart,
                        const std::vector<int>& counts) {
  if (!ambient) throw ValidationError("sample_chart: missing ambient");
  validate_chart(chart);
  if (counts.size() != static_cast<std::size_t>(chart.k))
    throw ValidationError("sample_chart: one count per parameter dimension");

  SampledSet set;
  set.ambient = std::move(ambient);
  set.k = chart.k;
  set.param_step.resize(chart.k);
  std::vector<int> nodes(counts.size());
  for (int i = 0; i < chart.k; ++i) {
    if (counts[static_cast<std::size_t>(i)] < 2)
      throw ValidationError("sample_chart: need at least 2 samples per dimension");
    const double span = chart.hi[i] - chart.lo[i];
    const bool per = chart.periodic[static_cast<std::size_t>(i)] != 0;
    const int c = counts[static_cast<std::size_t>(i)];
    nodes[static_cast<std::size_t>(i)] = c;
    set.param_step[i] = per ? span / c : span / (c - 1);
  }

  // structured grid over the parameter box
  std::vector<int> idx(nodes.size(), 0);
  for (;;) {
    Eigen::VectorXd p(chart.k);
    for (int i = 0; i < chart.k; ++i)
      p[i] = chart.lo[i] + set.param_step[i] * idx[static_cast<std::size_t>(i)];
    const Eigen::VectorXd x = chart.map(p);
    if (x.size() != set.ambient->coord_dim())
      throw ValidationError("sample_chart: map output has wrong dimension");
    set.params.push_back(p);
    set.cloud.push_back(x);

    int d = 0;
    for (; d < chart.k; ++d) {
      if (idx[static_cast<std::size_t>(d)] < nodes[static_cast<std::size_t>(d)] - 1) {
        ++idx[static_cast<std::size_t>(d)];
        break;
      }
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d == chart.k) break;
  }

  // fill distance: worst distance from a cell midpoint to the cell corners
  const auto& amb = *set.ambient;
  std::vector<int> cell(nodes.size(), 0);
  double fill = 0.0;
  auto corner_index = [&](const std::vector<int>& c) {
    std::size_t flat = 0;
    for (int i = chart.k - 1; i >= 0; --i) {
      const int n = nodes[static_cast<std::size_t>(i)];
      int j = c[static_cast<std::size_t>(i)];
      if (j >= n) j -= n;  // periodic wrap of the closing cell
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
    }
    return flat;
  };
  for (;;) {
    Eigen::VectorXd mid(chart.k);
    for (int i = 0; i < chart.k; ++i)
      mid[i] = chart.lo[i] + set.param_step[i] * (cell[static_cast<std::size_t>(i)] + 0.5);
    const Eigen::VectorXd xm = chart.map(wrap_params(chart, mid));
    double best = kInf;
    std::vector<int> corner(cell);
    for (int mask = 0; mask < (1 << chart.k); ++mask) {
      for (int i = 0; i < chart.k; ++i)
        corner[static_cast<std::size_t>(i)] =
            cell[static_cast<std::size_t>(i)] + ((mask >> i) & 1);
      best = std::min(best, amb.distance(xm, set.cloud[corner_index(corner)]));
    }
    fill = std::max(fill, best);

    int d = 0;
    for (; d < chart.k; ++d) {
      const bool per = chart.periodic[static_cast<std::size_t>(d)] != 0;
      const int cells = per ? nodes[static_cast<std::size_t>(d)]
                            : nodes[static_cast<std::size_t>(d)] - 1;
      if (cell[static_cast<std::size_t>(d)] < cells - 1) {
        ++cell[static_cast<std::size_t>(d)];
        break;
      }
      cell[static_cast<std::size_t>(d)] = 0;
    }
    if (d == chart.k) break;
  }
  set.fill_distance = fill;
  set.chart = std::move(chart);
  return set;
}

SampledSet cloud_set(std::shared_ptr<const Ambient> ambient,
                     std::vector<Eigen::VectorXd> points, int k) {
  if (!ambient) throw ValidationError("cloud_set: missing ambient");
  if (points.empty()) throw ValidationError("cloud_set: empty cloud");
  for (const auto& p : points)
    if (p.size() != ambient->coord_dim())
      throw ValidationError("cloud_set: point dimension mismatch");
  SampledSet set;
  set.ambient = std::move(ambient);
  set.k = k;
  set.cloud = std::move(points);
  set.fill_distance = 0.0;
  return set;
}

SetDistance::SetDistance(const SampledSet& set, double max_query)
    : set_(&set),
      grid_(set.cloud, std::max(max_query + 2.0 * set.fill_distance, 1e-9) /
                           set.ambient->metric_lower_factor()),
      alpha_(set.ambient->metric_lower_factor()),
      cap_limit_(max_query) {
  if (!(max_query > 0)) throw ValidationError("set distance: max_query must be > 0");
}

double SetDistance::metric_to(const Eigen::VectorXd& q, int idx) const {
  return set_->ambient->distance(q, set_->cloud[static_cast<std::size_t>(idx)]);
}

double SetDistance::refine(const Eigen::VectorXd& q, int idx) const {
  const Chart& chart = *set_->chart;
  const Eigen::VectorXd p0 = set_->params[static_cast<std::size_t>(idx)];
  const auto& amb = *set_->ambient;

  auto eval = [&](const Eigen::VectorXd& p) {
    return amb.distance(q, chart.map(wrap_params(chart, p)));
  };

  Eigen::VectorXd p = p0;
  double best = eval(p);
  double window = 1.5;
  const int rounds = chart.k == 1 ? 1 : 4;
  for (int round = 0; round < rounds; ++round) {
    for (int i = 0; i < chart.k; ++i) {
      const double w = window * set_->param_step[i];
      auto line = [&](double s) {
        Eigen::VectorXd pt = p;
        pt[i] = s;
        return eval(pt);
      };
      const double s = minimize_1d(line, p[i] - w, p[i] + w, 40);
      p[i] = s;
    }
    window *= 0.5;
  }
  best = std::min(best, eval(p));
  return best;
}

bool SetDistance::within(const Eigen::VectorXd& q, double t) const {
  if (t > cap_limit_ * (1.0 + 1e-9))
    throw DomainError("set distance: query radius exceeds max_query");
  const double band = set_->fill_distance;
  const auto [idx, d] = grid_.nearest_within(
      q, t + band, alpha_, [&](int i) { return metric_to(q, i); }, t);
  if (idx < 0) return false;
  if (d <= t) return true;
  if (!set_->chart) return false;       // the cloud is the set
  return refine(q, idx) <= t;
}

double SetDistance::distance_within(const Eigen::VectorXd& q, double cap) const {
  if (cap > cap_limit_ * (1.0 + 1e-9))
    throw DomainError("set distance: query radius exceeds max_query");
  const double band = set_->fill_distance;
  const auto [idx, d] = grid_.nearest_within(
      q, cap + band, alpha_, [&](int i) { return metric_to(q, i); });
  if (idx < 0) return kInf;
  if (!set_->chart) return d;
  return std::min(d, refine(q, idx));
}

}  // namespace waistlab
