// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/dip.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace splat {
namespace {

// Distinct sorted values with their ECDF jump in counts: bottom[j] samples
// are < value[j], top[j] samples are <= value[j].
struct Steps {
  std::vector<double> value;
  std::vector<double> bottom;
  std::vector<double> top;
};

Steps build_steps(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  Steps s;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    s.value.push_back(samples[i]);
    s.bottom.push_back(static_cast<double>(i));
    s.top.push_back(static_cast<double>(j));
    i = j;
  }
  return s;
}

// A fit within half-width u exists iff some knot j admits a convex
// nondecreasing CDF piece through the transit bands [top_i-u, bottom_i+u]
// left of j ending in the mode band [bottom_j-u, bottom_j+u], a mirrored
// concave piece on the right, and the left piece can end no higher than the
// right piece starts. Infeasibility of a piece is always witnessed by a
// chord: the line from an upper band corner (x_a, hi_a) through a later
// lower corner (x_i, lo_i) must clear every following band, so the binding
// constraints are the lifted lines lo_i + S_i (x - x_i) with S_i the
// steepest such chord slope into knot i. The sweep tracks their running
// maximum with a line envelope and S_i with a hull tangent query.

// Max envelope of lines over the fixed knot grid, reusable across sweeps.
class LineEnvelope {
 public:
  void init(const std::vector<double>* xs) {
    xs_ = xs;
    nodes_.assign(4 * xs->size() + 4, Node{});
    epoch_ = 1;
  }
  void reset() { ++epoch_; }

  void insert(double k, double b) {
    std::size_t node = 1, lo = 0, hi = xs_->size() - 1;
    while (true) {
      Node& nd = nodes_[node];
      if (nd.epoch != epoch_) {
        nd = Node{k, b, epoch_};
        return;
      }
      const std::size_t mid = lo + (hi - lo) / 2;
      if (at(k, b, mid) > at(nd.k, nd.b, mid)) {
        std::swap(k, nd.k);
        std::swap(b, nd.b);
      }
      if (lo == hi) return;
      if (at(k, b, lo) > at(nd.k, nd.b, lo)) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
  }

  double query(std::size_t i) const {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t node = 1, lo = 0, hi = xs_->size() - 1;
    while (true) {
      const Node& nd = nodes_[node];
      if (nd.epoch == epoch_) best = std::max(best, at(nd.k, nd.b, i));
      if (lo == hi) return best;
      const std::size_t mid = lo + (hi - lo) / 2;
      if (i <= mid) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
  }

 private:
  struct Node {
    double k = 0.0;
    double b = 0.0;
    unsigned epoch = 0;
  };
  double at(double k, double b, std::size_t i) const {
    return k * (*xs_)[i] + b;
  }
  const std::vector<double>* xs_ = nullptr;
  std::vector<Node> nodes_;
  unsigned epoch_ = 0;
};

// Scratch for one sweep direction.
struct SideState {
  LineEnvelope env;
  std::vector<double> hull_x;  // lower hull of upper band corners
  std::vector<double> hull_y;
  std::vector<unsigned char> ok;
  std::vector<double> lmin;
};

// For each mode knot c: ok[c] says the piece threads, lmin[c] is the lowest
// admissible end value. A transit knot needs its band nonempty and every
// certificate line below its cap; both checks are monotone in the prefix.
void side_sweep(const Steps& s, double n, double u, SideState& st) {
  const std::size_t m = s.value.size();
  st.ok.assign(m, 0);
  st.lmin.assign(m, 0.0);
  st.env.reset();
  st.hull_x.clear();
  st.hull_y.clear();
  bool prefix_ok = true;
  for (std::size_t c = 0; c < m; ++c) {
    const double x = s.value[c];
    const double lo = std::max(0.0, s.top[c] - u);
    const double hi = std::min(n, s.bottom[c] + u);
    const double cert =
        c > 0 ? st.env.query(c) : -std::numeric_limits<double>::infinity();
    const double mode_lo = std::max(0.0, s.bottom[c] - u);
    const double mode_hi = std::min(n, s.bottom[c] + u);
    if (prefix_ok && cert <= mode_hi) {
      st.ok[c] = 1;
      st.lmin[c] = std::max(mode_lo, cert);
    }
    if (cert > hi || lo > hi) prefix_ok = false;
    if (!prefix_ok) continue;
    double slope = 0.0;
    if (!st.hull_x.empty()) {
      // steepest chord from a hull point up to (x, lo); unimodal over the
      // hull, so bisect on adjacent comparisons
      std::size_t a = 0, b = st.hull_x.size() - 1;
      while (a < b) {
        const std::size_t mid = a + (b - a) / 2;
        const double fa = (lo - st.hull_y[mid]) / (x - st.hull_x[mid]);
        const double fb =
            (lo - st.hull_y[mid + 1]) / (x - st.hull_x[mid + 1]);
        if (fa < fb)
          a = mid + 1;
        else
          b = mid;
      }
      slope = std::max(0.0, (lo - st.hull_y[a]) / (x - st.hull_x[a]));
    }
    st.env.insert(slope, lo - slope * x);
    while (st.hull_x.size() >= 2) {
      const std::size_t t = st.hull_x.size();
      const double cross =
          (st.hull_x[t - 1] - st.hull_x[t - 2]) * (hi - st.hull_y[t - 2]) -
          (x - st.hull_x[t - 2]) * (st.hull_y[t - 1] - st.hull_y[t - 2]);
      if (cross <= 0.0) {
        st.hull_x.pop_back();
        st.hull_y.pop_back();
      } else {
        break;
      }
    }
    st.hull_x.push_back(x);
    st.hull_y.push_back(hi);
  }
}

}  // namespace

DipResult dip_statistic(const std::vector<double>& samples) {
  if (samples.size() < 4)
    throw Error("dip_statistic needs at least 4 samples, got " +
                std::to_string(samples.size()));
  for (double v : samples) {
    if (!std::isfinite(v))
      throw Error("dip_statistic requires finite samples");
  }
  const Steps s = build_steps(samples);
  const double n = static_cast<double>(samples.size());
  const std::size_t m = s.value.size();
  if (m == 1) return DipResult{0.0, samples.size()};

  // mirrored steps: reflect x and swap the counts above/below
  Steps r;
  r.value.resize(m);
  r.bottom.resize(m);
  r.top.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    r.value[k] = -s.value[m - 1 - k];
    r.bottom[k] = n - s.top[m - 1 - k];
    r.top[k] = n - s.bottom[m - 1 - k];
  }

  SideState left, right;
  left.env.init(&s.value);
  right.env.init(&r.value);

  const auto feasible = [&](double u) {
    side_sweep(s, n, u, left);
    side_sweep(r, n, u, right);
    for (std::size_t j = 0; j < m; ++j) {
      if (left.ok[j] && right.ok[m - 1 - j] &&
          left.lmin[j] + right.lmin[m - 1 - j] <= n)
        return true;
    }
    return false;
  };

  // dip * n is the feasibility threshold in counts; never above n / 4
  double lo = 0.0, hi = 0.25 * n;
  if (feasible(lo)) return DipResult{0.0, samples.size()};
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return DipResult{hi / n, samples.size()};
}

double average_dip(const std::vector<std::vector<double>>& delta_maps,
                   std::vector<ViewDipInfo>* info) {
  if (delta_maps.empty()) throw Error("average_dip needs at least one view");
  if (info) info->assign(delta_maps.size(), ViewDipInfo{});

  double sum = 0.0;
  std::size_t used_views = 0;
  for (std::size_t v = 0; v < delta_maps.size(); ++v) {
    std::vector<double> positive;
    positive.reserve(delta_maps[v].size());
    for (double d : delta_maps[v]) {
      if (d > 0.0) positive.push_back(d);
    }
    ViewDipInfo view;
    view.positive_count = positive.size();
    if (positive.size() < 4) {
      view.skipped = true;
      if (info) (*info)[v] = view;
      continue;
    }
    if (positive.size() > kDipSubsampleCap) {
      const std::size_t stride =
          (positive.size() + kDipSubsampleCap - 1) / kDipSubsampleCap;
      std::vector<double> thinned;
      thinned.reserve(positive.size() / stride + 1);
      for (std::size_t i = 0; i < positive.size(); i += stride)
        thinned.push_back(positive[i]);
      positive = std::move(thinned);
    }
    view.used_count = positive.size();
    view.dip = dip_statistic(positive).dip;
    sum += view.dip;
    ++used_views;
    if (info) (*info)[v] = view;
  }
  if (used_views == 0)
    throw Error("average_dip: every view was skipped (fewer than 4 positive "
                "values each)");
  return sum / static_cast<double>(used_views);
}

}  // namespace splat
