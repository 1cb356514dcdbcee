#include "flp/filter/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "flp/common/angles.hpp"
#include "flp/common/error.hpp"

namespace flp::filter {

std::vector<Cluster> kmeans_step(Cloud& cloud, const std::vector<Cluster>& previous, std::size_t k) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "k-means needs k >= 1");
  const std::size_t n = cloud.size();
  std::vector<Point2> centers;
  if (previous.size() == k) {
    for (const auto& c : previous) centers.push_back(c.center);
  } else {
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) cdf[i] = acc += cloud.particles[i].weight;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t idx = cloud.rng.index(n);
      if (acc > 0.0) {
        const double u = cloud.rng.uniform() * acc;
        idx = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), n - 1);
      }
      centers.push_back(cloud.particles[idx].position());
    }
  }

  std::vector<std::size_t> assign(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = cloud.particles[i].position();
    std::size_t best = 0;
    double best_d = (p - centers[0]).squared_norm();
    for (std::size_t c = 1; c < k; ++c) {
      const double d = (p - centers[c]).squared_norm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assign[i] = best;
  }

  struct Acc {
    double w = 0.0, x = 0.0, y = 0.0, eps = 0.0, bs = 0.0, bc = 0.0;
    std::size_t members = 0;
    std::map<int, double> floors;
  };
  std::vector<Acc> acc(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = cloud.particles[i];
    auto& a = acc[assign[i]];
    ++a.members;
    a.w += p.weight;
    a.x += p.weight * p.x;
    a.y += p.weight * p.y;
    a.eps += p.weight * p.epsilon;
    a.bs += p.weight * std::sin(p.beta);
    a.bc += p.weight * std::cos(p.beta);
    a.floors[p.floor] += p.weight;
  }

  std::vector<std::size_t> by_weight(n);
  std::iota(by_weight.begin(), by_weight.end(), std::size_t{0});
  std::size_t next_heavy = 0;
  bool sorted = false;

  const double total = std::accumulate(acc.begin(), acc.end(), 0.0, [](double s, const Acc& a) { return s + a.w; });
  std::vector<Cluster> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& a = acc[c];
    auto& cl = out[c];
    cl.members = a.members;
    if (a.members == 0 || !(a.w > 0.0)) {
      if (!sorted) {
        std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t l, std::size_t r) {
          return cloud.particles[l].weight > cloud.particles[r].weight;
        });
        sorted = true;
      }
      const auto& h = cloud.particles[by_weight[next_heavy % n]];
      ++next_heavy;
      cl.center = h.position();
      cl.mean_state << h.x, h.y, h.epsilon, h.beta;
      cl.floor = h.floor;
      cl.weight = total > 0.0 ? a.w / total : 0.0;
      continue;
    }
    cl.center = {a.x / a.w, a.y / a.w};
    cl.mean_state << cl.center.x, cl.center.y, a.eps / a.w, wrap_two_pi(std::atan2(a.bs, a.bc));
    cl.weight = total > 0.0 ? a.w / total : 0.0;
    cl.floor = std::max_element(a.floors.begin(), a.floors.end(), [](const auto& l, const auto& r) {
                 return l.second < r.second;
               })->first;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = cloud.particles[i];
    auto& cl = out[assign[i]];
    if (!(acc[assign[i]].w > 0.0)) continue;
    const double dx = p.x - cl.center.x;
    const double dy = p.y - cl.center.y;
    const double w = p.weight / acc[assign[i]].w;
    cl.covariance(0, 0) += w * dx * dx;
    cl.covariance(0, 1) += w * dx * dy;
    cl.covariance(1, 1) += w * dy * dy;
  }
  for (auto& cl : out) cl.covariance(1, 0) = cl.covariance(0, 1);
  return out;
}

Estimate output_estimate(std::span<const Cluster> clusters) {
  if (clusters.empty()) fail(ErrorCode::InvalidArgument, "no clusters to choose from");
  std::size_t best = 0;
  for (std::size_t c = 1; c < clusters.size(); ++c)
    if (clusters[c].weight > clusters[best].weight) best = c;
  const auto& cl = clusters[best];
  Estimate e;
  e.position = cl.center;
  e.covariance = cl.covariance;
  e.floor = cl.floor;
  e.cluster_weight = cl.weight;
  e.epsilon = cl.mean_state[2];
  e.beta = cl.mean_state[3];
  return e;
}

Point2 short_term_predict(const Estimate& last, std::span<const pdr::StepEvent> steps) {
  Point2 p = last.position;
  for (const auto& s : steps) {
    const double d = s.length * (1.0 + last.epsilon);
    p = p + Point2{d * std::cos(s.heading + last.beta), d * std::sin(s.heading + last.beta)};
  }
  return p;
}

}  // namespace flp::filter
