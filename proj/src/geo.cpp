#include "tweetorigin/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tweetorigin {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double axis_value(const Vec3& p, std::size_t axis) {
  switch (axis) {
    case 0: return p.x;
    case 1: return p.y;
    default: return p.z;
  }
}
}  // namespace

double haversine_m(double lon1, double lat1, double lon2, double lat2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlmb = (lon2 - lon1) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlmb / 2.0);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

Vec3 unit_vector(double lon_deg, double lat_deg) {
  const double lon = lon_deg * kDegToRad;
  const double lat = lat_deg * kDegToRad;
  const double cl = std::cos(lat);
  return Vec3{cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)};
}

double chord2(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

KdTree KdTree::build(std::vector<Vec3> points, std::vector<std::uint32_t> rank) {
  KdTree tree;
  tree.items_.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    tree.items_[i] = Item{points[i], rank[i], static_cast<std::uint32_t>(i)};
  }
  if (!tree.items_.empty()) tree.build_range(0, tree.items_.size(), 0);
  return tree;
}

void KdTree::build_range(std::size_t lo, std::size_t hi, std::size_t depth) {
  if (hi - lo <= 1) return;
  const std::size_t axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(items_.begin() + lo, items_.begin() + mid, items_.begin() + hi,
                   [axis](const Item& a, const Item& b) {
                     const double av = axis_value(a.p, axis);
                     const double bv = axis_value(b.p, axis);
                     if (av != bv) return av < bv;
                     return a.rank < b.rank;
                   });
  build_range(lo, mid, depth + 1);
  build_range(mid + 1, hi, depth + 1);
}

void KdTree::search(std::size_t lo, std::size_t hi, std::size_t depth, const Vec3& probe,
                    double& best_d2, std::uint32_t& best_rank, std::uint32_t& best_index) const {
  if (lo >= hi) return;
  const std::size_t axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  const Item& node = items_[mid];

  const double d2 = chord2(node.p, probe);
  if (d2 < best_d2 || (d2 == best_d2 && node.rank < best_rank)) {
    best_d2 = d2;
    best_rank = node.rank;
    best_index = node.index;
  }

  const double delta = axis_value(probe, axis) - axis_value(node.p, axis);
  const bool left_first = delta <= 0.0;
  const auto visit = [&](bool left) {
    if (left) {
      search(lo, mid, depth + 1, probe, best_d2, best_rank, best_index);
    } else {
      search(mid + 1, hi, depth + 1, probe, best_d2, best_rank, best_index);
    }
  };
  visit(left_first);
  // The far side may still hold an equal-distance point with a smaller rank,
  // so prune only on strictly greater plane distance.
  if (delta * delta <= best_d2) visit(!left_first);
}

std::uint32_t KdTree::nearest(const Vec3& probe) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t best_index = std::numeric_limits<std::uint32_t>::max();
  search(0, items_.size(), 0, probe, best_d2, best_rank, best_index);
  return best_index;
}

}  // namespace tweetorigin
