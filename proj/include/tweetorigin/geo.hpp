#pragma once

#include <cstdint>
#include <vector>

namespace tweetorigin {

inline constexpr double kEarthRadiusMeters = 6371000.0;

// Great-circle distance in meters on a spherical earth.
double haversine_m(double lon1, double lat1, double lon2, double lat2);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Vec3 unit_vector(double lon_deg, double lat_deg);

// Squared chord length between two unit vectors; monotone in the central
// angle, so nearest-by-chord equals nearest-by-great-circle.
double chord2(const Vec3& a, const Vec3& b);

/// Static 3-d KD tree over unit vectors for exact nearest-neighbor queries.
/// Distance ties are broken by the caller-supplied rank (lower rank wins),
/// which makes results a total order and queries reproducible.
class KdTree {
 public:
  KdTree() = default;

  static KdTree build(std::vector<Vec3> points, std::vector<std::uint32_t> rank);

  // Index of the nearest point in the original `points` order.
  // Undefined on an empty tree (check empty() first).
  std::uint32_t nearest(const Vec3& probe) const;

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

 private:
  struct Item {
    Vec3 p;
    std::uint32_t rank = 0;
    std::uint32_t index = 0;
  };

  void build_range(std::size_t lo, std::size_t hi, std::size_t depth);
  void search(std::size_t lo, std::size_t hi, std::size_t depth, const Vec3& probe,
              double& best_d2, std::uint32_t& best_rank, std::uint32_t& best_index) const;

  std::vector<Item> items_;
};

}  // namespace tweetorigin
