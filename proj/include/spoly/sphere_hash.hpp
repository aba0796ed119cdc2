#pragma once
// Uniform grid over R^n used for radius queries on sphere point sets. Cells
// are cubes of a fixed side; a query enumerates the cell box covering the
// ball and filters by exact distance, so answers carry no false positives.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "spoly/common.hpp"

namespace spoly {

class SphereHash {
 public:
  SphereHash(int dim, double cell);

  void insert(const VecN& p, std::int32_t id);
  void insert_all(const PointsView& v);

  std::size_t size() const { return ids_.size(); }
  double cell() const { return cell_; }
  int dim() const { return dim_; }

  // Any stored point with dist(p, c) <= r?
  bool any_within(const VecN& c, double r) const;

  // Ids of stored points with dist <= r, ascending id order not guaranteed.
  void collect_within(const VecN& c, double r, std::vector<std::int32_t>& out) const;

  // Stored point minimizing distance among those with dist <= r; ties broken
  // by smallest id. Returns -1 if none.
  std::int32_t nearest_within(const VecN& c, double r) const;

  VecN point(std::int32_t id) const;

 private:
  template <typename Fn>
  void for_cells_in_ball(const VecN& c, double r, Fn&& fn) const;

  std::uint64_t key_of(const VecN& p) const;

  int dim_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> buckets_;
  std::vector<double> coords_;       // row-major copies, indexed by slot
  std::vector<std::int32_t> ids_;    // slot -> caller id
};

}  // namespace spoly
