#include "spoly/sphere_hash.hpp"

#include <cmath>

#include "spoly/rng.hpp"

namespace spoly {

namespace {

inline std::uint64_t mix_cells(const std::int64_t* cell, int dim) {
  std::uint64_t h = 0x8445D61A4E774912ull;
  for (int d = 0; d < dim; ++d) {
    h ^= Rng::mix64(std::uint64_t(cell[d]) + 0x9E3779B97F4A7C15ull * std::uint64_t(d + 1));
    h *= 0x2545F4914F6CDD1Dull;
  }
  return h;
}

}  // namespace

SphereHash::SphereHash(int dim, double cell) : dim_(dim), cell_(cell) {
  if (dim < 2 || dim > kMaxDim) throw DomainError("SphereHash: bad dimension");
  if (!(cell > 0)) throw DomainError("SphereHash: cell must be positive");
}

std::uint64_t SphereHash::key_of(const VecN& p) const {
  std::int64_t cell[kMaxDim];
  for (int d = 0; d < dim_; ++d) cell[d] = std::int64_t(std::floor(p[d] / cell_));
  return mix_cells(cell, dim_);
}

void SphereHash::insert(const VecN& p, std::int32_t id) {
  std::int32_t slot = std::int32_t(ids_.size());
  ids_.push_back(id);
  for (int d = 0; d < dim_; ++d) coords_.push_back(p[d]);
  buckets_[key_of(p)].push_back(slot);
}

void SphereHash::insert_all(const PointsView& v) {
  for (std::size_t i = 0; i < v.count; ++i) insert(v.vec(i), std::int32_t(i));
}

VecN SphereHash::point(std::int32_t id) const {
  for (std::size_t slot = 0; slot < ids_.size(); ++slot)
    if (ids_[slot] == id) return VecN::from({coords_.data() + slot * std::size_t(dim_), std::size_t(dim_)});
  throw DomainError("SphereHash::point: unknown id");
}

// Odometer over the integer box of cells intersecting the ball.
template <typename Fn>
void SphereHash::for_cells_in_ball(const VecN& c, double r, Fn&& fn) const {
  std::int64_t lo[kMaxDim], hi[kMaxDim], cur[kMaxDim];
  for (int d = 0; d < dim_; ++d) {
    lo[d] = std::int64_t(std::floor((c[d] - r) / cell_));
    hi[d] = std::int64_t(std::floor((c[d] + r) / cell_));
    cur[d] = lo[d];
  }
  for (;;) {
    std::uint64_t key = mix_cells(cur, dim_);
    auto it = buckets_.find(key);
    if (it != buckets_.end()) {
      if (fn(it->second)) return;
    }
    int d = 0;
    while (d < dim_) {
      if (++cur[d] <= hi[d]) break;
      cur[d] = lo[d];
      ++d;
    }
    if (d == dim_) return;
  }
}

bool SphereHash::any_within(const VecN& c, double r) const {
  const double r2 = r * r;
  bool found = false;
  for_cells_in_ball(c, r, [&](const std::vector<std::int32_t>& bucket) {
    for (std::int32_t slot : bucket) {
      const double* p = coords_.data() + std::size_t(slot) * std::size_t(dim_);
      double s = 0;
      for (int d = 0; d < dim_; ++d) {
        double t = p[d] - c[d];
        s += t * t;
      }
      if (s <= r2) {
        found = true;
        return true;
      }
    }
    return false;
  });
  return found;
}

void SphereHash::collect_within(const VecN& c, double r, std::vector<std::int32_t>& out) const {
  out.clear();
  const double r2 = r * r;
  for_cells_in_ball(c, r, [&](const std::vector<std::int32_t>& bucket) {
    for (std::int32_t slot : bucket) {
      const double* p = coords_.data() + std::size_t(slot) * std::size_t(dim_);
      double s = 0;
      for (int d = 0; d < dim_; ++d) {
        double t = p[d] - c[d];
        s += t * t;
      }
      if (s <= r2) out.push_back(ids_[std::size_t(slot)]);
    }
    return false;
  });
}

std::int32_t SphereHash::nearest_within(const VecN& c, double r) const {
  const double r2cap = r * r;
  double best = HUGE_VAL;
  std::int32_t best_id = -1;
  for_cells_in_ball(c, r, [&](const std::vector<std::int32_t>& bucket) {
    for (std::int32_t slot : bucket) {
      const double* p = coords_.data() + std::size_t(slot) * std::size_t(dim_);
      double s = 0;
      for (int d = 0; d < dim_; ++d) {
        double t = p[d] - c[d];
        s += t * t;
      }
      std::int32_t id = ids_[std::size_t(slot)];
      if (s <= r2cap && (s < best || (s == best && id < best_id))) {
        best = s;
        best_id = id;
      }
    }
    return false;
  });
  return best_id;
}

}  // namespace spoly
