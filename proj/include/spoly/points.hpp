#pragma once
// PointCloud: an immutable batch of unit vectors with its provenance
// (dimension, Poisson intensity, seed) and a dimension-major copy for the
// kernel sweeps. Built once by the sampler or a loader, then shared.

#include <cstdint>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/kernels.hpp"

namespace spoly {

struct PointCloud {
  int dim = 0;
  double intensity = 0.0;   // Poisson rate used to draw the batch size
  std::uint64_t seed = 0;
  std::vector<double> rows; // count x dim, row-major
  std::size_t count = 0;
  kern::SoaPoints soa;      // dimension-major copy, built at construction

  PointCloud() = default;
  PointCloud(int n, double m, std::uint64_t s, std::vector<double> r)
      : dim(n), intensity(m), seed(s), rows(std::move(r)) {
    count = rows.size() / std::size_t(dim);
    soa = kern::SoaPoints::from_rows(rows.data(), count, dim);
  }

  PointsView view() const { return PointsView{rows.data(), count, dim}; }
  VecN point(std::size_t i) const { return view().vec(i); }
};

}  // namespace spoly
