#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "torent/torus.hpp"

namespace torent {

struct Neighbor {
  std::size_t index;
  double distance;
  bool operator==(const Neighbor&) const = default;
};

/// Immutable cell-grid index over a SampleSet for exact k-NN queries under
/// the torus metric. The grid partitions [0,1)^d into cells_per_axis^d
/// congruent cells; queries expand Chebyshev shells of cells in modular
/// coordinates, so wraparound needs no mirrored queries.
class KnnIndex {
 public:
  const SampleSet& points() const noexcept { return points_; }
  int cells_per_axis() const noexcept { return cells_per_axis_; }

 private:
  friend KnnIndex build_index(const SampleSet&, int);
  friend std::vector<Neighbor> knn_query(const KnnIndex&, std::span<const double>, int,
                                         std::optional<std::size_t>);

  explicit KnnIndex(SampleSet points) : points_(std::move(points)) {}

  SampleSet points_;
  int cells_per_axis_ = 1;
  std::vector<std::uint32_t> cell_start_;  // CSR offsets, size cells+1
  std::vector<std::uint32_t> ids_;         // point ids grouped by cell, ascending within
};

/// Builds the index. cells_per_axis defaults to max(1, floor(n^{1/d})) and
/// is capped so the total cell count stays <= 8n.
KnnIndex build_index(const SampleSet& s, int cells_per_axis_override = 0);

/// Exactly the k nearest indexed points to q (excluding `exclude` if set),
/// ascending by (distance, index); ties broken by the smaller point index.
/// Agrees with brute_force_knn output exactly.
std::vector<Neighbor> knn_query(const KnnIndex& idx, std::span<const double> q, int k,
                                std::optional<std::size_t> exclude = {});
std::vector<Neighbor> knn_query(const KnnIndex& idx, const TorusPoint& q, int k,
                                std::optional<std::size_t> exclude = {});

/// Reference O(n d) scan with partial selection; the oracle for knn_query.
std::vector<Neighbor> brute_force_knn(const SampleSet& s, std::span<const double> q, int k,
                                      std::optional<std::size_t> exclude = {});
std::vector<Neighbor> brute_force_knn(const SampleSet& s, const TorusPoint& q, int k,
                                      std::optional<std::size_t> exclude = {});

}  // namespace torent
