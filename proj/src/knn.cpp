#include "torent/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torent/errors.hpp"

namespace torent {

namespace {

// Ordering used everywhere: nearer first, ties to the smaller point index.
inline bool better(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

unsigned long long pow_sat(unsigned long long base, int exp) {
  unsigned long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<unsigned long long>::max() / base)
      return std::numeric_limits<unsigned long long>::max();
    r *= base;
  }
  return r;
}

int default_cells_per_axis(std::size_t n, int d) {
  // Exact floor(n^{1/d}) despite pow() rounding.
  int c = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / d)));
  if (c < 1) c = 1;
  while (pow_sat(static_cast<unsigned long long>(c) + 1, d) <= n) ++c;
  while (c > 1 && pow_sat(static_cast<unsigned long long>(c), d) > n) --c;
  return c;
}

int cap_cells(int c, std::size_t n, int d) {
  while (c > 1 && pow_sat(static_cast<unsigned long long>(c), d) > 8 * n) --c;
  return c;
}

inline int cell_of(double x, int cells) {
  int ci = static_cast<int>(x * cells);
  return ci >= cells ? cells - 1 : ci;
}

// Residues at modular distance exactly e from g on a circle of size cells.
inline int axis_residues(int g, int e, int cells, int out[2]) {
  if (e == 0) {
    out[0] = g;
    return 1;
  }
  if (2 * e < cells) {
    int hi = g + e;
    out[0] = hi >= cells ? hi - cells : hi;
    int lo = g - e;
    out[1] = lo < 0 ? lo + cells : lo;
    return 2;
  }
  if (2 * e == cells) {
    int hi = g + e;
    out[0] = hi >= cells ? hi - cells : hi;
    return 1;
  }
  return 0;
}

struct BoundedHeap {
  std::vector<Neighbor> data;
  std::size_t cap;

  explicit BoundedHeap(std::size_t k) : cap(k) { data.reserve(k); }

  static bool heap_less(const Neighbor& a, const Neighbor& b) { return better(a, b); }

  bool full() const { return data.size() == cap; }
  const Neighbor& worst() const { return data.front(); }

  void offer(const Neighbor& c) {
    if (data.size() < cap) {
      data.push_back(c);
      std::push_heap(data.begin(), data.end(), heap_less);
    } else if (better(c, data.front())) {
      std::pop_heap(data.begin(), data.end(), heap_less);
      data.back() = c;
      std::push_heap(data.begin(), data.end(), heap_less);
    }
  }

  std::vector<Neighbor> sorted() && {
    std::sort(data.begin(), data.end(), better);
    return std::move(data);
  }
};

void check_query(int dim, int qdim, std::size_t n, int k, std::optional<std::size_t> exclude) {
  if (qdim != dim) throw DimensionMismatch("knn query: point dimension mismatch");
  std::size_t available = n - ((exclude && *exclude < n) ? 1 : 0);
  if (k < 1) throw DomainError("knn query: k must be >= 1");
  if (static_cast<std::size_t>(k) > available)
    throw InsufficientPoints("knn query: k exceeds number of candidate points");
}

}  // namespace

KnnIndex build_index(const SampleSet& s, int cells_per_axis_override) {
  std::size_t n = s.size();
  if (n == 0) throw EmptyInput("build_index: empty SampleSet");
  int d = s.dim();

  int cells = cells_per_axis_override > 0 ? cells_per_axis_override
                                          : default_cells_per_axis(n, d);
  cells = cap_cells(cells, n, d);

  KnnIndex idx(s);
  idx.cells_per_axis_ = cells;
  std::size_t total = static_cast<std::size_t>(pow_sat(static_cast<unsigned long long>(cells), d));

  std::vector<std::uint32_t> counts(total, 0);
  auto flat_cell = [&](std::span<const double> row) {
    std::size_t id = 0;
    for (int j = d - 1; j >= 0; --j)
      id = id * static_cast<std::size_t>(cells) +
           static_cast<std::size_t>(cell_of(row[static_cast<std::size_t>(j)], cells));
    return id;
  };
  for (std::size_t i = 0; i < n; ++i) ++counts[flat_cell(s.row(i))];

  idx.cell_start_.assign(total + 1, 0);
  for (std::size_t c = 0; c < total; ++c)
    idx.cell_start_[c + 1] = idx.cell_start_[c] + counts[c];
  idx.ids_.resize(n);
  std::vector<std::uint32_t> cursor(idx.cell_start_.begin(), idx.cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    idx.ids_[cursor[flat_cell(s.row(i))]++] = static_cast<std::uint32_t>(i);
  return idx;
}

std::vector<Neighbor> knn_query(const KnnIndex& idx, std::span<const double> q, int k,
                                std::optional<std::size_t> exclude) {
  const SampleSet& pts = idx.points_;
  std::size_t n = pts.size();
  int d = pts.dim();
  check_query(d, static_cast<int>(q.size()), n, k, exclude);

  int cells = idx.cells_per_axis_;
  double cell_side = 1.0 / cells;
  int half = cells / 2;

  std::vector<int> home(static_cast<std::size_t>(d));
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  std::size_t st = 1;
  for (int j = 0; j < d; ++j) {
    home[static_cast<std::size_t>(j)] = cell_of(q[static_cast<std::size_t>(j)], cells);
    stride[static_cast<std::size_t>(j)] = st;
    st *= static_cast<std::size_t>(cells);
  }

  BoundedHeap heap(static_cast<std::size_t>(k));

  auto scan_cell = [&](std::size_t cell_id) {
    for (std::uint32_t t = idx.cell_start_[cell_id]; t < idx.cell_start_[cell_id + 1]; ++t) {
      std::size_t i = idx.ids_[t];
      if (exclude && i == *exclude) continue;
      heap.offer({i, torus_distance(q, pts.row(i))});
    }
  };

  // Cells whose axis-distance vector has Chebyshev norm exactly r. Every
  // point in such a cell is at torus distance >= (r-1) * cell_side, which
  // drives the stopping rule below.
  auto visit_shell = [&](int r) {
    auto rec = [&](auto&& self, int axis, std::size_t partial, bool has_r) -> void {
      if (axis == d) {
        if (has_r) scan_cell(partial);
        return;
      }
      bool last = axis == d - 1;
      int res[2];
      for (int e = 0; e <= std::min(r, half); ++e) {
        if (last && !has_r && e != r) continue;
        int cnt = axis_residues(home[static_cast<std::size_t>(axis)], e, cells, res);
        for (int t = 0; t < cnt; ++t)
          self(self, axis + 1,
               partial + static_cast<std::size_t>(res[t]) * stride[static_cast<std::size_t>(axis)],
               has_r || e == r);
      }
    };
    rec(rec, 0, 0, r == 0);
  };

  // r == 0 is the home cell; has_r starts true there.
  for (int r = 0; r <= half; ++r) {
    if (r >= 1 && heap.full()) {
      double shell_lower_bound = (r - 1) * cell_side;
      if (shell_lower_bound > heap.worst().distance) break;
    }
    if (r == 0) {
      std::size_t id = 0;
      for (int j = d - 1; j >= 0; --j)
        id = id * static_cast<std::size_t>(cells) +
             static_cast<std::size_t>(home[static_cast<std::size_t>(j)]);
      scan_cell(id);
    } else {
      visit_shell(r);
    }
  }
  return std::move(heap).sorted();
}

std::vector<Neighbor> knn_query(const KnnIndex& idx, const TorusPoint& q, int k,
                                std::optional<std::size_t> exclude) {
  return knn_query(idx, q.coords(), k, exclude);
}

std::vector<Neighbor> brute_force_knn(const SampleSet& s, std::span<const double> q, int k,
                                      std::optional<std::size_t> exclude) {
  std::size_t n = s.size();
  if (n == 0) throw EmptyInput("brute_force_knn: empty SampleSet");
  check_query(s.dim(), static_cast<int>(q.size()), n, k, exclude);

  std::vector<Neighbor> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (exclude && i == *exclude) continue;
    all.push_back({i, torus_distance(q, s.row(i))});
  }
  auto kth = all.begin() + k;
  std::nth_element(all.begin(), kth - 1, all.end(),
                   [](const Neighbor& a, const Neighbor& b) { return better(a, b); });
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end(),
            [](const Neighbor& a, const Neighbor& b) { return better(a, b); });
  return all;
}

std::vector<Neighbor> brute_force_knn(const SampleSet& s, const TorusPoint& q, int k,
                                      std::optional<std::size_t> exclude) {
  return brute_force_knn(s, q.coords(), k, exclude);
}

}  // namespace torent
