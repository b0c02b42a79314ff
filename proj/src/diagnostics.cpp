#include "spectralfield/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "spectralfield/errors.hpp"

namespace spectralfield {

IndexReport indexReport(const SpectralDecomposition& decomp, int j) {
  if (j < 1 || j > decomp.size()) throw DimensionError("repeated index out of range");
  const int g = decomp.groupOf(j - 1);
  IndexReport out;
  out.j_star_lo = decomp.groups[g].first + 1;
  out.j_star_hi = decomp.groups[g].last + 1;
  out.d = decomp.groups[g].multiplicity;
  out.s_upto_j = g + 1;
  out.s_total = decomp.groupCount();
  for (int i = 0; i < decomp.size(); ++i)
    out.inv_mult_sum += 1.0 / decomp.groups[decomp.groupOf(i)].multiplicity;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Supported: return "supported";
    case Verdict::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

namespace {

std::vector<Eigen::VectorXd> gridPoints(const Box& box, const std::vector<int>& grid) {
  const int n = static_cast<int>(box.lo.size());
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> idx(n, 0);
  long total = 1;
  for (int c : grid) total *= std::max(c, 1);
  pts.reserve(total);
  for (long p = 0; p < total; ++p) {
    Eigen::VectorXd x(n);
    long rem = p;
    for (int a = n - 1; a >= 0; --a) {
      const int c = std::max(grid[a], 1);
      const int i = static_cast<int>(rem % c);
      rem /= c;
      x[a] = (c == 1) ? 0.5 * (box.lo[a] + box.hi[a])
                      : box.lo[a] + (box.hi[a] - box.lo[a]) * i / (c - 1);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

int groupCountAt(const PolyMatrixField& field, const Eigen::VectorXd& x,
                 const ClusterConfig& cfg) {
  return decompose(field.eval(x), cfg).groupCount();
}

double minGapOf(const SpectralDecomposition& d) {
  double g = std::numeric_limits<double>::infinity();
  for (int i = 1; i < d.groupCount(); ++i)
    g = std::min(g, d.groups[i].value - d.groups[i - 1].value);
  return g;
}

}  // namespace

ScanReport scanConstantDimension(const PolyMatrixField& field, const Box& box,
                                 const std::vector<int>& grid, int j,
                                 const ClusterConfig& cfg) {
  const int n = field.ambientDim();
  if (box.lo.size() != n || box.hi.size() != n || static_cast<int>(grid.size()) != n)
    throw DimensionError("box/grid dimension does not match field");
  if (j < 1 || j > field.rows()) throw DimensionError("repeated index out of range");

  ScanReport out;
  out.grid = grid;
  out.sample_points = gridPoints(box, grid);
  out.min_gap = std::numeric_limits<double>::infinity();

  for (const auto& x : out.sample_points) {
    const SpectralDecomposition d = decompose(field.eval(x), cfg);
    out.group_counts.push_back(d.groupCount());
    out.dims_of_j.push_back(d.groups[d.groupOf(j - 1)].multiplicity);
    out.min_gap = std::min(out.min_gap, minGapOf(d));
  }

  out.constant_dim = true;
  for (int d : out.dims_of_j)
    if (d != out.dims_of_j.front()) { out.constant_dim = false; break; }

  // Bracket group-count changes along grid edges by bisection.
  const auto& pts = out.sample_points;
  std::vector<long> strides(n, 1);
  for (int a = n - 2; a >= 0; --a) strides[a] = strides[a + 1] * std::max(grid[a + 1], 1);
  for (size_t p = 0; p < pts.size(); ++p) {
    for (int a = 0; a < n; ++a) {
      const int c = std::max(grid[a], 1);
      const long i_a = (static_cast<long>(p) / strides[a]) % c;
      if (i_a + 1 >= c) continue;
      const size_t q = p + strides[a];
      if (out.group_counts[p] == out.group_counts[q]) continue;
      CrossingBracket cb;
      cb.segment_a = pts[p];
      cb.segment_b = pts[q];
      Eigen::VectorXd lo = pts[p], hi = pts[q];
      const int s_lo = out.group_counts[p];
      for (int it = 0; it < 40; ++it) {
        const Eigen::VectorXd mid = 0.5 * (lo + hi);
        if (groupCountAt(field, mid, cfg) == s_lo) lo = mid; else hi = mid;
      }
      cb.bracket_a = lo;
      cb.bracket_b = hi;
      out.crossings.push_back(std::move(cb));
    }
  }
  return out;
}

ConditionReport checkEquivalenceConditions(const PolyMatrixField& field, const Box& box,
                                           const std::vector<int>& grid, int j,
                                           const ClusterConfig& cfg) {
  ConditionReport out;
  out.scan = scanConstantDimension(field, box, grid, j, cfg);
  const auto& pts = out.scan.sample_points;
  const int n = field.ambientDim();

  if (pts.size() < 2) {
    out.verdict = Verdict::Inconclusive;
    out.detail = "insufficient samples to compare";
    return out;
  }

  out.constant_dim = out.scan.constant_dim;
  out.constant_group_count = true;
  for (int s : out.scan.group_counts)
    if (s != out.scan.group_counts.front()) { out.constant_group_count = false; break; }

  if (!out.constant_dim) {
    // Multiplicity is upper semicontinuous; the jump marks the crossing.
    int max_d = 0;
    size_t witness = 0;
    for (size_t p = 0; p < pts.size(); ++p)
      if (out.scan.dims_of_j[p] > max_d) { max_d = out.scan.dims_of_j[p]; witness = p; }
    out.verdict = Verdict::Refuted;
    out.witness = pts[witness];
    out.detail = "multiplicity of group " + std::to_string(j) + " jumps to " +
                 std::to_string(max_d) + " at the witness sample";
    return out;
  }

  // Continuity proxy for P_j between adjacent samples.
  double lip = 0.0;
  for (const auto& x : pts)
    for (int a = 0; a < n; ++a)
      lip = std::max(lip, field.dirDeriv(Eigen::VectorXd::Unit(n, a), x).norm());
  lip *= std::sqrt(static_cast<double>(n));

  double max_step = 0.0;
  for (int a = 0; a < n; ++a)
    if (grid[a] > 1) max_step = std::max(max_step, (box.hi[a] - box.lo[a]) / (grid[a] - 1));
  out.proj_jump_threshold = 10.0 * max_step * lip / out.scan.min_gap;

  std::vector<long> strides(n, 1);
  for (int a = n - 2; a >= 0; --a) strides[a] = strides[a + 1] * std::max(grid[a + 1], 1);
  auto projAt = [&](size_t p) {
    const SpectralDecomposition d = decompose(field.eval(pts[p]), cfg);
    return d.groups[d.groupOf(j - 1)].projection;
  };
  size_t jump_witness = 0;
  for (size_t p = 0; p < pts.size(); ++p) {
    for (int a = 0; a < n; ++a) {
      const int c = std::max(grid[a], 1);
      if ((static_cast<long>(p) / strides[a]) % c + 1 >= c) continue;
      const double jump = (projAt(p + strides[a]) - projAt(p)).norm();
      if (jump > out.max_proj_jump) { out.max_proj_jump = jump; jump_witness = p; }
    }
  }
  out.continuity_proxy_ok = out.max_proj_jump <= out.proj_jump_threshold;

  if (!out.continuity_proxy_ok) {
    out.verdict = Verdict::Refuted;
    out.witness = pts[jump_witness];
    out.detail = "projection jump between adjacent samples exceeds the continuity proxy bound";
  } else {
    out.verdict = Verdict::Supported;
    out.detail = "constant multiplicity and projection continuity proxy hold on all samples";
  }
  return out;
}

}  // namespace spectralfield
