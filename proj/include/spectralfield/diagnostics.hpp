#ifndef SPECTRALFIELD_DIAGNOSTICS_HPP
#define SPECTRALFIELD_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spectralfield/field.hpp"
#include "spectralfield/spectral.hpp"

namespace spectralfield {

/// Index bookkeeping for one repeated index j: the boundaries j_*, j^*
/// of its eigenvalue group, the multiplicity, and the distinct-value
/// counts. All indices 1-based to match the partial-sum conventions.
struct IndexReport {
  int j_star_lo = 0;      // j_*
  int j_star_hi = 0;      // j^*
  int d = 0;              // multiplicity of lambda_j
  int s_upto_j = 0;       // distinct eigenvalues <= lambda_j
  int s_total = 0;        // distinct eigenvalues of X
  double inv_mult_sum = 0.0;  // sum over repeated i of 1/d_i; equals s_total
};

IndexReport indexReport(const SpectralDecomposition& decomp, int j);  // j 1-based

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct CrossingBracket {
  Eigen::VectorXd segment_a;  // grid edge endpoints
  Eigen::VectorXd segment_b;
  Eigen::VectorXd bracket_a;  // bisection-narrowed interval
  Eigen::VectorXd bracket_b;
};

struct ScanReport {
  std::vector<Eigen::VectorXd> sample_points;  // grid order
  std::vector<int> group_counts;               // s at each sample
  std::vector<int> dims_of_j;                  // d_j at each sample
  std::vector<CrossingBracket> crossings;
  bool constant_dim = false;
  double min_gap = 0.0;  // minimal inter-group gap over all samples
  std::vector<int> grid;
};

/// Decompose the field at every grid point of the box and report whether
/// the j-th group keeps a constant multiplicity. Group-count changes
/// along grid edges are narrowed by bisection (the gap is continuous, so
/// bracketing is sound).
ScanReport scanConstantDimension(const PolyMatrixField& field, const Box& box,
                                 const std::vector<int>& grid, int j,
                                 const ClusterConfig& cfg = {});  // j 1-based

enum class Verdict { Supported, Refuted, Inconclusive };

std::string to_string(Verdict v);

struct ConditionReport {
  Verdict verdict = Verdict::Inconclusive;
  ScanReport scan;
  bool constant_dim = false;        // evidence for (b)/(d)
  bool constant_group_count = false;  // evidence for constant s
  double max_proj_jump = 0.0;       // max ||P_j(x_{i+1}) - P_j(x_i)|| over adjacent samples
  double proj_jump_threshold = 0.0; // continuity proxy bound actually applied
  bool continuity_proxy_ok = false;
  Eigen::VectorXd witness;          // sample refuting / flagging, when any
  std::string detail;
};

/// Sample-based evidence for the equivalence conditions: constant
/// multiplicity, projection continuity proxy between adjacent samples,
/// constant distinct-eigenvalue count.
ConditionReport checkEquivalenceConditions(const PolyMatrixField& field, const Box& box,
                                           const std::vector<int>& grid, int j,
                                           const ClusterConfig& cfg = {});  // j 1-based

}  // namespace spectralfield

#endif
