#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covert_aoi/analysis.hpp"

// Maximizes the expected detection error over the transmit probability subject
// to the average-age budget: max_p expected_det_error(p) s.t. 1/(pq) <= delta,
// 0 <= p <= 1. The constraint rewrites as p >= 1/(q delta), which splits the
// solution into the boundary case (p* = 1/(q delta) when that lies in
// [1/2, 1]) and the sub-half case (compare the value at p = 1/2 against a
// one-dimensional search over [1/(q delta), 1/2)).

namespace covert_aoi {

enum class SolveCase { infeasible, case1_boundary, case2_half, case2_interior };

const char* to_string(SolveCase c);

struct OptimizationResult {
  bool feasible = false;
  SolveCase case_taken = SolveCase::infeasible;
  std::optional<double> p_star;      // present iff feasible
  std::optional<double> xi_bar_star; // objective at p_star
  std::optional<double> rho1;        // P_A solving q(P_A) = 1/delta, mW
  std::optional<double> rho2;        // P_A solving q(P_A) = 2/delta, mW
  double q = 0.0;                    // decoding probability used
  std::string note;                  // infeasibility reason, when any
};

OptimizationResult solve_p_star(const SystemParams& sp, XiVariant variant);

// Solves decode_success_prob(P_A) = target for P_A (other parameters fixed)
// by bisection on log P_A with automatic bracket expansion. Throws when the
// target is outside (0,1) or no crossing exists within the expanded bracket.
double find_rho(const SystemParams& sp, double target,
                double bracket_lo_mw = 1e-3, double bracket_hi_mw = 1e3);

enum class SweepAxis { delta, p_a, p_b };

const char* to_string(SweepAxis a);

struct SweepRow {
  double axis_value = 0.0; // delta in slots, powers in linear mW
  bool ok = false;
  std::string error;
  OptimizationResult result;
};

// One solve per grid point, in order. Per-point failures become flagged rows;
// the sweep itself never aborts. Grid must be non-empty and strictly
// increasing.
std::vector<SweepRow> sweep(const SystemParams& sp, SweepAxis axis,
                            std::span<const double> grid, XiVariant variant);

} // namespace covert_aoi
