#include "covert_aoi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace covert_aoi {

namespace {

constexpr double kBracketLoLimit = 1e-12; // mW
constexpr double kBracketHiLimit = 1e12;  // mW
constexpr double kObjectiveTie = 1e-12;
constexpr double kSearchTol = 1e-10;
constexpr int kCoarseGrid = 1024;

// Golden-section maximization on [a, b]; the coarse grid that produced the
// bracket guards against multimodality. Returns the better endpoint probe.
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

// Coarse grid, golden-section refinement, then one parabolic-vertex step with
// a wide stencil. The stencil resolves the maximizer below the flat zone where
// objective differences round to zero in double precision.
ScalarMax maximize_on(const std::function<double(double)>& f, double lo, double hi) {
  ScalarMax best{lo, f(lo)};
  for (int i = 1; i <= kCoarseGrid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / kCoarseGrid;
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  const double step = (hi - lo) / kCoarseGrid;
  const double a = std::max(lo, best.x - step);
  const double b = std::min(hi, best.x + step);
  if (const auto [xg, vg] = golden_max(f, a, b, kSearchTol); vg >= best.value) best = {xg, vg};

  double h = 1e-5;
  while (h > 1e-8 && (best.x - h < lo || best.x + h > hi)) h /= 2.0;
  if (best.x - h >= lo && best.x + h <= hi) {
    const double f0 = f(best.x - h);
    const double f1 = best.value;
    const double f2 = f(best.x + h);
    const double curve = f0 - 2.0 * f1 + f2;
    if (curve < 0.0) {
      const double vertex = best.x + 0.5 * h * (f0 - f2) / curve;
      if (vertex >= lo && vertex <= hi) {
        const double fv = f(vertex);
        if (fv >= best.value) best = {vertex, fv};
      }
    }
  }
  return best;
}

} // namespace

const char* to_string(SolveCase c) {
  switch (c) {
    case SolveCase::infeasible: return "infeasible";
    case SolveCase::case1_boundary: return "case1_boundary";
    case SolveCase::case2_half: return "case2_half";
    case SolveCase::case2_interior: return "case2_interior";
  }
  return "?";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::delta: return "delta";
    case SweepAxis::p_a: return "p_a";
    case SweepAxis::p_b: return "p_b";
  }
  return "?";
}

double find_rho(const SystemParams& sp, double target, double bracket_lo_mw, double bracket_hi_mw) {
  if (!(target > 0.0) || !(target < 1.0))
    throw std::invalid_argument("find_rho: target must lie in (0,1)");
  if (!(bracket_lo_mw > 0.0) || !(bracket_hi_mw > bracket_lo_mw))
    throw std::invalid_argument("find_rho: bad bracket hint");

  const auto q_at = [&sp](double p_a) {
    SystemParams probe = sp;
    probe.p_a = p_a;
    return decode_success_prob(probe);
  };

  double lo = bracket_lo_mw;
  double hi = bracket_hi_mw;
  double q_lo = q_at(lo);
  double q_hi = q_at(hi);
  while (q_lo > target && lo > kBracketLoLimit) {
    lo = std::max(lo / 16.0, kBracketLoLimit);
    q_lo = q_at(lo);
  }
  while (q_hi < target && hi < kBracketHiLimit) {
    hi = std::min(hi * 16.0, kBracketHiLimit);
    q_hi = q_at(hi);
  }
  if (q_lo > target) {
    if (q_lo == 1.0 && q_hi == 1.0)
      throw std::runtime_error("find_rho: q constant at 1, no crossing");
    throw std::runtime_error("find_rho: no crossing above the lower bracket limit");
  }
  if (q_hi < target)
    throw std::runtime_error("find_rho: bracket expansion failed, no finite root below " +
                             std::to_string(kBracketHiLimit) + " mW");

  double x_lo = std::log(lo);
  double x_hi = std::log(hi);
  double mid = std::exp(0.5 * (x_lo + x_hi));
  for (int i = 0; i < 500 && x_hi - x_lo > 1e-16; ++i) {
    mid = std::exp(0.5 * (x_lo + x_hi));
    const double q_mid = q_at(mid);
    if (q_mid < target)
      x_lo = std::log(mid);
    else
      x_hi = std::log(mid);
  }
  if (std::abs(q_at(mid) - target) > 1e-10)
    throw std::runtime_error("find_rho: bisection failed to meet tolerance");
  return mid;
}

OptimizationResult solve_p_star(const SystemParams& sp, XiVariant variant) {
  validate(sp);
  OptimizationResult res;
  res.q = decode_success_prob(sp);

  const auto try_rho = [&sp](double target) -> std::optional<double> {
    if (!(target > 0.0) || !(target < 1.0)) return std::nullopt;
    try {
      return find_rho(sp, target);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  res.rho1 = try_rho(1.0 / sp.delta);
  res.rho2 = try_rho(2.0 / sp.delta);

  const double p_min = 1.0 / (res.q * sp.delta);
  if (!(p_min <= 1.0)) {
    res.feasible = false;
    res.case_taken = SolveCase::infeasible;
    res.note = sp.delta <= 1.0 ? "average AoI cannot be below 1 slot"
                               : "required p >= 1/(q*delta) exceeds 1";
    return res;
  }

  res.feasible = true;
  const double th1 = theta1(sp);

  if (p_min >= 0.5) {
    res.case_taken = SolveCase::case1_boundary;
    res.p_star = p_min;
    res.xi_bar_star = (1.0 - p_min) * th1;
    return res;
  }

  // Sub-half regime: candidate p' = 1/2 versus the best of the p < 1/2 branch.
  // The unconstrained maximizer is computed on the delta-independent interval
  // [0, 1/2] first, so the solution plateaus exactly once the age budget stops
  // binding; the constrained search only runs when the budget cuts it off.
  const double xi_half = 0.5 * th1;
  const auto objective = [&](double p) { return expected_det_error(sp, p, variant); };

  ScalarMax best = maximize_on(objective, 0.0, 0.5);
  if (best.x < p_min) best = maximize_on(objective, p_min, 0.5);

  if (best.value > xi_half + kObjectiveTie) {
    res.case_taken = SolveCase::case2_interior;
    res.p_star = best.x;
    res.xi_bar_star = best.value;
  } else {
    res.case_taken = SolveCase::case2_half;
    res.p_star = 0.5;
    res.xi_bar_star = xi_half;
  }
  return res;
}

std::vector<SweepRow> sweep(const SystemParams& sp, SweepAxis axis,
                            std::span<const double> grid, XiVariant variant) {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must be non-empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep: grid must be strictly increasing");

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const double value : grid) {
    SweepRow row;
    row.axis_value = value;
    SystemParams point = sp;
    switch (axis) {
      case SweepAxis::delta: point.delta = value; break;
      case SweepAxis::p_a: point.p_a = value; break;
      case SweepAxis::p_b: point.p_b = value; break;
    }
    try {
      row.result = solve_p_star(point, variant);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace covert_aoi
