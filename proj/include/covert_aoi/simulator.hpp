#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "covert_aoi/params.hpp"

// Seedable slot-level Monte Carlo of the full system: the age-of-information
// renewal process at the receiver and the radiometer hypothesis test at the
// warden. Serves as the independent oracle for every closed form. All draws
// come from counter-based substreams keyed by (seed, slot/trial index, role),
// so results are bit-identical for any thread count.

namespace covert_aoi {

struct AoiStats {
  std::uint64_t slots = 0;
  std::uint64_t attempts = 0;  // slots with a transmission
  std::uint64_t successes = 0; // slots with a successful decoding
  std::uint64_t aoi_sum = 0;   // sum of A(t), t = 1..slots
  std::uint64_t x_sum = 0;     // sum over complete inter-success intervals
  std::uint64_t x2_sum = 0;
  double time_avg_aoi = 0.0;
  double mean_x = std::numeric_limits<double>::quiet_NaN();
  double mean_x2 = std::numeric_limits<double>::quiet_NaN();
  double empirical_q = std::numeric_limits<double>::quiet_NaN();
};

struct DetectionStats {
  std::uint64_t trials = 0;
  std::uint64_t h0_trials = 0;
  std::uint64_t h1_trials = 0;
  std::uint64_t false_alarms = 0;      // decided "transmission" under H0
  std::uint64_t missed_detections = 0; // decided "no transmission" under H1
  double empirical_xi = 0.0;
  double empirical_pfa = std::numeric_limits<double>::quiet_NaN();
  double empirical_pmd = std::numeric_limits<double>::quiet_NaN();
};

// Slot loop: Bernoulli(p) transmission; on transmit, success iff the SINR
// P_A g_ab / (phi P_B g_bb + sigma_B^2) exceeds beta. Age resets to 1 the slot
// after a success. The trailing incomplete interval is excluded from the
// moment tallies but stays in the time average.
AoiStats simulate_aoi(const SystemParams& sp, double p, std::uint64_t slots,
                      std::uint64_t seed, unsigned threads = 1);

// Per trial: hypothesis ~ Bernoulli(p); fresh gain draws; received average
// power P_B g_bw + sigma_W^2 (+ P_A g_aw under H1); warden decides
// "transmission" iff the power exceeds the threshold. Default threshold is
// the per-realization optimal one; fixed_tau overrides it (may be +inf).
DetectionStats simulate_detection(const SystemParams& sp, double p, std::uint64_t trials,
                                  std::uint64_t seed,
                                  std::optional<double> fixed_tau = std::nullopt,
                                  unsigned threads = 1);

struct ThresholdSweepPoint {
  double tau = 0.0;
  std::uint64_t errors = 0;
  double xi = 0.0;
};

struct ThresholdSweepResult {
  std::vector<ThresholdSweepPoint> curve; // grid order
  std::size_t best_index = 0;
  double best_tau = 0.0;
  double best_xi = 0.0;
};

// Empirical detection error versus threshold at a fixed transmitter-warden
// gain; all grid points share the same trial draws. Grid may contain a +inf
// sentinel (the always-decide-H0 detector).
ThresholdSweepResult threshold_sweep(const SystemParams& sp, double p, double g_aw,
                                     std::span<const double> tau_grid,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads = 1);

} // namespace covert_aoi
