#include "covert_aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "covert_aoi/analysis.hpp"
#include "covert_aoi/rng.hpp"

namespace covert_aoi {

namespace {

constexpr std::uint64_t kAoiBlock = 1u << 20;

enum class SlotOutcome : std::uint8_t { idle = 0, failed = 1, decoded = 2 };

SlotOutcome slot_outcome(const SystemParams& sp, double p, std::uint64_t seed, std::uint64_t slot) {
  if (!rng::bernoulli(p, seed, slot, rng::Role::transmit)) return SlotOutcome::idle;
  ChannelDraw ch;
  ch.g_ab = rng::sample_gain(sp.lambda_ab, seed, slot, rng::Role::gain_ab);
  ch.g_bb = rng::sample_gain(sp.lambda_bb, seed, slot, rng::Role::gain_bb);
  const double denom = sp.phi_c * sp.p_b * ch.g_bb + sp.sigma_b2;
  const double sinr = denom > 0.0 ? sp.p_a * ch.g_ab / denom
                                  : std::numeric_limits<double>::infinity();
  return sinr > sp.beta ? SlotOutcome::decoded : SlotOutcome::failed;
}

unsigned resolve_threads(unsigned threads, std::uint64_t work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t cap = std::max<std::uint64_t>(1, work / 1024);
  return static_cast<unsigned>(std::min<std::uint64_t>(threads, cap));
}

// Runs fn(first, last) over contiguous index ranges. The partition affects
// scheduling only; every per-index draw is keyed by the global index.
template <typename Fn>
void parallel_ranges(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn fn) {
  const std::uint64_t n = end - begin;
  threads = resolve_threads(threads, n);
  if (threads <= 1) {
    fn(0u, begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = begin + chunk * t;
    const std::uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

} // namespace

AoiStats simulate_aoi(const SystemParams& sp, double p, std::uint64_t slots,
                      std::uint64_t seed, unsigned threads) {
  validate(sp);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_aoi: p out of [0,1]");
  if (slots == 0) throw std::invalid_argument("simulate_aoi: slots must be >= 1");

  AoiStats st;
  st.slots = slots;

  std::vector<SlotOutcome> outcomes(static_cast<std::size_t>(std::min(kAoiBlock, slots)));
  std::uint64_t last_success = 0; // virtual success at slot 0

  for (std::uint64_t block_start = 0; block_start < slots; block_start += kAoiBlock) {
    const std::uint64_t block_end = std::min(slots, block_start + kAoiBlock);
    parallel_ranges(block_start, block_end, threads,
                    [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
                      for (std::uint64_t s = lo; s < hi; ++s)
                        outcomes[static_cast<std::size_t>(s - block_start)] =
                            slot_outcome(sp, p, seed, s);
                    });
    // Sequential renewal bookkeeping over the precomputed outcomes.
    for (std::uint64_t s = block_start; s < block_end; ++s) {
      const std::uint64_t t = s + 1; // 1-based slot time
      st.aoi_sum += t - last_success;
      const SlotOutcome o = outcomes[static_cast<std::size_t>(s - block_start)];
      if (o == SlotOutcome::idle) continue;
      ++st.attempts;
      if (o == SlotOutcome::decoded) {
        ++st.successes;
        const std::uint64_t x = t - last_success;
        st.x_sum += x;
        st.x2_sum += x * x;
        last_success = t;
      }
    }
  }

  st.time_avg_aoi = static_cast<double>(st.aoi_sum) / static_cast<double>(slots);
  if (st.successes > 0) {
    st.mean_x = static_cast<double>(st.x_sum) / static_cast<double>(st.successes);
    st.mean_x2 = static_cast<double>(st.x2_sum) / static_cast<double>(st.successes);
  }
  if (st.attempts > 0)
    st.empirical_q = static_cast<double>(st.successes) / static_cast<double>(st.attempts);
  return st;
}

DetectionStats simulate_detection(const SystemParams& sp, double p, std::uint64_t trials,
                                  std::uint64_t seed, std::optional<double> fixed_tau,
                                  unsigned threads) {
  validate(sp);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_detection: p out of [0,1]");
  if (trials == 0) throw std::invalid_argument("simulate_detection: trials must be >= 1");
  if (fixed_tau && std::isnan(*fixed_tau))
    throw std::invalid_argument("simulate_detection: fixed tau must not be NaN");

  const double rho = rho0(sp, p);
  const unsigned n_threads = resolve_threads(threads, trials);

  struct Tally {
    std::uint64_t h1 = 0;
    std::uint64_t fa = 0;
    std::uint64_t md = 0;
  };
  std::vector<Tally> partial(n_threads);

  parallel_ranges(0, trials, n_threads, [&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
    Tally t;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const bool h1 = rng::bernoulli(p, seed, i, rng::Role::hypothesis);
      ChannelDraw ch;
      ch.g_aw = rng::sample_gain(sp.lambda_aw, seed, i, rng::Role::gain_aw);
      ch.g_bw = rng::sample_gain(sp.lambda_bw, seed, i, rng::Role::gain_bw);
      const double power = sp.p_b * ch.g_bw + sp.sigma_w2 + (h1 ? sp.p_a * ch.g_aw : 0.0);
      // The warden tracks the transmitter-warden gain, so the threshold is
      // recomputed per realization in optimal mode.
      const double tau = fixed_tau ? *fixed_tau
                                   : (ch.g_aw >= rho ? ch.g_aw * sp.p_a + sp.sigma_w2
                                                     : std::numeric_limits<double>::infinity());
      const bool decide_tx = power > tau;
      if (h1) {
        ++t.h1;
        if (!decide_tx) ++t.md;
      } else if (decide_tx) {
        ++t.fa;
      }
    }
    partial[tid] = t;
  });

  DetectionStats st;
  st.trials = trials;
  for (const auto& t : partial) {
    st.h1_trials += t.h1;
    st.false_alarms += t.fa;
    st.missed_detections += t.md;
  }
  st.h0_trials = trials - st.h1_trials;
  st.empirical_xi = static_cast<double>(st.false_alarms + st.missed_detections) /
                    static_cast<double>(trials);
  if (st.h0_trials > 0)
    st.empirical_pfa = static_cast<double>(st.false_alarms) / static_cast<double>(st.h0_trials);
  if (st.h1_trials > 0)
    st.empirical_pmd = static_cast<double>(st.missed_detections) / static_cast<double>(st.h1_trials);
  return st;
}

ThresholdSweepResult threshold_sweep(const SystemParams& sp, double p, double g_aw,
                                     std::span<const double> tau_grid,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads) {
  validate(sp);
  if (tau_grid.empty()) throw std::invalid_argument("threshold_sweep: empty grid");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("threshold_sweep: p out of [0,1]");
  if (!(g_aw >= 0.0)) throw std::invalid_argument("threshold_sweep: g_aw must be >= 0");
  if (trials == 0) throw std::invalid_argument("threshold_sweep: trials must be >= 1");

  const std::size_t n_taus = tau_grid.size();
  const unsigned n_threads = resolve_threads(threads, trials);
  std::vector<std::vector<std::uint64_t>> partial(n_threads,
                                                  std::vector<std::uint64_t>(n_taus, 0));

  parallel_ranges(0, trials, n_threads, [&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
    auto& errors = partial[tid];
    for (std::uint64_t i = lo; i < hi; ++i) {
      const bool h1 = rng::bernoulli(p, seed, i, rng::Role::hypothesis);
      const double g_bw = rng::sample_gain(sp.lambda_bw, seed, i, rng::Role::gain_bw);
      const double power = sp.p_b * g_bw + sp.sigma_w2 + (h1 ? sp.p_a * g_aw : 0.0);
      for (std::size_t j = 0; j < n_taus; ++j) {
        const bool decide_tx = power > tau_grid[j];
        if (decide_tx != h1) ++errors[j];
      }
    }
  });

  ThresholdSweepResult res;
  res.curve.resize(n_taus);
  for (std::size_t j = 0; j < n_taus; ++j) {
    std::uint64_t errors = 0;
    for (const auto& part : partial) errors += part[j];
    res.curve[j] = {tau_grid[j], errors,
                    static_cast<double>(errors) / static_cast<double>(trials)};
    if (j == 0 || res.curve[j].xi < res.best_xi) {
      res.best_index = j;
      res.best_tau = tau_grid[j];
      res.best_xi = res.curve[j].xi;
    }
  }
  return res;
}

} // namespace covert_aoi
