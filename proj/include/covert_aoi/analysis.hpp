#pragma once

#include <string_view>

#include "covert_aoi/params.hpp"

// Closed-form performance expressions: decoding probability, age-of-information
// moments, and the warden's radiometer detection quantities. Everything here is
// a pure function of its arguments.

namespace covert_aoi {

// The expected detection error for p < 1/2 exists in two algebraic forms that
// disagree; both are kept behind a selector and the Monte Carlo simulator
// adjudicates. `paper` is the piecewise form (1-p)*theta1*phi + p*(1-phi);
// `derived` carries the conditional expectation through exactly, giving
// (1-p)*theta1*phi + p - (1-p)*phi. Default everywhere: derived.
enum class XiVariant { paper, derived };

XiVariant variant_from_string(std::string_view name); // throws on unknown name
const char* to_string(XiVariant v);

struct IntervalMoments {
  double mean_x;  // E[X]
  double mean_x2; // E[X^2]
};

// Probability q that the receiver decodes a transmitted update through the
// self-interference and noise: q = [P_A l_BB / (P_A l_BB + beta phi P_B l_AB)]
// * exp(-l_AB beta sigma_B^2 / P_A).
double decode_success_prob(const SystemParams& sp);

// Moments of the inter-success interval: E[X] = 1/(pq),
// E[X^2] = (2 - pq)/(pq)^2. Both +inf when pq = 0.
IntervalMoments interval_moments(double p, double q);

// Long-run time-average age, E[X^2]/(2 E[X]) + 1/2 = 1/(pq); +inf when pq = 0.
double average_aoi(double p, double q);

// Channel-quality threshold separating the warden's radiometer regime from
// blind guessing: rho0 = (P_B / (l_BW P_A)) ln((1-p)/p). +inf at p = 0,
// -inf at p = 1, strictly decreasing in between.
double rho0(const SystemParams& sp, double p);

// Warden's detection-error-minimizing radiometer threshold:
// g_aw * P_A + sigma_W^2 when g_aw >= rho0, +inf otherwise.
double optimal_threshold(const SystemParams& sp, double p, double g_aw);

// Minimum detection error at the optimal threshold, given the instantaneous
// transmitter-warden gain: (1-p) exp(-l_BW g_aw P_A / P_B) in the radiometer
// regime, p in the blind regime.
double min_det_error(const SystemParams& sp, double p, double g_aw);

// Detection error of the radiometer at an arbitrary threshold tau
// (three-branch piecewise form; tau = +inf yields p).
double det_error_given_threshold(const SystemParams& sp, double p, double g_aw, double tau);

// Fading-averaged factor l_AW P_B / (l_AW P_B + l_BW P_A).
double theta1(const SystemParams& sp);

// exp(-(1/(1-theta1)) ln((1-p)/p)). Only the p < 1/2 branch of
// expected_det_error consumes it; the raw value exceeds 1 for p > 1/2.
double varphi(const SystemParams& sp, double p);

// Expected detection error over the transmitter-warden fading.
// (1-p)*theta1 for p >= 1/2; the variant-selected form below 1/2.
double expected_det_error(const SystemParams& sp, double p, XiVariant variant);

// All detection quantities for one (p, g_aw) realization. theta2/theta3 are
// evaluated at tau_star; probability-valued fields stay in [0,1].
struct DetectionReport {
  double rho0 = 0.0;
  double tau_star = 0.0;    // mW, may be +inf
  double xi_star = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double varphi = 0.0;
  double xi_bar_star = 0.0;
};

DetectionReport detection_report(const SystemParams& sp, double p, double g_aw,
                                 XiVariant variant = XiVariant::derived);

} // namespace covert_aoi
