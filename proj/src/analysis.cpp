#include "covert_aoi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace covert_aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(-l_BW g_aw P_A / P_B), with the P_B = 0 limit handled explicitly.
double radiometer_h0_tail(const SystemParams& sp, double g_aw) {
  if (sp.p_b == 0.0) return (g_aw * sp.p_a > 0.0) ? 0.0 : 1.0;
  return std::exp(-sp.lambda_bw * g_aw * sp.p_a / sp.p_b);
}

} // namespace

XiVariant variant_from_string(std::string_view name) {
  if (name == "paper") return XiVariant::paper;
  if (name == "derived") return XiVariant::derived;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "' (expected paper|derived)");
}

const char* to_string(XiVariant v) {
  return v == XiVariant::paper ? "paper" : "derived";
}

double decode_success_prob(const SystemParams& sp) {
  const double signal = sp.p_a * sp.lambda_bb;
  const double interference = sp.beta * sp.phi_c * sp.p_b * sp.lambda_ab;
  return signal / (signal + interference) * std::exp(-sp.lambda_ab * sp.beta * sp.sigma_b2 / sp.p_a);
}

IntervalMoments interval_moments(double p, double q) {
  const double pq = p * q;
  if (!(pq > 0.0)) return {kInf, kInf};
  return {1.0 / pq, (2.0 - pq) / (pq * pq)};
}

double average_aoi(double p, double q) {
  const double pq = p * q;
  if (!(pq > 0.0)) return kInf;
  return 1.0 / pq;
}

double rho0(const SystemParams& sp, double p) {
  if (p <= 0.0) return kInf;
  if (p >= 1.0) return -kInf;
  return sp.p_b / (sp.lambda_bw * sp.p_a) * std::log((1.0 - p) / p);
}

double optimal_threshold(const SystemParams& sp, double p, double g_aw) {
  if (g_aw >= rho0(sp, p)) return g_aw * sp.p_a + sp.sigma_w2;
  return kInf;
}

double min_det_error(const SystemParams& sp, double p, double g_aw) {
  if (g_aw >= rho0(sp, p)) return (1.0 - p) * radiometer_h0_tail(sp, g_aw);
  return p;
}

double det_error_given_threshold(const SystemParams& sp, double p, double g_aw, double tau) {
  if (std::isnan(tau)) throw std::invalid_argument("tau must be a number or +inf");
  if (std::isinf(tau) && tau > 0.0) return p; // always decides "no transmission"
  if (tau <= sp.sigma_w2) return 1.0 - p;     // always decides "transmission"
  const double theta2 = std::exp(-sp.lambda_bw * (tau - sp.sigma_w2) / sp.p_b);
  if (tau <= sp.sigma_w2 + g_aw * sp.p_a) return (1.0 - p) * theta2;
  const double theta3 = std::exp(-sp.lambda_bw * (tau - sp.sigma_w2 - g_aw * sp.p_a) / sp.p_b);
  return (1.0 - p) * theta2 + p * (1.0 - theta3);
}

double theta1(const SystemParams& sp) {
  const double an = sp.lambda_aw * sp.p_b;
  return an / (an + sp.lambda_bw * sp.p_a);
}

double varphi(const SystemParams& sp, double p) {
  const double th1 = theta1(sp);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return kInf;
  return std::exp(-std::log((1.0 - p) / p) / (1.0 - th1));
}

double expected_det_error(const SystemParams& sp, double p, XiVariant variant) {
  const double th1 = theta1(sp);
  if (p >= 0.5) return (1.0 - p) * th1;
  if (p <= 0.0) return 0.0;
  const double phi = varphi(sp, p);
  if (variant == XiVariant::paper) return (1.0 - p) * th1 * phi + p * (1.0 - phi);
  return (1.0 - p) * th1 * phi + p - (1.0 - p) * phi;
}

DetectionReport detection_report(const SystemParams& sp, double p, double g_aw, XiVariant variant) {
  DetectionReport rep;
  rep.rho0 = rho0(sp, p);
  rep.tau_star = optimal_threshold(sp, p, g_aw);
  rep.xi_star = min_det_error(sp, p, g_aw);
  rep.theta0 = radiometer_h0_tail(sp, g_aw);
  rep.theta1 = theta1(sp);
  if (std::isinf(rep.tau_star)) {
    rep.theta2 = 0.0;
    rep.theta3 = 0.0;
  } else {
    // At tau_star = g_aw P_A + sigma_W^2 the exponents collapse exactly.
    rep.theta2 = rep.theta0;
    rep.theta3 = 1.0;
  }
  rep.varphi = std::min(varphi(sp, p), 1.0);
  rep.xi_bar_star = expected_det_error(sp, p, variant);
  return rep;
}

} // namespace covert_aoi
