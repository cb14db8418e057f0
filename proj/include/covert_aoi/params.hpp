#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace covert_aoi {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Link configuration in user units (powers/noise in dBm). These are the
// defaults used throughout the tests and the CLI; params_from_db() converts
// to the linear-milliwatt SystemParams that all math operates on.
struct DbmParams {
  double p_a_dbm = 0.0;        // information transmit power
  double p_b_dbm = 0.0;        // artificial-noise transmit power
  double phi_c = 0.01;         // residual self-interference coefficient
  double sigma_b2_dbm = -60.0; // AWGN variance at the receiver
  double sigma_w2_dbm = -60.0; // AWGN variance at the warden
  double rate_r = 1.0;         // transmission rate, bits/channel use
  double lambda_ab = 1.0;      // exponential rates of the squared channel gains
  double lambda_aw = 1.0;
  double lambda_bw = 1.0;
  double lambda_bb = 1.0;
  double delta = 2.0;          // required average service time, slots
};

// All physical constants of the link in linear units.
//
// Rate convention: lambda_* is the RATE of the exponential distribution of
// the squared channel magnitude, Pr(|h|^2 > x) = exp(-lambda x), so the mean
// gain is 1/lambda. The closed forms and the Monte Carlo simulator both use
// this convention (at lambda = 1 it coincides with a unit-mean reading).
struct SystemParams {
  double p_a = 1.0;       // mW, > 0
  double p_b = 1.0;       // mW, >= 0
  double phi_c = 0.01;    // [0, 1]
  double sigma_b2 = 1e-6; // mW, >= 0
  double sigma_w2 = 1e-6; // mW, >= 0
  double rate_r = 1.0;    // bits/channel use, > 0
  double beta = 1.0;      // decoding SINR threshold, 2^rate_r - 1
  double lambda_ab = 1.0;
  double lambda_aw = 1.0;
  double lambda_bw = 1.0;
  double lambda_bb = 1.0;
  double delta = 2.0;     // slots, > 0
};

// One block-fading realization of all instantaneous squared channel gains.
struct ChannelDraw {
  double g_ab = 0.0;
  double g_aw = 0.0;
  double g_bw = 0.0;
  double g_bb = 0.0;
};

// Per-slot probability that the transmitter sends a fresh status update.
struct TransmitPolicy {
  double p = 0.5;
};

// Converts dBm inputs to linear milliwatts and derives beta = 2^R - 1.
// Throws std::invalid_argument naming every out-of-range input.
SystemParams params_from_db(const DbmParams& in);

// Empty when every SystemParams invariant holds; otherwise one message per
// violated invariant.
std::vector<std::string> validation_errors(const SystemParams& sp);

// Throws std::invalid_argument listing all violations.
void validate(const SystemParams& sp);

// Line-oriented `key = value` config, '#' starts a comment, keys are the
// DbmParams field names. Unknown keys and malformed values throw.
DbmParams parse_config(std::istream& in, DbmParams base);
DbmParams load_config_file(const std::string& path, DbmParams base);

} // namespace covert_aoi
