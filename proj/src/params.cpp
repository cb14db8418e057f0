#include "covert_aoi/params.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace covert_aoi {

namespace {

void require(bool ok, std::vector<std::string>& errors, const std::string& msg) {
  if (!ok) errors.push_back(msg);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out += "; ";
    out += part;
  }
  return out;
}

} // namespace

SystemParams params_from_db(const DbmParams& in) {
  std::vector<std::string> errors;
  require(std::isfinite(in.p_a_dbm), errors, "p_a_dbm must be finite");
  require(std::isfinite(in.p_b_dbm), errors, "p_b_dbm must be finite");
  require(std::isfinite(in.sigma_b2_dbm), errors, "sigma_b2_dbm must be finite");
  require(std::isfinite(in.sigma_w2_dbm), errors, "sigma_w2_dbm must be finite");
  require(std::isfinite(in.rate_r) && in.rate_r > 0.0, errors, "rate_r must be > 0");
  require(in.phi_c >= 0.0 && in.phi_c <= 1.0, errors, "phi_c out of [0,1]");
  require(in.lambda_ab > 0.0, errors, "lambda_ab must be > 0");
  require(in.lambda_aw > 0.0, errors, "lambda_aw must be > 0");
  require(in.lambda_bw > 0.0, errors, "lambda_bw must be > 0");
  require(in.lambda_bb > 0.0, errors, "lambda_bb must be > 0");
  require(std::isfinite(in.delta) && in.delta > 0.0, errors, "delta must be > 0");
  if (!errors.empty()) throw std::invalid_argument("invalid parameters: " + join(errors));

  SystemParams sp;
  sp.p_a = dbm_to_mw(in.p_a_dbm);
  sp.p_b = dbm_to_mw(in.p_b_dbm);
  sp.phi_c = in.phi_c;
  sp.sigma_b2 = dbm_to_mw(in.sigma_b2_dbm);
  sp.sigma_w2 = dbm_to_mw(in.sigma_w2_dbm);
  sp.rate_r = in.rate_r;
  sp.beta = std::exp2(in.rate_r) - 1.0;
  sp.lambda_ab = in.lambda_ab;
  sp.lambda_aw = in.lambda_aw;
  sp.lambda_bw = in.lambda_bw;
  sp.lambda_bb = in.lambda_bb;
  sp.delta = in.delta;
  validate(sp);
  return sp;
}

std::vector<std::string> validation_errors(const SystemParams& sp) {
  std::vector<std::string> errors;
  require(std::isfinite(sp.p_a) && sp.p_a > 0.0, errors, "p_a must be > 0");
  require(std::isfinite(sp.p_b) && sp.p_b >= 0.0, errors, "p_b must be >= 0");
  require(sp.phi_c >= 0.0 && sp.phi_c <= 1.0, errors, "phi_c out of [0,1]");
  require(std::isfinite(sp.sigma_b2) && sp.sigma_b2 >= 0.0, errors, "sigma_b2 must be >= 0");
  require(std::isfinite(sp.sigma_w2) && sp.sigma_w2 >= 0.0, errors, "sigma_w2 must be >= 0");
  require(std::isfinite(sp.rate_r) && sp.rate_r > 0.0, errors, "rate_r must be > 0");
  require(sp.beta == std::exp2(sp.rate_r) - 1.0, errors, "beta inconsistent with rate_r");
  require(sp.lambda_ab > 0.0 && std::isfinite(sp.lambda_ab), errors, "lambda_ab must be > 0");
  require(sp.lambda_aw > 0.0 && std::isfinite(sp.lambda_aw), errors, "lambda_aw must be > 0");
  require(sp.lambda_bw > 0.0 && std::isfinite(sp.lambda_bw), errors, "lambda_bw must be > 0");
  require(sp.lambda_bb > 0.0 && std::isfinite(sp.lambda_bb), errors, "lambda_bb must be > 0");
  require(std::isfinite(sp.delta) && sp.delta > 0.0, errors, "delta must be > 0");
  return errors;
}

void validate(const SystemParams& sp) {
  const auto errors = validation_errors(sp);
  if (!errors.empty()) throw std::invalid_argument("invalid parameters: " + join(errors));
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_value(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: malformed value for '" + key + "': '" + text + "'");
  }
}

} // namespace

DbmParams parse_config(std::istream& in, DbmParams base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const double value = parse_value(key, trim(stripped.substr(eq + 1)));

    if (key == "p_a_dbm") base.p_a_dbm = value;
    else if (key == "p_b_dbm") base.p_b_dbm = value;
    else if (key == "phi_c") base.phi_c = value;
    else if (key == "sigma_b2_dbm") base.sigma_b2_dbm = value;
    else if (key == "sigma_w2_dbm") base.sigma_w2_dbm = value;
    else if (key == "rate_r") base.rate_r = value;
    else if (key == "lambda_ab") base.lambda_ab = value;
    else if (key == "lambda_aw") base.lambda_aw = value;
    else if (key == "lambda_bw") base.lambda_bw = value;
    else if (key == "lambda_bb") base.lambda_bb = value;
    else if (key == "delta") base.delta = value;
    else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

DbmParams load_config_file(const std::string& path, DbmParams base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  return parse_config(in, base);
}

} // namespace covert_aoi
