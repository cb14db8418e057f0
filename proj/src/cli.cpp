#include "covert_aoi/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "covert_aoi/format.hpp"

namespace covert_aoi {

namespace {

struct Row {
  std::vector<std::pair<std::string, std::string>> fields;
  void add(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
  }
};

void emit_rows(const std::vector<Row>& rows, OutputFormat format, std::ostream& os) {
  if (rows.empty()) return;
  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
      os << (i ? "," : "") << rows[0].fields[i].first;
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.fields.size(); ++i)
        os << (i ? "," : "") << row.fields[i].second;
      os << "\n";
    }
  } else if (rows.size() == 1) {
    for (const auto& [key, value] : rows[0].fields) os << key << " = " << value << "\n";
  } else {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.fields.size(); ++i)
        os << (i ? " " : "") << row.fields[i].first << "=" << row.fields[i].second;
      os << "\n";
    }
  }
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

void require_seed(const RunSpec& spec, const char* cmd) {
  if (!spec.seed)
    throw std::invalid_argument(std::string(cmd) + ": a seed is required (no silent nondeterminism)");
}

Row analyze_row(const RunSpec& spec, const SystemParams& sp) {
  const double q = decode_success_prob(sp);
  const IntervalMoments mom = interval_moments(spec.policy.p, q);
  Row r;
  r.add("p", format_number(spec.policy.p));
  r.add("q", format_number(q));
  r.add("average_aoi", format_number(average_aoi(spec.policy.p, q)));
  r.add("mean_x", format_number(mom.mean_x));
  r.add("mean_x2", format_number(mom.mean_x2));
  r.add("rho0", format_number(rho0(sp, spec.policy.p)));
  r.add("theta1", format_number(theta1(sp)));
  r.add("xi_bar_star_paper", format_number(expected_det_error(sp, spec.policy.p, XiVariant::paper)));
  r.add("xi_bar_star_derived", format_number(expected_det_error(sp, spec.policy.p, XiVariant::derived)));
  if (spec.g_aw) {
    const DetectionReport rep = detection_report(sp, spec.policy.p, *spec.g_aw, spec.variant);
    r.add("g_aw", format_number(*spec.g_aw));
    r.add("tau_star_mw", format_number(rep.tau_star));
    r.add("xi_star", format_number(rep.xi_star));
    r.add("theta0", format_number(rep.theta0));
    r.add("theta2", format_number(rep.theta2));
    r.add("theta3", format_number(rep.theta3));
    r.add("varphi", format_number(rep.varphi));
  }
  return r;
}

Row simulate_aoi_row(const RunSpec& spec, const SystemParams& sp) {
  require_seed(spec, "simulate-aoi");
  const AoiStats st = simulate_aoi(sp, spec.policy.p, spec.slots, *spec.seed, spec.threads);
  Row r;
  r.add("slots", std::to_string(st.slots));
  r.add("seed", std::to_string(*spec.seed));
  r.add("time_avg_aoi", format_number(st.time_avg_aoi));
  r.add("mean_x", format_number(st.mean_x));
  r.add("mean_x2", format_number(st.mean_x2));
  r.add("empirical_q", format_number(st.empirical_q));
  r.add("closed_form_aoi", format_number(average_aoi(spec.policy.p, decode_success_prob(sp))));
  return r;
}

Row simulate_detection_row(const RunSpec& spec, const SystemParams& sp) {
  require_seed(spec, "simulate-detection");
  const DetectionStats st =
      simulate_detection(sp, spec.policy.p, spec.trials, *spec.seed, spec.fixed_tau, spec.threads);
  Row r;
  r.add("trials", std::to_string(st.trials));
  r.add("seed", std::to_string(*spec.seed));
  r.add("p", format_number(spec.policy.p));
  r.add("empirical_xi", format_number(st.empirical_xi));
  r.add("empirical_pfa", format_number(st.empirical_pfa));
  r.add("empirical_pmd", format_number(st.empirical_pmd));
  r.add("closed_form_xi_paper", format_number(expected_det_error(sp, spec.policy.p, XiVariant::paper)));
  r.add("closed_form_xi_derived", format_number(expected_det_error(sp, spec.policy.p, XiVariant::derived)));
  return r;
}

void add_result_fields(Row& r, const OptimizationResult& res) {
  r.add("feasible", format_bool(res.feasible));
  r.add("case", to_string(res.case_taken));
  r.add("p_star", opt_str(res.p_star));
  r.add("xi_bar_star", opt_str(res.xi_bar_star));
  r.add("q", format_number(res.q));
  r.add("rho1_mw", opt_str(res.rho1));
  r.add("rho2_mw", opt_str(res.rho2));
}

std::vector<Row> optimize_rows(const RunSpec& spec, const SystemParams& sp) {
  const OptimizationResult res = solve_p_star(sp, spec.variant);
  Row r;
  add_result_fields(r, res);
  if (spec.format == OutputFormat::text && !res.note.empty()) r.add("note", res.note);
  return {r};
}

std::vector<Row> sweep_rows(const RunSpec& spec, const SystemParams& sp) {
  if (spec.sweep_points == 0) throw std::invalid_argument("sweep: --points must be >= 1");
  if (spec.sweep_points > 1 && !(spec.sweep_to > spec.sweep_from))
    throw std::invalid_argument("sweep: --to must exceed --from");

  std::vector<double> user_grid(spec.sweep_points);
  for (std::size_t i = 0; i < spec.sweep_points; ++i)
    user_grid[i] = spec.sweep_points == 1
                       ? spec.sweep_from
                       : spec.sweep_from + (spec.sweep_to - spec.sweep_from) *
                                               static_cast<double>(i) /
                                               static_cast<double>(spec.sweep_points - 1);

  // Power axes are swept in dBm; the optimizer works in linear milliwatts.
  std::vector<double> lib_grid(user_grid);
  if (spec.axis != SweepAxis::delta)
    for (double& v : lib_grid) v = dbm_to_mw(v);

  const auto rows = sweep(sp, spec.axis, lib_grid, spec.variant);
  std::vector<Row> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Row r;
    r.add("axis", to_string(spec.axis));
    r.add("value", format_number(user_grid[i]));
    if (rows[i].ok) {
      add_result_fields(r, rows[i].result);
    } else {
      r.add("feasible", "false");
      r.add("case", "error");
      r.add("p_star", "");
      r.add("xi_bar_star", "");
      r.add("q", "");
      r.add("rho1_mw", "");
      r.add("rho2_mw", "");
      if (spec.format == OutputFormat::text) r.add("note", rows[i].error);
    }
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const SystemParams sp = params_from_db(spec.inputs);
    std::vector<Row> rows;
    switch (spec.command) {
      case Command::analyze: rows = {analyze_row(spec, sp)}; break;
      case Command::simulate_aoi: rows = {simulate_aoi_row(spec, sp)}; break;
      case Command::simulate_detection: rows = {simulate_detection_row(spec, sp)}; break;
      case Command::optimize: rows = optimize_rows(spec, sp); break;
      case Command::sweep: rows = sweep_rows(spec, sp); break;
    }
    std::ostringstream body;
    emit_rows(rows, spec.format, body);
    if (!spec.out_path.empty()) {
      std::ofstream file(spec.out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file '" + spec.out_path + "'");
      file << body.str();
      if (!file) throw std::runtime_error("failed writing output file '" + spec.out_path + "'");
    } else {
      out << body.str();
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert status updating under an average age-of-information budget: "
               "closed forms, transmit-probability optimizer, and Monte Carlo cross-checks"};
  app.require_subcommand(1);

  struct Opts {
    std::optional<double> p_a_dbm, p_b_dbm, phi_c, sigma_b2_dbm, sigma_w2_dbm, rate_r;
    std::optional<double> lambda_ab, lambda_aw, lambda_bw, lambda_bb, delta;
    std::string config, out_path;
    std::string format = "text";
    std::string variant = "derived";
    double p = 0.5;
    std::optional<double> g_aw;
    std::uint64_t slots = 1000000;
    std::uint64_t trials = 1000000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::optional<double> tau;
    std::string axis;
    double from = 0.0, to = 0.0;
    std::size_t points = 0;
  } o;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "config file of 'key = value' lines "
                                          "(default: $COVERT_AOI_CONFIG)");
    cmd->add_option("--out", o.out_path, "write output to this path instead of stdout");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "csv"}));
    cmd->add_option("--variant", o.variant,
                    "closed-form selector for the p<1/2 branch of the expected "
                    "detection error (default derived)")
        ->check(CLI::IsMember({"paper", "derived"}));
    cmd->add_option("--p-a-dbm", o.p_a_dbm, "information transmit power, dBm");
    cmd->add_option("--p-b-dbm", o.p_b_dbm, "artificial-noise transmit power, dBm");
    cmd->add_option("--phi-c", o.phi_c, "self-interference cancellation coefficient in [0,1]");
    cmd->add_option("--sigma-b2-dbm", o.sigma_b2_dbm, "receiver noise variance, dBm");
    cmd->add_option("--sigma-w2-dbm", o.sigma_w2_dbm, "warden noise variance, dBm");
    cmd->add_option("--rate-r", o.rate_r, "transmission rate, bits/channel use");
    cmd->add_option("--lambda-ab", o.lambda_ab, "fading rate of the transmitter-receiver gain");
    cmd->add_option("--lambda-aw", o.lambda_aw, "fading rate of the transmitter-warden gain");
    cmd->add_option("--lambda-bw", o.lambda_bw, "fading rate of the receiver-warden gain");
    cmd->add_option("--lambda-bb", o.lambda_bb, "fading rate of the self-interference gain");
    cmd->add_option("--delta", o.delta, "required average service time, slots");
  };
  const auto add_p = [&](CLI::App* cmd) {
    cmd->add_option("--p", o.p, "transmit probability")->required()->check(CLI::Range(0.0, 1.0));
  };

  auto* analyze = app.add_subcommand("analyze", "closed-form quantities for one configuration");
  add_common(analyze);
  add_p(analyze);
  analyze->add_option("--g-aw", o.g_aw,
                      "instantaneous transmitter-warden gain; adds the per-realization "
                      "detection report")
      ->check(CLI::NonNegativeNumber);

  auto* sim_aoi = app.add_subcommand("simulate-aoi", "slot-level Monte Carlo of the age process");
  add_common(sim_aoi);
  add_p(sim_aoi);
  sim_aoi->add_option("--slots", o.slots, "number of simulated slots");
  sim_aoi->add_option("--seed", o.seed, "RNG seed")->required();
  sim_aoi->add_option("--threads", o.threads, "worker threads (0 = hardware)");

  auto* sim_det = app.add_subcommand("simulate-detection",
                                     "Monte Carlo of the warden's hypothesis test");
  add_common(sim_det);
  add_p(sim_det);
  sim_det->add_option("--trials", o.trials, "number of simulated detection slots");
  sim_det->add_option("--seed", o.seed, "RNG seed")->required();
  sim_det->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  sim_det->add_option("--tau", o.tau,
                      "fixed detector threshold in mW (default: per-realization optimal)");

  auto* optimize = app.add_subcommand(
      "optimize", "best transmit probability under the average-age budget");
  add_common(optimize);

  auto* sweep_cmd = app.add_subcommand("sweep", "optimize along a parameter grid, one row per point");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", o.axis, "grid axis (power axes are in dBm)")
      ->required()
      ->check(CLI::IsMember({"delta", "p_a", "p_b"}));
  sweep_cmd->add_option("--from", o.from, "first grid value")->required();
  sweep_cmd->add_option("--to", o.to, "last grid value")->required();
  sweep_cmd->add_option("--points", o.points, "number of grid points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunSpec spec;
    if (analyze->parsed()) spec.command = Command::analyze;
    else if (sim_aoi->parsed()) spec.command = Command::simulate_aoi;
    else if (sim_det->parsed()) spec.command = Command::simulate_detection;
    else if (optimize->parsed()) spec.command = Command::optimize;
    else spec.command = Command::sweep;

    std::string config_path = o.config;
    if (config_path.empty())
      if (const char* env = std::getenv("COVERT_AOI_CONFIG")) config_path = env;
    DbmParams inputs;
    if (!config_path.empty()) inputs = load_config_file(config_path, inputs);

    const auto apply = [](std::optional<double> v, double& field) {
      if (v) field = *v;
    };
    apply(o.p_a_dbm, inputs.p_a_dbm);
    apply(o.p_b_dbm, inputs.p_b_dbm);
    apply(o.phi_c, inputs.phi_c);
    apply(o.sigma_b2_dbm, inputs.sigma_b2_dbm);
    apply(o.sigma_w2_dbm, inputs.sigma_w2_dbm);
    apply(o.rate_r, inputs.rate_r);
    apply(o.lambda_ab, inputs.lambda_ab);
    apply(o.lambda_aw, inputs.lambda_aw);
    apply(o.lambda_bw, inputs.lambda_bw);
    apply(o.lambda_bb, inputs.lambda_bb);
    apply(o.delta, inputs.delta);
    spec.inputs = inputs;

    spec.format = o.format == "csv" ? OutputFormat::csv : OutputFormat::text;
    spec.out_path = o.out_path;
    spec.variant = variant_from_string(o.variant);
    spec.policy.p = o.p;
    spec.g_aw = o.g_aw;
    spec.slots = o.slots;
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.threads = o.threads;
    spec.fixed_tau = o.tau;
    if (spec.command == Command::sweep) {
      if (o.axis == "delta") spec.axis = SweepAxis::delta;
      else if (o.axis == "p_a") spec.axis = SweepAxis::p_a;
      else spec.axis = SweepAxis::p_b;
      spec.sweep_from = o.from;
      spec.sweep_to = o.to;
      spec.sweep_points = o.points;
    }
    return run(spec, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace covert_aoi
