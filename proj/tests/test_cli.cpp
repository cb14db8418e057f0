#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "covert_aoi/cli.hpp"
#include "covert_aoi/format.hpp"

using namespace covert_aoi;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_args(const std::vector<std::string>& args) {
  std::vector<std::string> full{"covert_aoi"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// key -> value map from the single-row text format.
std::map<std::string, std::string> parse_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& line : lines_of(text)) {
    const auto eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("covert_aoi_test_" + name);
}

} // namespace

TEST_CASE("optimize: pinned CSV schema, exit codes, text agreement") {
  const std::vector<std::string> base{"optimize", "--delta", "2", "--p-b-dbm", "0"};

  auto csv = run_args([&] {
    auto v = base;
    v.push_back("--format");
    v.push_back("csv");
    return v;
  }());
  REQUIRE(csv.code == 0);
  const auto lines = lines_of(csv.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "feasible,case,p_star,xi_bar_star,q,rho1_mw,rho2_mw");
  const auto fields = split(lines[1], ',');
  REQUIRE(fields.size() == 7);
  CHECK(fields[0] == "true");
  CHECK(fields[1] == "case1_boundary");
  CHECK(std::stod(fields[2]) == doctest::Approx(0.50500).epsilon(1e-4));

  const auto text = run_args(base);
  REQUIRE(text.code == 0);
  const auto kv = parse_text(text.out);
  CHECK(kv.at("p_star") == fields[2]);
  CHECK(kv.at("xi_bar_star") == fields[3]);
  CHECK(kv.at("q") == fields[4]);
  CHECK(kv.at("rho1_mw") == fields[5]);
}

TEST_CASE("optimize: infeasible is an answer, not an error") {
  const auto res = run_args({"optimize", "--delta", "0.5", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 2);
  const auto fields = split(lines[1], ',');
  CHECK(fields[0] == "false");
  CHECK(fields[1] == "infeasible");
  CHECK(fields[2].empty()); // no p_star
}

TEST_CASE("validation failures exit nonzero with one diagnostic line") {
  const auto res = run_args({"optimize", "--phi-c", "1.5"});
  CHECK(res.code != 0);
  CHECK(res.out.empty());
  const auto err_lines = lines_of(res.err);
  REQUIRE(err_lines.size() == 1);
  CHECK(err_lines[0].find("phi_c") != std::string::npos);
}

TEST_CASE("simulate-aoi: schema, required seed, deterministic bytes") {
  const std::vector<std::string> cmd{"simulate-aoi", "--p",     "0.5",  "--slots", "50000",
                                     "--seed",       "7",       "--format", "csv"};
  const auto a = run_args(cmd);
  REQUIRE(a.code == 0);
  const auto lines = lines_of(a.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "slots,seed,time_avg_aoi,mean_x,mean_x2,empirical_q,closed_form_aoi");

  const auto b = run_args(cmd);
  CHECK(a.out == b.out); // byte-identical repeat

  auto threaded = cmd;
  threaded.push_back("--threads");
  threaded.push_back("4");
  const auto c = run_args(threaded);
  CHECK(a.out == c.out); // parallelism does not change the bytes

  const auto missing_seed = run_args({"simulate-aoi", "--p", "0.5"});
  CHECK(missing_seed.code != 0);
  CHECK(missing_seed.err.find("--seed") != std::string::npos);
}

TEST_CASE("simulate-aoi: clean link pins the time-average age at 1") {
  const auto res = run_args({"simulate-aoi", "--p", "1", "--phi-c", "0", "--sigma-b2-dbm",
                             "-999", "--slots", "20000", "--seed", "3", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto fields = split(lines_of(res.out)[1], ',');
  CHECK(fields[2] == "1"); // time_avg_aoi
}

TEST_CASE("simulate-detection: schema and closed-form columns") {
  const auto res = run_args({"simulate-detection", "--p", "0.25", "--trials", "200000",
                             "--seed", "11", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "trials,seed,p,empirical_xi,empirical_pfa,empirical_pmd,"
        "closed_form_xi_paper,closed_form_xi_derived");
  const auto fields = split(lines[1], ',');
  REQUIRE(fields.size() == 8);
  CHECK(std::stod(fields[6]) == doctest::Approx(19.0 / 72.0).epsilon(1e-9));
  CHECK(std::stod(fields[7]) == doctest::Approx(5.0 / 24.0).epsilon(1e-9));
  for (std::size_t j = 2; j < fields.size(); ++j)
    CHECK(format_number(std::stod(fields[j])) == fields[j]); // 12-digit round trip
}

TEST_CASE("simulate-detection: fixed threshold at the noise floor always alarms") {
  const auto res = run_args({"simulate-detection", "--p", "0.3", "--trials", "100000",
                             "--seed", "13", "--tau", "1e-6", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto fields = split(lines_of(res.out)[1], ',');
  CHECK(std::stod(fields[4]) == 1.0); // empirical_pfa
  CHECK(std::stod(fields[5]) == 0.0); // empirical_pmd
}

TEST_CASE("sweep: schema, value column, round-trip at 12 significant digits") {
  const auto res = run_args({"sweep", "--axis", "delta", "--from", "1.1", "--to", "10",
                             "--points", "12", "--p-b-dbm", "10", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 13);
  CHECK(lines[0] == "axis,value,feasible,case,p_star,xi_bar_star,q,rho1_mw,rho2_mw");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "delta");
    for (std::size_t j = 1; j < fields.size(); ++j) {
      if (fields[j].empty() || fields[j] == "true" || fields[j] == "false") continue;
      if (j == 3) continue; // case label
      // A parsed-and-reformatted number reproduces the emitted field.
      const double parsed = std::stod(fields[j]);
      CHECK(format_number(parsed) == fields[j]);
    }
  }
}

TEST_CASE("sweep: malformed grid is a usage error") {
  const auto res = run_args({"sweep", "--axis", "delta", "--from", "5", "--to", "2",
                             "--points", "4"});
  CHECK(res.code != 0);
  CHECK(!res.err.empty());

  const auto zero = run_args({"sweep", "--axis", "delta", "--from", "1", "--to", "2",
                              "--points", "0"});
  CHECK(zero.code != 0);
}

TEST_CASE("sweep: single-point grid equals optimize") {
  const auto single = run_args({"sweep", "--axis", "delta", "--from", "2", "--to", "2",
                                "--points", "1", "--format", "csv"});
  REQUIRE(single.code == 0);
  const auto sweep_fields = split(lines_of(single.out)[1], ',');
  const auto direct = run_args({"optimize", "--delta", "2", "--format", "csv"});
  const auto opt_fields = split(lines_of(direct.out)[1], ',');
  CHECK(sweep_fields[4] == opt_fields[2]); // p_star
  CHECK(sweep_fields[5] == opt_fields[3]); // xi_bar_star
}

TEST_CASE("config file feeds defaults; flags override; env var is the fallback") {
  const auto cfg_path = temp_file("config.cfg");
  {
    std::ofstream cfg(cfg_path);
    cfg << "# test configuration\n"
        << "delta = 4\n"
        << "p_b_dbm = 10\n";
  }

  const auto from_file = run_args({"optimize", "--config", cfg_path.string(), "--format", "csv"});
  REQUIRE(from_file.code == 0);

  // The same inputs passed as flags give identical output.
  const auto from_flags = run_args({"optimize", "--delta", "4", "--p-b-dbm", "10",
                                    "--format", "csv"});
  CHECK(from_file.out == from_flags.out);

  // A flag overrides the file value.
  const auto overridden = run_args({"optimize", "--config", cfg_path.string(), "--delta", "2",
                                    "--format", "csv"});
  const auto direct = run_args({"optimize", "--delta", "2", "--p-b-dbm", "10",
                                "--format", "csv"});
  CHECK(overridden.out == direct.out);

  // Environment variable as the default config path.
  ::setenv("COVERT_AOI_CONFIG", cfg_path.string().c_str(), 1);
  const auto from_env = run_args({"optimize", "--format", "csv"});
  ::unsetenv("COVERT_AOI_CONFIG");
  CHECK(from_env.out == from_file.out);

  // Unknown keys are rejected.
  {
    std::ofstream cfg(cfg_path);
    cfg << "p_q_dbm = 1\n";
  }
  const auto bad = run_args({"optimize", "--config", cfg_path.string()});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("unknown key") != std::string::npos);

  std::filesystem::remove(cfg_path);
}

TEST_CASE("--out writes the same bytes to a file") {
  const auto out_path = temp_file("sweep.csv");
  const std::vector<std::string> base{"sweep", "--axis",  "delta", "--from", "1.5",
                                      "--to",  "3",       "--points", "4",   "--format", "csv"};
  const auto to_stdout = run_args(base);
  auto with_out = base;
  with_out.push_back("--out");
  with_out.push_back(out_path.string());
  const auto to_file = run_args(with_out);
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(out_path, std::ios::binary);
  std::stringstream contents;
  contents << in.rdbuf();
  CHECK(contents.str() == to_stdout.out);
  std::filesystem::remove(out_path);
}

TEST_CASE("analyze: per-realization report appears only with --g-aw") {
  const auto plain = run_args({"analyze", "--p", "0.25", "--format", "csv"});
  REQUIRE(plain.code == 0);
  CHECK(lines_of(plain.out)[0] ==
        "p,q,average_aoi,mean_x,mean_x2,rho0,theta1,xi_bar_star_paper,xi_bar_star_derived");

  const auto with_g = run_args({"analyze", "--p", "0.25", "--g-aw", "2", "--format", "csv"});
  REQUIRE(with_g.code == 0);
  const auto lines = lines_of(with_g.out);
  CHECK(lines[0] ==
        "p,q,average_aoi,mean_x,mean_x2,rho0,theta1,xi_bar_star_paper,xi_bar_star_derived,"
        "g_aw,tau_star_mw,xi_star,theta0,theta2,theta3,varphi");
  const auto fields = split(lines[1], ',');
  CHECK(std::stod(fields[9]) == 2.0);
  CHECK(std::stod(fields[10]) == doctest::Approx(2.000001).epsilon(1e-9));
}
