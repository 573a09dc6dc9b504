#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "../vendor/doctest.h"
#include "../vendor/json.hpp"
#include "helpers.hpp"

namespace {

int run_cli(const std::string& args, const std::string& stdout_to = "") {
  std::string cmd = std::string(GIBBSDP_CLI_PATH) + " " + args;
  if (stdout_to.empty())
    cmd += " >/dev/null 2>/dev/null";
  else
    cmd += " > " + stdout_to + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string toy_csv() {
  const std::string path = "/tmp/gibbsdp_cli_toy.csv";
  std::ofstream out(path);
  out << "# n=20\n# k=6\nl,m_l\n1,3\n2,1\n3,1\n12,1\n";
  return path;
}

std::string singleton_csv() {
  const std::string path = "/tmp/gibbsdp_cli_one.csv";
  std::ofstream out(path);
  out << "l,m_l\n1,1\n";
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate distinguishes the two libraries") {
  const std::string aer = testutil::data_file("aerobic.csv");
  const std::string ana = testutil::data_file("anaerobic.csv");
  CHECK(run_cli("validate " + aer, "/tmp/gibbsdp_val_a.json") == 0);
  CHECK(run_cli("validate " + ana, "/tmp/gibbsdp_val_b.json") == 3);
  const auto ja = nlohmann::json::parse(slurp("/tmp/gibbsdp_val_a.json"));
  CHECK(ja["pass"] == true);
  const auto jb = nlohmann::json::parse(slurp("/tmp/gibbsdp_val_b.json"));
  CHECK(jb["pass"] == false);
  CHECK(jb["residual_k"] == 3);
  CHECK(jb["residual_n"] == 42);
}

TEST_CASE("inconsistent data needs --force") {
  const std::string ana = testutil::data_file("anaerobic.csv");
  CHECK(run_cli("estimate " + ana + " --prior pd --sigma 0.656 --theta 155.408") == 3);
  CHECK(run_cli("estimate " + ana + " --prior pd --sigma 0.656 --theta 155.408 --force") == 0);
}

TEST_CASE("flag errors exit with 2") {
  const std::string aer = testutil::data_file("aerobic.csv");
  CHECK(run_cli("estimate " + aer + " --prior dirichlet --sigma 0.5 --theta 1") == 2);
  CHECK(run_cli("estimate " + aer + " --no-such-flag") == 2);
  CHECK(run_cli("estimate " + aer + " --prior pd --sigma 0.5") == 2);          // no theta
  CHECK(run_cli("estimate " + aer + " --prior pd --sigma 0.5 --tau 1") == 2);  // wrong param
  CHECK(run_cli("estimate " + aer + " --prior pd --fit --sigma 0.5 --theta 1") == 2);
  CHECK(run_cli("estimate " + aer + " --prior pd --sigma 0.5 --theta 1 --l oops") == 2);
  CHECK(run_cli("estimate " + aer + " --prior pd --sigma 1.5 --theta 1") == 2);
  CHECK(run_cli("ci " + aer + " --prior pd --sigma 0.5 --theta 1") == 2);  // missing seed
  CHECK(run_cli("fit " + aer + " --prior pd --format csv") == 2);  // csv needs estimates
  CHECK(run_cli("frobnicate " + aer) == 2);
}

TEST_CASE("estimate emits the closed-form value") {
  const std::string one = singleton_csv();
  const std::string out = "/tmp/gibbsdp_cli_est1.json";
  CHECK(run_cli("estimate " + one + " --prior pd --sigma 0.5 --theta 1.0 --l 0", out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  // (theta + sigma k) / (theta + n) with n = k = 1
  CHECK(j["estimates"].size() == 1);
  CHECK(j["estimates"][0]["value"] == 0.75);
  CHECK(j["estimates"][0]["method"] == "bnp");

  const std::string csv = "/tmp/gibbsdp_cli_est1.csv";
  CHECK(run_cli("estimate " + one +
                    " --prior pd --sigma 0.5 --theta 1.0 --l 0 --format csv",
                csv) == 0);
  CHECK(slurp(csv) == "l,value,lo,hi,method\n0,0.75,,,bnp\n");
}

TEST_CASE("l ranges are clipped at n") {
  const std::string toy = toy_csv();
  const std::string out = "/tmp/gibbsdp_cli_range.json";
  CHECK(run_cli("estimate " + toy + " --prior pd --sigma 0.5 --theta 1.0 --l 0..100", out) ==
        0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["estimates"].size() == 21);  // l = 0..20
}

TEST_CASE("ci reruns are byte-identical and agree with estimate") {
  const std::string toy = toy_csv();
  const std::string a = "/tmp/gibbsdp_cli_ci_a.json", b = "/tmp/gibbsdp_cli_ci_b.json";
  const std::string args =
      "ci " + toy + " --prior gg --sigma 0.5 --tau 2.0 --l 0..3 --seed 7 --draws 4000";
  CHECK(run_cli(args, a) == 0);
  CHECK(run_cli(args, b) == 0);
  CHECK(slurp(a) == slurp(b));

  const std::string est = "/tmp/gibbsdp_cli_ci_est.json";
  CHECK(run_cli("estimate " + toy + " --prior gg --sigma 0.5 --tau 2.0 --l 0..3", est) == 0);
  const auto jc = nlohmann::json::parse(slurp(a));
  const auto je = nlohmann::json::parse(slurp(est));
  REQUIRE(jc["estimates"].size() == je["estimates"].size());
  for (std::size_t i = 0; i < jc["estimates"].size(); ++i) {
    CHECK(jc["estimates"][i]["value"] == je["estimates"][i]["value"]);
    CHECK(jc["estimates"][i]["lo"].get<double>() <=
          jc["estimates"][i]["value"].get<double>());
    CHECK(jc["estimates"][i]["hi"].get<double>() >=
          jc["estimates"][i]["value"].get<double>());
  }
}

TEST_CASE("ci intervals for absent frequencies collapse to zero") {
  const std::string toy = toy_csv();
  const std::string out = "/tmp/gibbsdp_cli_ci_degen.json";
  CHECK(run_cli("ci " + toy + " --prior pd --sigma 0.5 --theta 1.0 --l 7 --seed 3", out) ==
        0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["estimates"][0]["value"] == 0.0);
  CHECK(j["estimates"][0]["lo"] == 0.0);
  CHECK(j["estimates"][0]["hi"] == 0.0);
}

TEST_CASE("approx matches the stated orders") {
  const std::string toy = toy_csv();
  const std::string o1 = "/tmp/gibbsdp_cli_ap1.json", o2 = "/tmp/gibbsdp_cli_ap2.json";
  CHECK(run_cli("approx " + toy + " --prior pd --sigma 0.5 --theta 1.0 --l 0 --order 1",
                o1) == 0);
  CHECK(run_cli("approx " + toy + " --prior pd --sigma 0.5 --theta 1.0 --l 0 --order 2",
                o2) == 0);
  const auto j1 = nlohmann::json::parse(slurp(o1));
  const auto j2 = nlohmann::json::parse(slurp(o2));
  CHECK(j1["estimates"][0]["value"] == 0.5 * 6 / 20.0);
  CHECK(j2["estimates"][0]["value"] == 0.5 * 6 / 20.0 + 1.0 / 20.0);
  CHECK(run_cli("approx " + toy + " --prior pd --sigma 0.5 --theta 1.0 --order 3") == 2);
}

TEST_CASE("numeric failures exit with 4") {
  const std::string toy = toy_csv();
  CHECK(run_cli("estimate " + toy + " --prior gg --sigma 0.5 --tau 1e300 --l 0") == 4);
}

TEST_CASE("simulate smoke run is deterministic") {
  const std::string a = "/tmp/gibbsdp_cli_sim_a.json", b = "/tmp/gibbsdp_cli_sim_b.json";
  const std::string args =
      "simulate --dist zeta --s 1.5 --n 200 --replicates 8 --groups 2 --prior pd --seed 7";
  CHECK(run_cli(args, a) == 0);
  CHECK(run_cli(args, b) == 0);
  CHECK(slurp(a) == slurp(b));
  const auto j = nlohmann::json::parse(slurp(a));
  CHECK(j["replicates"] == 8);
  CHECK(j["metrics"].contains("mean_sse_exact"));
  CHECK(j["metrics"].contains("mean_sse_good_turing"));
  const double frac = j["metrics"]["frac_exact_10x_better_than_gt"].get<double>();
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
  REQUIRE(j["group_summaries"].size() == 2);
  CHECK(j["group_summaries"][0]["count"].get<long>() +
            j["group_summaries"][1]["count"].get<long>() ==
        8);
  CHECK(j["group_summaries"][0]["k_max"].get<long>() <=
        j["group_summaries"][1]["k_min"].get<long>());
  CHECK(run_cli("simulate --dist normal --s 1.5 --n 100 --replicates 2 --seed 1") == 2);
}

}  // TEST_SUITE
