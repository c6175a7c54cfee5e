#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Runs the installed command-line binary with the given arguments and
/// captures exit code, stdout, and stderr.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "cli_tmp_out_" + std::to_string(counter) + ".txt";
  const std::string err_path = "cli_tmp_err_" + std::to_string(counter) + ".txt";
  ++counter;

  const std::string command =
      std::string(RQMCMIX_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(command.c_str());

  RunResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

const std::string kData = RQMCMIX_DATA_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits cleanly, unknown flags do not") {
  const RunResult help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("allocate") != std::string::npos);

  CHECK(run_cli("allocate --frobnicate").code == 2);
  CHECK(run_cli("").code == 2);  // a subcommand is required
}

TEST_CASE("allocate rounds and reports one row per stratum") {
  const RunResult r = run_cli("allocate --alpha 0.9,0.05,0.05 --n 8 --rho 3");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "l,alpha,xi,beta,n,omega");
  CHECK(csv_fields(lines[1])[4] == "6");
  CHECK(csv_fields(lines[2])[4] == "1");
  CHECK(csv_fields(lines[3])[4] == "1");
  CHECK(csv_fields(lines[1])[0] == "1");
  CHECK(csv_fields(lines[1])[1] == "0.9");
}

TEST_CASE("allocate power-of-two mode") {
  const RunResult r = run_cli("allocate --alpha 0.9,0.05,0.05 --n 8 --rho 3 --pow2");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(csv_fields(lines[1])[4] == "4");
  CHECK(csv_fields(lines[2])[4] == "2");
  CHECK(csv_fields(lines[3])[4] == "2");
  CHECK(csv_fields(lines[1])[3] == "0.5");  // beta column

  CHECK(run_cli("allocate --alpha 0.5,0.5 --n 1 --rho 2").code == 2);
  CHECK(run_cli("allocate --n 8 --rho 2").code == 2);  // alpha missing
}

TEST_CASE("allocate accepts fractions from a file") {
  const std::string path = "cli_alpha_tmp.txt";
  {
    std::ofstream out(path);
    out << "0.75 0.25\n";
  }
  const RunResult r = run_cli("allocate --alpha-file " + path + " --n 16 --rho 1");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(csv_fields(lines[1])[4] == "12");
  CHECK(csv_fields(lines[2])[4] == "4");
  std::remove(path.c_str());

  CHECK(run_cli("allocate --alpha 0.5,0.5 --alpha-file " + path + " --n 8").code == 2);
}

TEST_CASE("partitions lists every split and a count") {
  const RunResult two = run_cli("partitions --L 2");
  CHECK(two.code == 0);
  CHECK(two.out == "1/2 1/2\ncount 1\n");

  const RunResult seven = run_cli("partitions --L 7");
  CHECK(seven.code == 0);
  const auto lines = lines_of(seven.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines.back() == "count 9");

  CHECK(run_cli("partitions --L 1").code == 2);
}

TEST_CASE("inefficiency grid for equal weights is identically one") {
  const RunResult r = run_cli("inefficiency --alpha 0.25,0.25,0.25,0.25");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 7);  // header, five gamma rows, footer
  CHECK(lines[0] == "criterion,gamma,rho=1,rho=1.5,rho=2,rho=2.5,rho=3");
  for (int i = 1; i <= 5; ++i) {
    const auto fields = csv_fields(lines[static_cast<std::size_t>(i)]);
    CHECK(fields[0] == "i0");
    for (std::size_t j = 2; j < fields.size(); ++j) {
      CHECK(std::stod(fields[j]) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const auto footer = csv_fields(lines[6]);
  REQUIRE(footer.size() == 4);
  CHECK(footer[0] == "gamma0");
  CHECK(footer[2] == "worst");
  CHECK(std::stod(footer[3]) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(run_cli("inefficiency --alpha 0.75,0.25 --gamma-min 0.5").code == 2);
  CHECK(run_cli("inefficiency --alpha 0.75,0.25 --step -1").code == 2);
}

TEST_CASE("inefficiency emits the correlated criterion on request") {
  const RunResult r = run_cli(
      "inefficiency --alpha 0.75,0.25 --gamma-min 2 --gamma-max 2 --rho-min 1 --rho-max 1 --i1");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);  // header, i0 row, i1 row, footer
  CHECK(lines[1].substr(0, 5) == "i0,2,");
  CHECK(lines[2].substr(0, 5) == "i1,2,");
  // Frozen spot value for the uncorrelated criterion at gamma=2, rho=1.
  CHECK(lines[1].substr(5, 6) == "1.0254");
}

TEST_CASE("experiment writes a variance table") {
  const std::string args =
      "experiment --model toy --m-min 3 --m-max 3 --reps 2 --estimators all --seed 5";
  const RunResult r = run_cli(args);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "estimator,m,n,variance,mean,wall_ms");
  CHECK(csv_fields(lines[1])[0] == "mc");
  CHECK(csv_fields(lines[2])[0] == "rqmc");
  CHECK(csv_fields(lines[3])[0] == "rqmc_adj");
  CHECK(csv_fields(lines[4])[0] == "rqmc_pow2");
  CHECK(csv_fields(lines[5])[0] == "rqmc_strat");
  for (int i = 1; i <= 5; ++i) {
    CHECK(csv_fields(lines[static_cast<std::size_t>(i)])[1] == "3");
    CHECK(csv_fields(lines[static_cast<std::size_t>(i)])[2] == "8");
  }

  // Identical invocation reproduces everything but the wall clock.
  const RunResult again = run_cli(args);
  const auto lines2 = lines_of(again.out);
  REQUIRE(lines2.size() == lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CHECK(lines[i].substr(0, lines[i].rfind(',')) == lines2[i].substr(0, lines2[i].rfind(',')));
  }
}

TEST_CASE("experiment slope lines appear once the window is reachable") {
  const RunResult r = run_cli(
      "experiment --model toy --m-min 7 --m-max 8 --reps 3 --estimators rqmc --seed 2");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("slope rqmc m=7..8: ") != std::string::npos);
}

TEST_CASE("experiment accepts files, custom rates, and custom directions") {
  const RunResult r = run_cli("experiment --model file:" + kData +
                              "/mixture_small.json --m-min 3 --m-max 3 --reps 2 "
                              "--estimators rqmc --rho inf --dirs " +
                              kData + "/dirs_small.txt");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(csv_fields(lines[1])[0] == "rqmc");

  CHECK(run_cli("experiment --model nope --reps 2").code == 2);
  CHECK(run_cli("experiment --model toy --reps 2 --rho 0.5").code == 2);
  CHECK(run_cli("experiment --model toy --reps 2 --scramble bogus").code == 2);
}

TEST_CASE("netcheck reports parameters and verdicts") {
  const RunResult plain = run_cli("netcheck --d 2 --m 8 --seed 1");
  REQUIRE(plain.code == 0);
  const auto lines = lines_of(plain.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "d,2");
  CHECK(lines[1] == "m,8");
  CHECK(lines[2] == "min_t,0");
  CHECK(lines[3] == "stratified,yes");

  const RunResult strat = run_cli("netcheck --d 3 --m 10 --beta 1/2,1/4,1/8,1/8");
  REQUIRE(strat.code == 0);
  const auto rows = lines_of(strat.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[4] == "stratum,l,beta,m_l,min_t,bound,verdict");
  for (int l = 0; l < 4; ++l) {
    const auto fields = csv_fields(rows[static_cast<std::size_t>(5 + l)]);
    CHECK(fields[6] == "pass");
  }
  CHECK(csv_fields(rows[5])[2] == "1/2");
  CHECK(csv_fields(rows[5])[3] == "9");
  CHECK(csv_fields(rows[8])[2] == "1/8");
  CHECK(csv_fields(rows[8])[3] == "7");
}

TEST_CASE("netcheck skips or rejects non-dyadic strata") {
  const RunResult skip = run_cli("netcheck --d 2 --m 6 --beta 0.5,0.3,0.2");
  REQUIRE(skip.code == 0);
  const auto rows = lines_of(skip.out);
  REQUIRE(rows.size() == 8);
  CHECK(csv_fields(rows[5])[6] == "pass");     // 0.5 is dyadic
  CHECK(csv_fields(rows[6])[6] == "skipped");  // 0.3 is not
  CHECK(csv_fields(rows[7])[6] == "skipped");

  CHECK(run_cli("netcheck --d 2 --m 6 --beta 0.5,0.3,0.2 --require-nets").code == 2);
  CHECK(run_cli("netcheck --d 7 --m 4").code == 2);
  CHECK(run_cli("netcheck --d 2 --m 13").code == 2);
  CHECK(run_cli("netcheck --d 1 --m 4 --beta 0.5,0.5").code == 2);
}

TEST_CASE("outputs can be redirected to a file") {
  const std::string path = "cli_redirect_tmp.csv";
  const RunResult r = run_cli("partitions --L 4 --out " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string content = slurp(path);
  CHECK(content == "1/2 1/4 1/8 1/8\n1/4 1/4 1/4 1/4\ncount 2\n");
  std::remove(path.c_str());
}

}  // TEST_SUITE
