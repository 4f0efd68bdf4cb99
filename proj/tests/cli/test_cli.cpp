#include "effrank/panel.hpp"

#include <doctest.h>
#include <json.hpp>

#include <Eigen/Dense>

#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("effrank_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(EFFRANK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const std::string& path) { return json::parse(slurp(path)); }

Eigen::MatrixXd matrix(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j.at("data")[static_cast<std::size_t>(i * cols + k)];
  return m;
}

std::string simulate(const Scratch& s, const std::string& name, const std::string& extra = "") {
  const std::string dir = s / name;
  REQUIRE(run("simulate --dgp rrsra --p 6 --N 8 --r 2 --T 150 --seed 5 --out-dir " + dir + " " + extra) == 0);
  return dir;
}

}  // namespace

TEST_CASE("simulate writes panels of the requested shape") {
  Scratch s;
  const std::string dir = simulate(s, "a");
  const effrank::Panel x = effrank::load_csv(dir + "/x.csv", true);
  const effrank::Panel y = effrank::load_csv(dir + "/y.csv", true);
  CHECK(x.num_times() == 150);
  CHECK(x.num_series() == 8);
  CHECK(y.num_times() == 150);
  CHECK(y.num_series() == 6);
  const json truth = load(dir + "/truth.json");
  CHECK(matrix(truth.at("A")).rows() == 6);
  CHECK(matrix(truth.at("A")).cols() == 6);
}

TEST_CASE("simulate is byte-for-byte reproducible") {
  Scratch s;
  const std::string a = simulate(s, "a"), b = simulate(s, "b");
  for (const char* f : {"/x.csv", "/y.csv", "/truth.json"}) CHECK(slurp(a + f) == slurp(b + f));
  const std::string c = simulate(s, "c", "--replication 1");
  CHECK(slurp(a + "/x.csv") != slurp(c + "/x.csv"));
}

TEST_CASE("usage errors exit with status 2") {
  Scratch s;
  CHECK(run("simulate --T 0 --out-dir " + (s / "bad")) == 2);
  CHECK(run("fit --bogus") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("fit --x " + (s / "missing.csv") + " --y " + (s / "missing.csv")) == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("fit reports the effective rank and honours the penalty") {
  Scratch s;
  const std::string dir = simulate(s, "a");
  const std::string data = "--x " + dir + "/x.csv --y " + dir + "/y.csv ";
  REQUIRE(run("fit " + data + "--out " + (s / "fit.json")) == 0);
  const json fit = load(s / "fit.json");
  const int rank = fit.at("effective_rank").at("rank_A");
  CHECK(rank >= 0);
  CHECK(rank <= 6);
  CHECK(fit.at("r_hat") == 2);

  REQUIRE(run("fit " + data + "--lambda-A 1e6 --lambda-Phi 1e6 --out " + (s / "huge.json")) == 0);
  const json huge = load(s / "huge.json");
  CHECK(huge.at("effective_rank").at("rank_A") == 0);
  CHECK(huge.at("effective_rank").at("cardinality") == 0);
  CHECK(matrix(huge.at("coefficients").at("A_hat")).norm() == 0.0);

  REQUIRE(run("fit " + data + "--method irra --d 2 --out " + (s / "irra.json")) == 0);
  CHECK(load(s / "irra.json").at("spec").at("method") == "irra");
}

TEST_CASE("a saved fit reproduces its one-step predictions") {
  Scratch s;
  const std::string dir = simulate(s, "a");
  const std::string data = "--x " + dir + "/x.csv --y " + dir + "/y.csv ";
  REQUIRE(run("fit " + data + "--d 1 --out " + (s / "fit.json")) == 0);
  REQUIRE(run("forecast " + data + "--fit " + (s / "fit.json") + " --out " + (s / "pred.csv")) == 0);

  const json fit = load(s / "fit.json");
  const Eigen::MatrixXd A = matrix(fit.at("coefficients").at("A_hat"));
  const Eigen::MatrixXd Phi = matrix(fit.at("coefficients").at("Phi_hat"));
  const Eigen::MatrixXd Bc = matrix(fit.at("factors").at("Bc_hat"));
  const Eigen::MatrixXd X = effrank::load_csv(dir + "/x.csv", true).values();
  const Eigen::MatrixXd Y = effrank::load_csv(dir + "/y.csv", true).values();
  const Eigen::MatrixXd pred = effrank::load_csv(s / "pred.csv", true).values();
  REQUIRE(pred.rows() == 150);
  REQUIRE(pred.cols() == 6);
  for (Eigen::Index t = 0; t < 150; ++t) {
    const Eigen::VectorXd expected = A * (Bc.transpose() * X.row(t).transpose()) + Phi * Y.row(t).transpose();
    CHECK((pred.row(t).transpose() - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
  }
}

TEST_CASE("tune on a single grid point returns that point") {
  Scratch s;
  const std::string dir = simulate(s, "a");
  REQUIRE(run("tune --x " + dir + "/x.csv --y " + dir + "/y.csv --grid-lambda-A 0.3 --grid-lambda-Phi 0.1 " +
              "--grid-d 1 --out " + (s / "tune.json")) == 0);
  const json t = load(s / "tune.json");
  CHECK(t.at("best").at("lambda_A") == 0.3);
  CHECK(t.at("best").at("lambda_Phi") == 0.1);
  CHECK(t.at("best").at("d") == 1);
  CHECK(t.at("fe_surface").size() == 1);
  CHECK(t.at("best_fe").get<double>() > 0.0);
}

TEST_CASE("random-walk forecasts repeat the last observation") {
  Scratch s;
  const std::string dir = simulate(s, "a");
  REQUIRE(run("forecast --x " + dir + "/x.csv --y " + dir + "/y.csv --method rw --split 120 --predictions " +
              (s / "rw.csv") + " --r2-csv " + (s / "r2.csv") + " --out " + (s / "rw.json")) == 0);
  const json rep = load(s / "rw.json");
  CHECK(rep.at("model") == "rw");
  CHECK(rep.at("origins").size() == 30);
  CHECK(rep.at("origins")[0] == 120);
  const Eigen::MatrixXd Y = effrank::load_csv(dir + "/y.csv", true).values();
  const Eigen::MatrixXd pred = effrank::load_csv(s / "rw.csv", true).values();
  REQUIRE(pred.rows() == 30);
  CHECK(pred == Y.middleRows(119, 30));
  const Eigen::MatrixXd r2 = effrank::load_csv(s / "r2.csv", true).values();
  REQUIRE(r2.rows() == 30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    const Eigen::VectorXd actual = Y.row(120 + i).transpose(), last = Y.row(119 + i).transpose();
    CHECK(r2(i, 1) == doctest::Approx(1.0 - (actual - last).squaredNorm() / actual.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("eval summarizes a column with nearest-rank quantiles") {
  Scratch s;
  {
    std::ofstream out(s / "v.csv");
    out << "v\n5\n1\n4\n2\n3\n";
  }
  REQUIRE(run("eval --values " + (s / "v.csv") + " --out " + (s / "sum.json")) == 0);
  const json v = load(s / "sum.json").at("columns").at("v");
  CHECK(v.at("count") == 5);
  CHECK(v.at("q25") == 2.0);
  CHECK(v.at("median") == 3.0);
  CHECK(v.at("q75") == 4.0);
  CHECK(v.at("mean") == 3.0);
  CHECK(v.at("std").get<double>() == doctest::Approx(std::sqrt(2.5)));
}

TEST_CASE("eval runs a small simulation study") {
  Scratch s;
  REQUIRE(run("eval --study rrsra --p 6 --N 8 --r 2 --T 200 --reps 4 --seed 2 --out " + (s / "study.json")) == 0);
  const json st = load(s / "study.json");
  CHECK(st.at("r_hat_accuracy").get<double>() >= 0.0);
  CHECK(st.at("rank_A").at("count") == 4);
  REQUIRE(run("eval --study rrsra --p 6 --N 8 --r 2 --T 200 --reps 4 --seed 2 --out " + (s / "again.json")) == 0);
  CHECK(slurp(s / "study.json") == slurp(s / "again.json"));
}
