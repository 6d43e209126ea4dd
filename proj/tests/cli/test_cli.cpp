#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using peakon::lab::run_cli;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("peakon_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("closed-form writes the requested table") {
  TempDir d("cf");
  const auto r = cli({"closed-form", "--samples", "200", "--output-dir", d.path.string()});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(d.path / "closed_form.csv"));
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "t,p,q,invariant_residual");
  const auto j = nlohmann::json::parse(slurp(d.path / "closed_form_report.json"));
  CHECK(j["passed"].get<bool>());
  for (const auto& rep : j["reports"])
    for (const char* key : {"check_name", "passed", "max_residual", "tolerance", "samples", "details"})
      CHECK(rep.contains(key));
}

TEST_CASE("floats carry 17 significant digits") {
  TempDir d("digits");
  REQUIRE(cli({"closed-form", "--samples", "3", "--output-dir", d.path.string()}).code == 0);
  const auto rows = lines(slurp(d.path / "closed_form.csv"));
  const auto c1 = rows[1].find(',');
  const std::string p = rows[1].substr(c1 + 1, rows[1].find(',', c1 + 1) - c1 - 1);
  CHECK(std::stod(p) == doctest::Approx(1.0).epsilon(1e-15));
  const std::string q = rows[2].substr(0, rows[2].find(','));
  CHECK(std::count_if(q.begin(), q.end(), [](char c) { return std::isdigit(c); }) >= 17);
}

TEST_CASE("verify passes on the default scenario") {
  TempDir d("verify");
  const auto r = cli({"verify", "--output-dir", d.path.string()});
  CHECK_MESSAGE(r.code == 0, r.out);
  const auto j = nlohmann::json::parse(slurp(d.path / "verify.json"));
  CHECK(j["passed"].get<bool>());
  CHECK(j["reports"].size() >= 10);
}

TEST_CASE("config errors name file and line") {
  TempDir d("cfgerr");
  const fs::path cfg = d.path / "bad.cfg";
  write(cfg, "# comment\np0 = 1\nq0 = banana\n");
  const auto r = cli({"closed-form", "--config", cfg.string(), "--output-dir", d.path.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.cfg:3") != std::string::npos);
  write(cfg, "no_such_key = 1\n");
  CHECK(cli({"closed-form", "--config", cfg.string()}).code == 2);
  write(cfg, "p0 = -1\n");
  CHECK(cli({"closed-form", "--config", cfg.string(), "--output-dir", d.path.string()}).code != 0);
}

TEST_CASE("flags override the config file") {
  TempDir d("override");
  const fs::path cfg = d.path / "run.cfg";
  write(cfg, "samples = 10\noutput_dir = " + (d.path / "from_cfg").string() + "\n");
  REQUIRE(cli({"closed-form", "--config", cfg.string()}).code == 0);
  CHECK(lines(slurp(d.path / "from_cfg" / "closed_form.csv")).size() == 11);
  REQUIRE(cli({"closed-form", "--config", cfg.string(), "--samples", "5", "--output-dir", d.path.string()}).code == 0);
  CHECK(lines(slurp(d.path / "closed_form.csv")).size() == 6);
}

TEST_CASE("output directory from the environment") {
  TempDir d("env");
  ::setenv("PEAKON_LAB_OUTPUT", d.path.string().c_str(), 1);
  const auto r = cli({"contraction"});
  ::unsetenv("PEAKON_LAB_OUTPUT");
  CHECK(r.code == 0);
  CHECK(fs::exists(d.path / "contraction.json"));
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"no-such-command"}).code == 2);
  CHECK(cli({"grid", "--N", "4000"}).code == 2);
}

TEST_CASE("plot rejects an empty series and writes nothing") {
  TempDir d("plot");
  write(d.path / "empty.csv", "t,p,q,invariant_residual\n");
  const auto r = cli({"plot", "--input", (d.path / "empty.csv").string(), "--output",
                      (d.path / "empty.svg").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(d.path / "empty.svg"));
}

TEST_CASE("plot output is deterministic") {
  TempDir d("plot2");
  REQUIRE(cli({"closed-form", "--samples", "50", "--output-dir", d.path.string()}).code == 0);
  const std::string in = (d.path / "closed_form.csv").string();
  REQUIRE(cli({"plot", "--input", in, "--columns", "p,q", "--output", (d.path / "a.svg").string()}).code == 0);
  REQUIRE(cli({"plot", "--input", in, "--columns", "p,q", "--output", (d.path / "b.svg").string()}).code == 0);
  const std::string a = slurp(d.path / "a.svg");
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a == slurp(d.path / "b.svg"));
}

TEST_CASE("grid snapshot and sweep outputs") {
  TempDir d("grid");
  REQUIRE(cli({"grid", "--N", "401", "--t-end", "0.2", "--output-dir", d.path.string()}).code == 0);
  const auto rows = lines(slurp(d.path / "grid_snapshot.csv"));
  CHECK(rows[0] == "t,x,u");
  CHECK(rows.size() > 401);

  TempDir s1("sweep1"), s4("sweep4");
  for (auto* dir : {&s1, &s4}) {
    const std::string jobs = dir == &s1 ? "1" : "4";
    REQUIRE(cli({"sweep", "--sweep-eps", "1e-2,1e-3", "--sweep-N", "201,401", "--t-end", "0.2", "--jobs", jobs,
                 "--output-dir", dir->path.string()})
                .code == 0);
  }
  const std::string a = slurp(s1.path / "sweep.json");
  CHECK(a == slurp(s4.path / "sweep.json"));
  const auto j = nlohmann::json::parse(a);
  REQUIRE(j.is_array());
  CHECK(j.size() == 4);
  for (const auto& e : j)
    for (const char* key : {"eps", "N", "t", "linf_error", "energy"}) CHECK(e.contains(key));
}
