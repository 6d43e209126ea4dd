#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "acceptance_determinism.hpp"
#include "commands.hpp"

namespace acceptance {

namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return out;
}

int run_all(const fs::path& dir) {
  const std::string out = "--output-dir=" + dir.string();
  const std::vector<std::vector<std::string>> runs = {
      {"closed-form", "--p0", "1", "--q0", "1", "--samples", "200", "--profile-times", "0,1", out},
      {"ode", "--p0", "2", "--q0", "0.5", out},
      {"chars", out},
      {"verify", "--seed", "7", out},
      {"riccati", "--seed", "11", out},
      {"contraction", "--e0", "1", "--delta0", "0.1", out},
      {"grid", "--N", "1001", "--snapshot-times", "0.5", out},
      {"sweep", "--sweep-N", "501,1001", "--sweep-eps", "1e-2,1e-3", "--jobs", "3", out},
      {"plot", "--input", (dir / "profile.csv").string(), "--kind", "profile", out},
      {"plot", "--input", (dir / "closed_form.csv").string(), "--columns", "p,q", out},
  };
  int worst = 0;
  for (const auto& args : runs) {
    std::ostringstream sink;
    worst = std::max(worst, peakon::lab::run_cli(args, sink, sink));
  }
  return worst;
}

}  // namespace

DeterminismResult check_determinism() {
  const fs::path base = fs::temp_directory_path() / "peakon_acceptance_determinism";
  fs::remove_all(base);
  const int a = run_all(base / "a");
  const int b = run_all(base / "b");
  const auto sa = snapshot(base / "a");
  const auto sb = snapshot(base / "b");
  DeterminismResult res;
  std::size_t differing = 0;
  for (const auto& [name, bytes] : sa) {
    const auto it = sb.find(name);
    if (it == sb.end() || it->second != bytes) ++differing;
  }
  res.identical = a == 0 && b == 0 && sa.size() == sb.size() && differing == 0 && !sa.empty();
  res.detail = std::to_string(sa.size()) + " artifacts from 10 runs compared byte for byte, " +
               std::to_string(differing) + " differ; exit codes " + std::to_string(a) + "/" + std::to_string(b);
  fs::remove_all(base);
  return res;
}

}  // namespace acceptance
