#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "mcf/cli.hpp"

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"mcf"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int rc = mcf::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("exact farey orbits") {
  for (const char* x : {"2,5", "5,3"}) {
    const auto r = run({"orbit", "--algo", "farey", "--mode", "exact", "--x", x, "--steps", "1"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("2,3") != std::string::npos);
  }
}

TEST_CASE("mass and dilog") {
  const auto m = run({"mass", "--algo", "reverse"});
  CHECK(m.rc == 0);
  CHECK(m.out.find("mass 2.46740110") != std::string::npos);
  const auto f = run({"mass", "--algo", "farey"});
  CHECK(f.rc == 0);
  CHECK(f.out.find("mass inf") != std::string::npos);
  const auto d = run({"dilog"});
  CHECK(d.rc == 0);
  CHECK(d.out.find("difference") != std::string::npos);
  const auto bad = run({"dilog", "--z", "2"});
  CHECK(bad.rc == 1);
  CHECK(bad.out.empty());
  CHECK(bad.err.rfind("error[", 0) == 0);
}

TEST_CASE("audit") {
  const auto r = run({"audit", "--algo", "cassaigne", "--samples", "500"});
  CHECK(r.rc == 0);
  CHECK(r.out.find("violations 0") != std::string::npos);
}

TEST_CASE("exit codes and help") {
  CHECK(run({"orbit", "--algo", "nonesuch"}).rc == 2);
  CHECK(run({"frobnicate"}).rc == 2);
  CHECK(run({"orbit", "--algo", "reverse", "--x", "1,2"}).rc == 2);
  CHECK(run({"orbit", "--algo", "reverse", "--x", "1,-2,3"}).rc == 1);
  const auto h = run({"--help"});
  CHECK(h.rc == 0);
  for (const char* n : {"farey", "reverse", "cassaigne", "brun", "selmer", "poincare", "arp"})
    CHECK(h.out.find(n) != std::string::npos);
}

TEST_CASE("fractal output is reproducible") {
  const auto dir = std::filesystem::temp_directory_path() / "mcf_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.ppm").string(), b = (dir / "b.ppm").string();
  const auto ra = run({"fractal", "--steps", "50000", "--res", "128", "--out", a.c_str()});
  const auto rb = run({"fractal", "--steps", "50000", "--res", "128", "--out", b.c_str()});
  REQUIRE(ra.rc == 0);
  REQUIRE(rb.rc == 0);
  CHECK(ra.out.substr(ra.out.find("hash")) == rb.out.substr(rb.out.find("hash")));
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() == 15 + 128 * 128 * 3);
  const auto s = run({"symmetry", "--in", a.c_str()});
  CHECK(s.rc == 0);
  CHECK(s.out.find("jaccard") != std::string::npos);
  std::filesystem::remove_all(dir);
}
