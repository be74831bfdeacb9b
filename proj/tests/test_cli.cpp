#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pfexpm/bench.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "pfexpm_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(PFEXPM_CLI) + " " + args + " >" + (kWork / "stdout.txt").string() + " 2>" +
                          (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  ~Workdir() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("help and argument errors") {
  Workdir w;
  CHECK(run("--help") == 0);
  CHECK(run("bench --help") == 0);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("bench --family lap1d --d 10") == 2);
  CHECK(run("bench --family hilbert --d 10 --n 8") == 2);
  CHECK(run("bench --family lap2d --d 10 --n 8") == 2);
  CHECK(run("bench --family lap1d --d 10 --n 7") == 2);
  CHECK(run("bench --family lap1d --d 10 --n 8 --mode both") == 2);
  CHECK(run("bench --family lap1d --d 10 --n 8 --threads zero") == 2);
  CHECK(run("bench --family lap1d --d 10 --n 8 --shift c=800") == 2);
  CHECK(run("bench --family random --d 10 --n 8 --range 1:0") == 2);
  CHECK(run("bench --family lap1d --d 10 --n 8 --precision quad") == 2);
  CHECK(run("scalar --n 8 --grid 0:-1:5") == 2);
  CHECK(run("scalar --n 8 --digits 0") == 2);
  CHECK(run("tables --n 3 --dir " + (kWork / "t").string()) == 2);
}

TEST_CASE("bench writes CSV") {
  Workdir w;
  const auto out = kWork / "run.csv";
  const auto plot = kWork / "run.dat";
  CHECK(run("bench --family lap1d --d 20 --n 8,16 --mode action --threads 2 --repeats 1 --out " + out.string() +
            " --plot " + plot.string()) == 0);
  const auto recs = pfexpm::parse_csv(slurp(out));
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].n == 8);
  CHECK(recs[1].n == 16);
  CHECK(recs[1].mode == pfexpm::Mode::Action);
  CHECK(recs[1].bound.has_value());
  CHECK(fs::file_size(plot) > 0);

  CHECK(run("bench --family random --d 12 --range 0:5 --n 16 --trials 2 --shift auto --repeats 1") == 0);
  const auto stdout_recs = pfexpm::parse_csv(slurp(kWork / "stdout.txt"));
  REQUIRE(stdout_recs.size() == 2);
  CHECK(stdout_recs[0].error_kind == pfexpm::ErrorKind::Relative);

  CHECK(run("bench --family lap1d --d 8 --n 8 --precision extended --repeats 1") == 0);
}

TEST_CASE("bench reruns with a fixed seed give identical error columns") {
  Workdir w;
  const auto a = kWork / "a.csv";
  const auto b = kWork / "b.csv";
  const std::string args = "bench --family random --d 30 --range -1:0 --n 8,16 --trials 3 --seed 77 --threads 1 --repeats 1 --out ";
  REQUIRE(run(args + a.string()) == 0);
  REQUIRE(run(args + b.string()) == 0);
  const auto ra = pfexpm::parse_csv(slurp(a));
  const auto rb = pfexpm::parse_csv(slurp(b));
  REQUIRE(ra.size() == 6);
  REQUIRE(rb.size() == 6);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].error == rb[i].error);
    CHECK(ra[i].seed == rb[i].seed);
    CHECK(ra[i].bound == rb[i].bound);
  }
}

TEST_CASE("scalar writes CSV") {
  Workdir w;
  const auto out = kWork / "scalar.csv";
  CHECK(run("scalar --n 8,16 --grid -10:0:101 --out " + out.string()) == 0);
  const auto text = slurp(out);
  CHECK(text.rfind(std::string(pfexpm::kScalarCsvHeader), 0) == 0);
  CHECK(text.find("\n8,") != std::string::npos);

  // D=2 breaks the digit condition: M2 is left empty, not an error.
  CHECK(run("scalar --n 32 --grid -1:0:3 --digits 2") == 0);
  const auto row = slurp(kWork / "stdout.txt");
  CHECK(row.back() == '\n');
  CHECK(row[row.size() - 2] == ',');
}

TEST_CASE("tables generate, validate and detect tampering") {
  Workdir w;
  const auto dir = kWork / "tables";
  CHECK(run("tables --n 2,4 --dir " + dir.string()) == 0);
  CHECK(fs::exists(dir / "exp_n02.table"));
  CHECK(fs::exists(dir / "exp_n04.table"));
  CHECK(run("tables --n 2,4 --dir " + dir.string()) == 0);
  CHECK(slurp(kWork / "stdout.txt").find("validated") != std::string::npos);

  // Swap the n=2 file for the n=4 one: it parses but does not match.
  fs::copy_file(dir / "exp_n04.table", dir / "exp_n02.table", fs::copy_options::overwrite_existing);
  CHECK(run("tables --n 2 --dir " + dir.string()) == 3);

  std::ofstream(dir / "exp_n04.table") << "garbage\n";
  CHECK(run("tables --n 4 --dir " + dir.string()) == 3);
}

TEST_CASE("I/O errors") {
  Workdir w;
  const auto missing = kWork / "no" / "such" / "dir" / "x.csv";
  CHECK(run("bench --family lap1d --d 4 --n 8 --repeats 1 --out " + missing.string()) == 4);
  CHECK(run("scalar --n 8 --grid -1:0:3 --out " + missing.string()) == 4);
  std::ofstream(kWork / "file") << "x";
  CHECK(run("tables --n 2 --dir " + (kWork / "file" / "sub").string()) == 4);
}
