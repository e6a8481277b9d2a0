// End-to-end checks of the morphoheat CLI: exit codes, output files and
// byte-for-byte determinism of repeat runs.
//
// usage: cli_check <path-to-morphoheat> <scratch-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "[FAIL] " << what << "\n";
  } else {
    std::cout << "[ ok ] " << what << "\n";
  }
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_check <morphoheat> <scratch-dir>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const fs::path scratch = argv[2];
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  // --help exits cleanly and mentions every subcommand.
  expect(run(bin + " --help > " + (scratch / "help.txt").string()) == 0, "--help exits 0");
  const std::string help = slurp(scratch / "help.txt");
  for (const char* sub : {"classify", "evolve", "constants", "cutoff",
                          "counterexample", "solve", "verify"})
    expect(help.find(sub) != std::string::npos, std::string("help documents ") + sub);

  // classify on the split scenario: exit 0, one Split row.
  write_file(scratch / "classify.cfg", "scenario = split2d\na = 1\ndensity = 9\n");
  const std::string out1 = (scratch / "run1").string();
  const std::string out2 = (scratch / "run2").string();
  expect(run(bin + " classify --config " + (scratch / "classify.cfg").string() +
             " --out " + out1 + " --seed 7") == 0,
         "classify exits 0");
  const std::string csv = slurp(fs::path(out1) / "classify.csv");
  expect(csv.rfind("# morphoheat", 0) == 0, "classify.csv carries a provenance line");
  expect(csv.find("Split") != std::string::npos, "classify.csv labels split2d as Split");

  // Determinism: identical config + seed give byte-identical CSV.
  expect(run(bin + " classify --config " + (scratch / "classify.cfg").string() +
             " --out " + out2 + " --seed 7") == 0,
         "classify re-run exits 0");
  expect(slurp(fs::path(out1) / "classify.csv") == slurp(fs::path(out2) / "classify.csv"),
         "classify.csv is byte-identical across runs");

  // counterexample: ratio roughly doubles from xi = 1e2 to 1e4.
  write_file(scratch / "ce.cfg", "xi_list = [1e2, 1e4]\n");
  expect(run(bin + " counterexample --config " + (scratch / "ce.cfg").string() +
             " --out " + out1) == 0,
         "counterexample exits 0");
  {
    std::ifstream in(fs::path(out1) / "counterexample.csv");
    std::string line;
    std::getline(in, line);  // provenance
    std::getline(in, line);  // header
    double r1 = 0.0, r2 = 0.0;
    std::getline(in, line);
    r1 = std::stod(line.substr(line.rfind(',') + 1));
    std::getline(in, line);
    r2 = std::stod(line.substr(line.rfind(',') + 1));
    expect(r2 / r1 > 1.6 && r2 / r1 < 2.4, "counterexample ratio doubles");
  }

  // Validation failures exit 2.
  write_file(scratch / "bad1.cfg", "xi_list = []\n");
  expect(run(bin + " counterexample --config " + (scratch / "bad1.cfg").string() +
             " --out " + out1 + " 2>/dev/null") == 2,
         "empty xi_list exits 2");
  write_file(scratch / "bad2.cfg", "scenario = no-such-thing\n");
  expect(run(bin + " classify --config " + (scratch / "bad2.cfg").string() +
             " --out " + out1 + " 2>/dev/null") == 2,
         "unknown scenario exits 2");
  expect(run(bin + " classify 2>/dev/null") == 2, "missing --config exits 2");
  expect(run(bin + " frobnicate --config " + (scratch / "classify.cfg").string() +
             " 2>/dev/null") == 2,
         "unknown subcommand exits 2");

  // constants: hardy sweep.
  write_file(scratch / "hardy.cfg",
             "quantity = hardy\nhardy_a = 0\nhardy_b = 1\nhardy_p = 0\n"
             "hardy_n_list = [128, 256]\n");
  expect(run(bin + " constants --config " + (scratch / "hardy.cfg").string() +
             " --out " + out1) == 0,
         "constants hardy exits 0");
  expect(slurp(fs::path(out1) / "constants.csv").find("hardy") != std::string::npos,
         "constants.csv written");

  // evolve: light run with VTK.
  write_file(scratch / "evolve.cfg",
             "scenario = split2d\na = 1\nn = 33\nslabs = 8\nseeds = 4\nsteps = 50\n"
             "vtk = true\n");
  expect(run(bin + " evolve --config " + (scratch / "evolve.cfg").string() +
             " --out " + out1) == 0,
         "evolve exits 0");
  expect(fs::exists(fs::path(out1) / "trajectories.csv") &&
             fs::exists(fs::path(out1) / "slices.csv"),
         "evolve writes both CSVs");
  expect(fs::exists(fs::path(out1) / "slice_000.vtk"), "evolve writes VTK slices");
  expect(slurp(fs::path(out1) / "slice_000.vtk").rfind("# vtk DataFile", 0) == 0,
         "VTK header present");

  // solve: light heat run.
  write_file(scratch / "solve.cfg",
             "scenario = split2d\na = 1\nn = 33\nslabs = 8\nform = heat\nf = one\n"
             "u0 = zero\n");
  expect(run(bin + " solve --config " + (scratch / "solve.cfg").string() +
             " --out " + out1) == 0,
         "solve exits 0");
  expect(fs::exists(fs::path(out1) / "timeseries.csv") &&
             fs::exists(fs::path(out1) / "norms.csv"),
         "solve writes timeseries.csv and norms.csv");

  // cutoff: light sweep.
  write_file(scratch / "cutoff.cfg",
             "scenario = split2d\na = 1\nn = 65\nslabs = 64\neps_list = [0.2, 0.1]\n");
  expect(run(bin + " cutoff --config " + (scratch / "cutoff.cfg").string() +
             " --out " + out1) == 0,
         "cutoff exits 0");
  expect(fs::exists(fs::path(out1) / "cutoff.csv"), "cutoff.csv written");

  if (failures == 0) std::cout << "cli_check: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
