// End-to-end tests of the vkmercer executable: exit codes, output files and flag precedence.
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <sys/wait.h>
#include <unistd.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = VKM_TEST_DATA_DIR;

struct Workspace {
  fs::path dir;
  Workspace() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("vkm_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }

  // Runs the CLI with stdout and stderr captured to files in the workspace.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + VKM_CLI_PATH + "\" " + args + " >\"" + path("stdout.txt") +
                            "\" 2>\"" + path("stderr.txt") + "\"";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::size_t count_lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const std::string kGaussian = R"({"type": "gaussian", "gamma": 1.0})";
const std::string kAtoms5 = "id,w,x\na,1,0\nb,1,0.5\nc,2,1\nd,0,3\ne,1,1.5\n";

}  // namespace

TEST_CASE("validate") {
  Workspace w;
  const std::string atoms = (kData / "two_atoms_13.csv").string();
  SUBCASE("a valid kernel exits 0 and writes both reports") {
    CHECK(w.run("validate --atoms " + atoms + " --kernel " + (kData / "identity2.json").string() + " --out " +
                w.path("o")) == 0);
    const json r = read_json(w.path("o/report.json"));
    CHECK(r["command"] == "validate");
    CHECK(r["validation"]["passed"] == true);
    CHECK(fs::exists(w.path("o/report.txt")));
    CHECK(slurp(w.path("stdout.txt")) == slurp(w.path("o/report.txt")));
  }
  SUBCASE("a non-Hermitian precomputed table exits 2") {
    w.write("k.csv", "x_id,t_id,l,j,re,im\na,a,0,0,1,0\nb,b,0,0,1,0\na,b,0,0,0.5,0\nb,a,0,0,0.9,0\n");
    w.write("k.json", R"({"type": "precomputed", "path": "k.csv"})");
    CHECK(w.run("validate --atoms " + atoms + " --kernel " + w.path("k.json") + " --out " + w.path("o")) == 2);
    const json r = read_json(w.path("o/report.json"));
    CHECK(r["validation"]["hermitian_ok"] == false);
    CHECK(r["validation"]["max_hermitian_deviation"].get<double>() == doctest::Approx(0.4));
  }
  SUBCASE("an indefinite kernel exits 2") {
    w.write("k.csv", "x_id,t_id,l,j,re,im\na,a,0,0,1,0\nb,b,0,0,1,0\na,b,0,0,2,0\n");
    w.write("k.json", R"({"type": "precomputed", "path": "k.csv"})");
    CHECK(w.run("validate --atoms " + atoms + " --kernel " + w.path("k.json") + " --out " + w.path("o")) == 2);
    CHECK(read_json(w.path("o/report.json"))["validation"]["psd_ok"] == false);
  }
  SUBCASE("a missing atoms file exits 1 with a message") {
    CHECK(w.run("validate --atoms " + w.path("nope.csv") + " --kernel " + (kData / "constant.json").string()) == 1);
    CHECK(slurp(w.path("stderr.txt")).find("file not found") != std::string::npos);
  }
  SUBCASE("usage errors exit 1") {
    CHECK(w.run("") == 1);
    CHECK(w.run("validate --bogus 1") == 1);
    CHECK(w.run("validate --atoms " + atoms) == 1);
    CHECK(w.run("validate --atoms " + atoms + " --kernel " + w.write("bad.json", R"({"type": "gaussian"})")) == 1);
    CHECK(w.run("validate --atoms " + atoms + " --kernel " + (kData / "constant.json").string() + " --tol-eig -1") ==
          1);
    CHECK(w.run("--help") == 0);
  }
}

TEST_CASE("metric") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", "id,w,x\na,1,0\nb,1,0\nc,0,1\nd,0,0\n");
  const std::string kernel = w.write("k.json", kGaussian);
  CHECK(w.run("metric --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("o")) == 0);
  CHECK(count_lines(w.path("o/metric.csv")) == 1 + 16);
  const json q = read_json(w.path("o/quotient.json"));
  REQUIRE(q["classes"].size() == 2);
  CHECK(q["classes"][0]["representative"] == "a");
  CHECK(q["classes"][0]["members"] == json::array({"a", "b", "d"}));
  // d has zero mass but is indistinguishable from a, so it belongs to the support; c does not.
  CHECK(slurp(w.path("o/support.csv")) == "atom_id\na\nb\nd\n");
  const json r = read_json(w.path("o/report.json"));
  CHECK(r["support_size"] == 3);
  CHECK(r["mu_support"] == r["mu_total"]);
}

TEST_CASE("decompose") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", kAtoms5);
  const std::string kernel = w.write("k.json", kGaussian);
  SUBCASE("writes spectrum and eigenfunctions for every atom") {
    CHECK(w.run("decompose --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("o")) == 0);
    const json r = read_json(w.path("o/report.json"));
    const auto rank = r["rank"].get<std::size_t>();
    CHECK(rank == 4);  // d carries no mass
    CHECK(r["trace"]["ok"] == true);
    CHECK(count_lines(w.path("o/spectrum.csv")) == 1 + rank);
    CHECK(count_lines(w.path("o/eigenfunctions.csv")) == 1 + rank * 5);
  }
  SUBCASE("empty support exits 3") {
    const std::string zero = w.write("zero.csv", "id,w,x\na,0,0\nb,0,1\n");
    CHECK(w.run("decompose --atoms " + zero + " --kernel " + kernel + " --out " + w.path("o")) == 3);
    CHECK(slurp(w.path("stderr.txt")).find("support") != std::string::npos);
  }
  SUBCASE("the Jacobi solver gives the same spectrum") {
    CHECK(w.run("decompose --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("t")) == 0);
    CHECK(w.run("decompose --solver jacobi --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("j")) == 0);
    CHECK(count_lines(w.path("t/spectrum.csv")) == count_lines(w.path("j/spectrum.csv")));
    CHECK(w.run("decompose --solver qr --atoms " + atoms + " --kernel " + kernel) == 1);
  }
}

TEST_CASE("reconstruct") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", kAtoms5);
  const std::string kernel = w.write("k.json", kGaussian);
  SUBCASE("default subset is the support and the full-rank row is within tolerance") {
    CHECK(w.run("reconstruct --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("o")) == 0);
    const json r = read_json(w.path("o/report.json"))["reconstruction"];
    CHECK(r["subset_size"] == 4);
    CHECK(r["guarantee_applies"] == true);
    CHECK(r["full_rank_within_tol"] == true);
    CHECK(count_lines(w.path("o/error_table.csv")) == 1 + 5);
  }
  SUBCASE("off-support atoms are flagged and do not fail the run") {
    CHECK(w.run("reconstruct --atoms " + atoms + " --kernel " + kernel + " --subset a,d --out " + w.path("o")) == 0);
    const json r = read_json(w.path("o/report.json"))["reconstruction"];
    CHECK(r["off_support_atoms"] == json::array({"d"}));
    CHECK(r["guarantee_applies"] == false);
  }
  SUBCASE("truncations select rows") {
    CHECK(w.run("reconstruct --atoms " + atoms + " --kernel " + kernel + " --truncations 0,2 --out " + w.path("o")) ==
          0);
    CHECK(slurp(w.path("o/error_table.csv")).rfind("m,max_abs_error\n0,1\n2,", 0) == 0);
  }
  SUBCASE("unknown subset ids exit 1") {
    CHECK(w.run("reconstruct --atoms " + atoms + " --kernel " + kernel + " --subset a,zz --out " + w.path("o")) == 1);
    CHECK(slurp(w.path("stderr.txt")).find("zz") != std::string::npos);
  }
}

TEST_CASE("frames and synthesize") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", "id,w,x,y\na,1,0,0\nb,1,0.5,0.1\nc,2,1,-0.3\nd,1,-0.4,0.8\n");
  w.write("k.json", R"({"type": "diagonal", "kernels": [{"type": "gaussian", "gamma": 1.0},
                                                        {"type": "laplacian", "gamma": 0.5}]})");
  w.write("g.json", R"({"type": "gaussian", "gamma": 1.0})");
  w.write("l.json", R"({"type": "laplacian", "gamma": 0.5})");

  CHECK(w.run("frames --atoms " + atoms + " --kernel " + w.path("k.json") + " --out " + w.path("f")) == 0);
  const json r = read_json(w.path("f/report.json"));
  REQUIRE(r["frames"].size() == 2);
  CHECK(r["frames"][0]["ok"] == true);
  CHECK(r["frames"][1]["ok"] == true);
  CHECK(fs::exists(w.path("f/frame_0.csv")));
  CHECK(fs::exists(w.path("f/frame_1.csv")));

  SUBCASE("single block and out-of-range block") {
    CHECK(w.run("frames --block 1 --atoms " + atoms + " --kernel " + w.path("k.json") + " --out " + w.path("b")) == 0);
    CHECK_FALSE(fs::exists(w.path("b/frame_0.csv")));
    CHECK(w.run("frames --block 2 --atoms " + atoms + " --kernel " + w.path("k.json") + " --out " + w.path("b")) == 1);
  }
  SUBCASE("synthesis from the frame files reproduces the scalar kernels") {
    CHECK(w.run("synthesize --atoms " + atoms + " --frames " + w.path("f/frame_0.csv") + "," +
                w.path("f/frame_1.csv") + " --kernels " + w.path("g.json") + "," + w.path("l.json") + " --out " +
                w.path("s")) == 0);
    const json s = read_json(w.path("s/report.json"));
    CHECK(s["validation"]["passed"] == true);
    CHECK(s["diagonal_blocks"]["within_tol"] == true);
    CHECK(count_lines(w.path("s/synthesized_kernel.csv")) == 1 + 10 * 4);
  }
  SUBCASE("synthesis straight from the kernels") {
    CHECK(w.run("synthesize --atoms " + atoms + " --kernels " + w.path("g.json") + "," + w.path("l.json") +
                " --out " + w.path("s")) == 0);
    CHECK(read_json(w.path("s/report.json"))["frame_source"] == "decomposition");
  }
  SUBCASE("halved frames fail the diagonal check with exit 2") {
    std::ofstream out(w.path("half.csv"));
    out.precision(17);
    std::istringstream in(slurp(w.path("f/frame_0.csv")));
    std::string line;
    std::getline(in, line);
    out << line << '\n';
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
      out << f[0] << ',' << f[1] << ',' << 0.5 * std::stod(f[2]) << ',' << 0.5 * std::stod(f[3]) << '\n';
    }
    out.close();
    CHECK(w.run("synthesize --atoms " + atoms + " --frames " + w.path("half.csv") + " --kernels " + w.path("g.json") +
                " --out " + w.path("s")) == 2);
    const json s = read_json(w.path("s/report.json"));
    CHECK(s["diagonal_blocks"]["max_deviation"].get<double>() == doctest::Approx(0.75).epsilon(1e-6));
  }
  SUBCASE("synthesize rejects matrix-valued originals") {
    CHECK(w.run("synthesize --atoms " + atoms + " --kernels " + w.path("k.json")) == 1);
    CHECK(w.run("synthesize --kernels " + w.path("g.json")) == 1);
  }
}

TEST_CASE("config file precedence") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", kAtoms5);
  w.write("k.json", kGaussian);
  w.write("cfg.json", R"({"atoms": "atoms.csv", "kernel": "k.json", "out": "from_config", "tol_recon": 0.125})");

  CHECK(w.run("reconstruct --config " + w.path("cfg.json")) == 0);
  CHECK(read_json(w.path("from_config/report.json"))["tolerances"]["tol_recon"] == 0.125);

  CHECK(w.run("reconstruct --config " + w.path("cfg.json") + " --tol-recon 0.25 --out " + w.path("from_flag")) == 0);
  CHECK(read_json(w.path("from_flag/report.json"))["tolerances"]["tol_recon"] == 0.25);
  CHECK(fs::exists(w.path("from_config/error_table.csv")));

  w.write("bad.json", R"({"atoms": "atoms.csv", "colour": "blue"})");
  CHECK(w.run("validate --config " + w.path("bad.json")) == 1);
}

TEST_CASE("identical inputs give identical outputs") {
  Workspace w;
  const std::string atoms = w.write("atoms.csv", kAtoms5);
  const std::string kernel = w.write("k.json", kGaussian);
  CHECK(w.run("decompose --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("r1")) == 0);
  CHECK(w.run("decompose --atoms " + atoms + " --kernel " + kernel + " --out " + w.path("r2")) == 0);
  for (const char* f : {"spectrum.csv", "eigenfunctions.csv", "report.json", "report.txt"})
    CHECK(slurp(w.path(std::string("r1/") + f)) == slurp(w.path(std::string("r2/") + f)));
}
