#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

const std::string kCli = POLYCOMM_CLI_PATH;
const std::string kData = POLYCOMM_DATA_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/polycomm_cli_") + name;
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
  return path;
}

}  // namespace

TEST_CASE("classify subcommand") {
  auto rot = run("classify " + kData + "/lm_rotation.json");
  REQUIRE(rot.exit_code == 0);
  auto j = nlohmann::json::parse(rot.out);
  CHECK(j.at("cat0") == true);
  CHECK(j.at("biautomatic") == false);
  CHECK(j.at("embeddable") == false);
  CHECK(j.at("order") == "infinite");
  CHECK(j.at("l_index") == 5);

  auto bs = run("classify " + kData + "/bs23.json");
  REQUIRE(bs.exit_code == 0);
  auto jb = nlohmann::json::parse(bs.out);
  CHECK(jb.at("cat0") == false);
  CHECK(jb.at("order") == "infinite");
  CHECK(jb.at("l_index") == 2);

  const std::string ident =
      write_temp("ident.json", R"({"A": {"rows": [["1","0"],["0","1"]]}})");
  auto ji = nlohmann::json::parse(run("classify " + ident).out);
  CHECK(ji.at("order") == 1);
  CHECK(ji.at("cat0") == true);
  CHECK(ji.at("biautomatic") == true);
}

TEST_CASE("classify error paths") {
  const std::string bad = write_temp("bad.json", "{ not json");
  CHECK(run("classify " + bad).exit_code == 2);
  CHECK(run("classify /nonexistent/x.json").exit_code == 2);

  // Z^2 is not a sublattice of the rotation's domain lattice
  const std::string badl = write_temp("badl.json", R"({
    "A": {"rows": [["3/5","-4/5"],["4/5","3/5"]]},
    "L": {"ambient_dim": 2, "basis": [["1","0"],["0","1"]]}})");
  CHECK(run("classify " + badl).exit_code == 3);
}

TEST_CASE("build-polyfun on the bundled example") {
  auto r = run("build-polyfun " + kData + "/example44.json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("valid") == true);
  REQUIRE(j.at("polyfun").at("pieces").size() == 6);
  CHECK(j.at("polyfun").at("pieces")[0].at("y") == nlohmann::json({"0", "2"}));
  CHECK(j.at("polyfun").at("pieces")[1].at("y") == nlohmann::json({"4", "0"}));
  CHECK(j.at("polyfun").at("pieces")[3].at("y") == nlohmann::json({"4", "-2"}));
  CHECK(j.at("certificate").at("delta") == 1);

  // byte-determinism
  auto again = run("build-polyfun " + kData + "/example44.json");
  CHECK(again.out == r.out);
}

TEST_CASE("build-polyfun failure modes") {
  const std::string dep = write_temp("dep.json", R"({
    "N": 2,
    "alphabet": [{"name":"e","image":[0,0]},{"name":"x","image":[1,0]},
                 {"name":"X","image":[-1,0]}],
    "branches": [{"u": [[],[],[]], "v": [["x"],["X"]]}]})");
  CHECK(run("build-polyfun " + dep).exit_code == 4);

  const std::string partial = write_temp("partial.json", R"({
    "N": 2,
    "alphabet": [{"name":"e","image":[0,0]},{"name":"x","image":[1,0]},
                 {"name":"X","image":[-1,0]},{"name":"y","image":[0,1]},
                 {"name":"Y","image":[0,-1]}],
    "branches": [{"u": [[],[],[]], "v": [["e","y"],["e","X"]]}]})");
  auto r = run("build-polyfun " + partial);
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("valid") == false);
  CHECK(j.at("validation").at("cover_ok") == false);

  CHECK(run("build-polyfun " + write_temp("junk.json", "[1,2")).exit_code == 2);
}

TEST_CASE("verify subcommand") {
  auto ok = run("verify " + kData + "/example44.json --max-len 30");
  REQUIRE(ok.exit_code == 0);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("length_bound").at("ok") == true);
  CHECK(j.at("worst_slack") == "1");
  CHECK(j.at("lambda_observed").get<int>() >= 1);
  CHECK(j.at("kappa_observed").get<int>() >= 1);

  CHECK(run("verify " + kData + "/example44.json --max-len 0").exit_code == 0);

  // a language that passes independence but has no uniform length bound
  const std::string unbounded = write_temp("unbounded.json", R"({
    "N": 2,
    "alphabet": [{"name":"e","image":[0,0]},{"name":"y","image":[0,1]},
                 {"name":"Y","image":[0,-1]}],
    "branches": [{"u": [[],[]], "v": [["e","y"]]},
                 {"u": [[],[]], "v": [["y"]]}]})");
  CHECK(run("verify " + unbounded + " --max-len 12").exit_code == 1);
}

TEST_CASE("eval, restrict, symmetries, comm-image") {
  CHECK(run("eval " + kData + "/example27.json 0,3").out == "6\n");
  CHECK(run("eval " + kData + "/example27.json 3/2,3").out == "6\n");
  CHECK(run("eval " + kData + "/example27.json bogus").exit_code == 2);

  const std::string diag = write_temp("diag.json", R"({"rows": [["1"],["1"]]})");
  auto r = run("restrict " + kData + "/example27.json " + diag);
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("valid") == true);
  CHECK(j.at("polyfun").at("pieces").size() == 2);

  auto sym = nlohmann::json::parse(run("symmetries " + kData + "/example27.json").out);
  CHECK(sym.at("order") == 1);

  auto comm = nlohmann::json::parse(
      run("comm-image " + kData + "/example27.json " + diag).out);
  CHECK(comm.at("order") == 2);
}

TEST_CASE("build output feeds back into eval and symmetries without loss") {
  auto built = run("build-polyfun " + kData + "/example44.json");
  REQUIRE(built.exit_code == 0);
  const auto fun = nlohmann::json::parse(built.out).at("polyfun");
  const std::string path = write_temp("rebuilt.json", fun.dump());
  CHECK(run("eval " + path + " 0,3").out == "6\n");
  CHECK(run("eval " + path + " -3,0").out == "6\n");
  auto sym = nlohmann::json::parse(run("symmetries " + path).out);
  CHECK(sym.at("order") == 1);
}

TEST_CASE("output redirection to a file") {
  const std::string path = "/tmp/polycomm_cli_out.json";
  std::remove(path.c_str());
  auto r = run("classify " + kData + "/bs23.json --output " + path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j.at("order") == "infinite");
}

TEST_CASE("levelset output") {
  auto csv = run("levelset " + kData + "/example27.json 6 --format csv");
  REQUIRE(csv.exit_code == 0);
  std::vector<std::string> lines;
  std::istringstream in(csv.out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "x,y,x_decimal,y_decimal");
  CHECK(lines[1].rfind("3/2,0,", 0) == 0);  // counterclockwise from the x-axis

  auto j = nlohmann::json::parse(run("levelset " + kData + "/example27.json 6").out);
  CHECK(j.at("vertices").size() == 5);

  // invalid function: a single piece cannot cover the plane
  const std::string invalid = write_temp("invalid_fun.json", R"({
    "dim": 2,
    "pieces": [{"generators": [["1","0"],["0","1"]], "y": ["1","1"]}]})");
  CHECK(run("levelset " + invalid + " 6").exit_code == 3);
  CHECK(run("symmetries " + invalid).exit_code == 3);
}
