#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iaf/cli.hpp"
#include "iaf/config.hpp"
#include "iaf/csv.hpp"
#include "iaf/error.hpp"

using namespace iaf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "iaf_unit_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "iafmap");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("config files") {
  const auto ok = parse_config(write_file("pstar.cfg", "a=-0.5\nb=0.2\ntheta=1\n"));
  CHECK(ok.a == -0.5);
  CHECK(ok.b == 0.2);
  CHECK(ok.theta == 1.0);
  CHECK(ok.model == "linear");

  const auto commented = parse_config(write_file("c.cfg", "# sweep\n  A = 3.5   # amplitude\n\nd=0.2\nrefine=true\n"));
  CHECK(*commented.A == 3.5);
  CHECK(commented.refine);

  auto message = [](const std::string& name, const std::string& text) {
    try {
      parse_config(write_file(name, text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const auto duty = message("d.cfg", "d=1.0\n");
  CHECK(duty.find("d.cfg:1") != std::string::npos);
  CHECK(duty.find("open interval (0,1)") != std::string::npos);

  const auto h1 = message("h1.cfg", "theta=1\na=-0.5\nb=0.6\n");
  CHECK(h1.find("H.1") != std::string::npos);
  CHECK(h1.find("h1.cfg:3") != std::string::npos);

  CHECK(message("u.cfg", "A=1\nfrobnicate=2\n").find("u.cfg:2: unknown key") != std::string::npos);
  CHECK(message("m.cfg", "points=many\n").find("m.cfg:1: malformed") != std::string::npos);
  CHECK(message("n.cfg", "just words\n").find("n.cfg:1") != std::string::npos);
  CHECK(message("r.cfg", "tmin=5\ntmax=1\n").find("r.cfg:2") != std::string::npos);
  CHECK(message("q.cfg", "model=quadratic\na=-0.9\nb=0.2\nc=-0.5\n").find("H.2") != std::string::npos);
  CHECK_THROWS_AS(parse_config(scratch("missing.cfg").string()), ConfigError);
}

TEST_CASE("csv round trip") {
  StaircaseSample a;
  a.T = 0.1 + 0.2;
  a.eta = Rational(5, 8);
  a.rho = Rational(5, 8);
  a.rate = 0.625 / 3.0;
  a.word = "LRLRRLRR";
  a.period_p = 8;
  a.converged = true;
  StaircaseSample b = a;
  b.T = 1e-300;
  b.rate = 123456789.123456789;
  b.converged = false;

  std::stringstream io;
  write_staircase(io, {a, b});
  CHECK(io.str().rfind(std::string(kStaircaseHeader) + "\n", 0) == 0);
  CHECK(io.str().find('\r') == std::string::npos);
  const auto back = read_staircase(io);
  REQUIRE(back.size() == 2);
  CHECK(back[0].T == a.T);
  CHECK(back[0].eta == a.eta);
  CHECK(back[0].rho == a.rho);
  CHECK(back[0].rate == a.rate);
  CHECK(back[0].word == a.word);
  CHECK(back[0].period_p == 8);
  CHECK(back[0].converged);
  CHECK(back[1].T == b.T);
  CHECK(back[1].rate == b.rate);
  CHECK_FALSE(back[1].converged);

  std::stringstream bad(std::string(kStaircaseHeader) + "\n1,1,0,0,1,1,L,1,1\n");
  CHECK_THROWS_AS(read_staircase(bad), ConfigError);
  std::stringstream short_row(std::string(kStaircaseHeader) + "\n1,1,1\n");
  CHECK_THROWS_AS(read_staircase(short_row), ConfigError);
  CHECK(format_real(0.1) == "0.1");
}

TEST_CASE("cli summaries and exit codes") {
  const auto limits = cli({"limits", "--a", "-0.5", "--b", "0.2", "--theta", "1", "--A", "3.3333", "--d", "0.2"});
  CHECK(limits.code == 0);
  CHECK(limits.out.find("r_infinity=0.6553") != std::string::npos);
  CHECK(limits.out.find("r_zero=0.5812") != std::string::npos);

  const auto classify = cli({"classify", "--A", "0.25", "--d", "0.5"});
  CHECK(classify.code == 0);
  CHECK(classify.out.rfind("NonSpiking", 0) == 0);

  CHECK(cli({"classify", "--A", "0.25", "--d", "1.5"}).code == kExitConfig);
  CHECK(cli({"classify", "--A", "0.25"}).code == kExitConfig);
  CHECK(cli({"nonsense"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"bif", "--solve", "T", "--n", "1", "--side", "R", "--A", "0.25", "--d", "0.5"}).code == kExitNumeric);

  const auto bif = cli({"bif", "--solve", "A", "--side", "zero", "--n", "0", "--d", "0.5", "--T", "2"});
  CHECK(bif.code == 0);
  CHECK(bif.out.find("A=0.481959") != std::string::npos);
}

TEST_CASE("cli flags override the config file") {
  const auto cfg = write_file("sweep.cfg", "mode=width\nA=0.25\nd=0.5\ntmin=1\ntmax=2\npoints=5\n");
  const auto out = scratch("override.csv");
  const auto r = cli({"--config", cfg.string(), "sweep", "--A", "3.3333333333333335", "--d", "0.2", "-o", out.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(out, std::ios::binary);
  const auto samples = read_staircase(in);
  REQUIRE(samples.size() == 5);
  CHECK(samples.back().eta > Rational(0, 1));
}

TEST_CASE("cli sweep output and determinism") {
  const auto one = scratch("amp1.csv");
  const auto four = scratch("amp4.csv");
  const std::vector<std::string> base{"sweep", "--mode", "amplitude", "--delta", "3", "--Q", "0.6667",
                                      "--tmin", "3", "--tmax", "120", "--n", "200"};
  auto with = [&](const std::string& workers, const fs::path& out) {
    auto args = base;
    args.insert(args.end(), {"--workers", workers, "-o", out.string()});
    return cli(args);
  };
  REQUIRE(with("1", one).code == 0);
  REQUIRE(with("4", four).code == 0);
  const std::string text = slurp(one);
  CHECK(text == slurp(four));
  CHECK(text.rfind("T,eta_num,eta_den,rho_num,rho_den,rate,word,period,converged\n", 0) == 0);
  std::istringstream in(text);
  const auto samples = read_staircase(in);
  REQUIRE(samples.size() == 200);
  CHECK(std::abs(samples.back().rate - 0.6667) / 0.6667 < 0.02);
}

TEST_CASE("cli scan, bif curve and adding check") {
  const auto scan = scratch("scan.csv");
  const auto s = cli({"scan", "--T", "1", "--dmin", "0.1", "--dmax", "0.9", "--dn", "4", "--invAmin", "0.5",
                      "--invAmax", "4", "--invAn", "5", "-o", scan.string()});
  CHECK(s.code == 0);
  const std::string table = slurp(scan);
  CHECK(table.rfind("d,invA,period,capped,failed,eta_num,eta_den\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 21);

  const auto curve = scratch("bif.csv");
  const auto b = cli({"bif", "--solve", "A", "--side", "R", "--n", "1", "--d", "0.5", "--tmin", "0.05", "--tmax",
                      "200", "--points", "10", "--log", "-o", curve.string()});
  CHECK(b.code == 0);
  CHECK(b.out.find("points=10") != std::string::npos);

  const auto stair = scratch("cond.csv");
  const std::vector<std::string> sweep{"sweep", "--A", "3.3333333333333335", "--d", "0.05", "--tmin", "2.5",
                                       "--tmax", "4.5", "--n", "200", "--refine", "-o", stair.string()};
  REQUIRE(cli(sweep).code == 0);
  const auto report = scratch("adding.csv");
  const auto a = cli({"adding-check", "--A", "3.3333333333333335", "--d", "0.05", "--in", stair.string(), "-o",
                      report.string()});
  CHECK(a.code == 0);
  CHECK(a.out.find("checks=3 found=3 violations=0") != std::string::npos);
}
