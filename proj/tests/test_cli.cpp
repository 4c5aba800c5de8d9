#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "fracabel/function_file.hpp"

using namespace fracabel;

namespace {

Table parse(const std::string& text) {
  std::istringstream in(text);
  return read_table(in);
}

double last_f(const std::string& text) {
  const auto f = parse(text).numeric_column("f");
  return f.back();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fracabel_test_" + name)).string();
}

}  // namespace

TEST(Cli, FracdiffOfXAtOne) {
  const CliRun r = run_cli("fracdiff --alpha 0.5 --fn x --grid-n 513 --x-max 1");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(last_f(r.out), 1.1284, 1e-4);
  EXPECT_NE(r.out.find("alpha=0.5"), std::string::npos);
  EXPECT_NE(r.out.find("grid_n=513"), std::string::npos);
}

TEST(Cli, FracintOrderOneOfOne) {
  const CliRun r = run_cli("fracint --alpha 1 --fn one");
  ASSERT_EQ(r.status, 0) << r.out;
  const Table t = parse(r.out);
  const auto x = t.numeric_column("x");
  const auto f = t.numeric_column("f");
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(f[i], x[i], 1e-14);
}

TEST(Cli, CaputoOfOneIsZero) {
  const CliRun r = run_cli("caputo --alpha 0.5 --fn one");
  ASSERT_EQ(r.status, 0) << r.out;
  for (double v : parse(r.out).numeric_column("f")) EXPECT_EQ(v, 0.0);
}

TEST(Cli, AbelRemarkableConstant) {
  const CliRun r = run_cli("abel invert-remarkable --n 0.5 --psi const:1");
  ASSERT_EQ(r.status, 0) << r.out;
  const Table t = parse(r.out);
  const auto x = t.numeric_column("x");
  const auto s = t.numeric_column("s");
  for (std::size_t i = 1; i < x.size(); ++i) EXPECT_NEAR(s[i], 2.0 / std::numbers::pi * std::sqrt(x[i]), 1e-12);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "f", "s"}));
}

TEST(Cli, AbelForwardThenInverseRoundTrip) {
  const std::string path = temp_path("psi.csv");
  const CliRun fwd = run_cli("abel forward --n 0.5 --fn one --out " + path);
  ASSERT_EQ(fwd.status, 0) << fwd.out;
  std::FILE* file = std::fopen(path.c_str(), "r");
  ASSERT_NE(file, nullptr);
  std::fclose(file);
  for (const char* mode : {"invert-remarkable", "invert-fractional"}) {
    const CliRun inv = run_cli(std::string("abel ") + mode + " --n 0.5 --in " + path);
    ASSERT_EQ(inv.status, 0) << inv.out;
    const auto f = to_function(parse(inv.out));
    for (std::size_t i = first_contract_node(f.grid()); i < f.size(); ++i) EXPECT_NEAR(f[i], 1.0, 1e-2) << mode;
  }
  std::filesystem::remove(path);
}

TEST(Cli, AbelForwardOfOne) {
  const CliRun r = run_cli("abel forward --n 0.5 --fn one --format json");
  ASSERT_EQ(r.status, 0) << r.out;
  const Table t = parse(r.out);
  const auto x = t.numeric_column("x");
  const auto f = t.numeric_column("f");
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(f[i], 2.0 * std::sqrt(x[i]), 1e-12);
}

TEST(Cli, OutputFeedsBackAsInput) {
  const std::string path = temp_path("chain.csv");
  ASSERT_EQ(run_cli("fracint --alpha 0.5 --fn sinx --grid-n 129 --out " + path).status, 0);
  const CliRun r = run_cli("fracdiff --alpha 0.5 --in " + path);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto f = to_function(parse(r.out));
  for (std::size_t i = first_contract_node(f.grid()); i < f.size(); ++i) EXPECT_NEAR(f[i], std::sin(f.x(i)), 5e-3);
  std::filesystem::remove(path);
}

TEST(Cli, TautochroneTimeTable) {
  const CliRun r = run_cli("tautochrone time-table --curve cycloid:r=1 --g 1 --heights 0.1,0.5,1.0,1.5,1.9");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto t = parse(r.out).numeric_column("T");
  ASSERT_EQ(t.size(), 5u);
  for (double v : t) EXPECT_NEAR(v, std::numbers::pi, 1e-6);
}

TEST(Cli, TautochroneReconstruct) {
  const CliRun r = run_cli("tautochrone reconstruct --T0 3.14159265 --g 1");
  ASSERT_EQ(r.status, 0) << r.out;
  const Table t = parse(r.out);
  const auto y = t.numeric_column("y");
  const auto s = t.numeric_column("s");
  for (std::size_t i = 1; i < y.size(); ++i) EXPECT_NEAR(s[i] / (2.0 * std::sqrt(2.0 * y[i])), 1.0, 5e-3);
  bool found = false;
  for (const auto& [key, value] : t.meta) {
    if (key == "radius") {
      found = true;
      EXPECT_NEAR(std::get<double>(value), 1.0, 5e-3);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, TautochroneProp26AndBrachistochrone) {
  const CliRun p = run_cli("tautochrone prop26 --ystart 1 --ymid 0.5");
  ASSERT_EQ(p.status, 0) << p.out;
  const Table t = parse(p.out);
  EXPECT_NEAR(t.numeric_column("time_ratio")[0], 1.0, 1e-9);
  EXPECT_NEAR(t.numeric_column("arc_ratio")[0], 1.0, 1e-12);

  const CliRun b = run_cli("tautochrone brachistochrone --a 0,2 --b 3.141592653589793,0 --g 1");
  ASSERT_EQ(b.status, 0) << b.out;
  const auto times = parse(b.out).numeric_column("time");
  ASSERT_EQ(times.size(), 3u);
  EXPECT_NEAR(times[2], std::numbers::pi, 1e-9);
  EXPECT_LT(times[2], times[1]);
  EXPECT_LT(times[1], times[0]);
}

TEST(Cli, SimulateExamples) {
  const CliRun c = run_cli("simulate --curve cycloid:r=1 --g 1 --y0 1 --dt 1e-4");
  ASSERT_EQ(c.status, 0) << c.out.substr(0, 200);
  const Table ct = parse(c.out);
  for (const auto& [key, value] : ct.meta) {
    if (key == "arrival_time") {
      EXPECT_NEAR(std::get<double>(value), std::numbers::pi, 1e-5);
    }
    if (key == "energy_drift") {
      EXPECT_LE(std::get<double>(value), 1e-8);
    }
  }

  const CliRun l = run_cli("simulate --curve line:h=1,L=1.4142 --g 1 --y0 1");
  ASSERT_EQ(l.status, 0);
  for (const auto& [key, value] : parse(l.out).meta) {
    if (key == "arrival_time") {
      EXPECT_NEAR(std::get<double>(value), 2.0, 1e-4);
    }
  }

  const CliRun s = run_cli("simulate --curve circle:R=1 --g 1");
  ASSERT_EQ(s.status, 0) << s.out;
  const auto arrivals = parse(s.out).numeric_column("arrival_time");
  ASSERT_EQ(arrivals.size(), 5u);
  for (std::size_t k = 1; k < arrivals.size(); ++k) EXPECT_GT(arrivals[k], arrivals[k - 1]);
}

TEST(Cli, SimulateOnReconstructedCurve) {
  const std::string path = temp_path("curve.csv");
  ASSERT_EQ(run_cli("tautochrone reconstruct --T0 3.141592653589793 --g 1 --grid-n 257 --out " + path).status, 0);
  const CliRun r = run_cli("simulate --curve-file " + path + " --g 1 --heights 0.5,1.5");
  ASSERT_EQ(r.status, 0) << r.out;
  for (double t : parse(r.out).numeric_column("arrival_time")) EXPECT_NEAR(t, std::numbers::pi, 5e-3);
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  const CliRun bad_order = run_cli("fracdiff --alpha 1.5 --fn x");
  EXPECT_EQ(bad_order.status, 2);
  EXPECT_EQ(bad_order.out.rfind("ERROR E_DOMAIN: ", 0), 0u) << bad_order.out;

  const CliRun bad_fn = run_cli("fracint --alpha 0.5 --fn cosh");
  EXPECT_EQ(bad_fn.status, 2);
  EXPECT_EQ(bad_fn.out.rfind("ERROR E_ARGS: ", 0), 0u);

  EXPECT_EQ(run_cli("fracdiff --fn x").status, 2);
  EXPECT_EQ(run_cli("nosuch").status, 2);
  EXPECT_EQ(run_cli("abel forward --n 1.2 --fn one").status, 2);
  EXPECT_EQ(run_cli("tautochrone time-table --curve ellipse:a=1").status, 2);
  EXPECT_EQ(run_cli("fracint --alpha 0.5 --in /nonexistent/file.csv").status, 2);
  EXPECT_EQ(run_cli("tautochrone brachistochrone --a 0,0 --b 1,1").status, 2);

  const CliRun stuck = run_cli("simulate --curve cycloid:r=1 --g 1 --y0 1 --max-time 0.5");
  EXPECT_EQ(stuck.status, 3);
  EXPECT_NE(stuck.out.find("ERROR E_NO_ARRIVAL: "), std::string::npos);

  const std::string one_line = bad_order.out;
  EXPECT_EQ(std::count(one_line.begin(), one_line.end(), '\n'), 1);
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* args : {"abel invert-fractional --n 0.3 --psi sqrt:2 --grid-n 129",
                           "simulate --curve circle:R=2 --g 9.81 --y0 1 --stride 50"}) {
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, VerifyQuickAndFault) {
  const CliRun ok = run_cli("verify --quick");
  EXPECT_EQ(ok.status, 0) << ok.out;
  std::istringstream lines(ok.out);
  std::string line;
  int passes = 0;
  while (std::getline(lines, line)) passes += line.rfind("PASS", 0) == 0;
  EXPECT_EQ(passes, 11);

  const CliRun bad = run_cli("verify --quick --inject-fault");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("FAIL [ 1] lacroix_values"), std::string::npos) << bad.out;
}
