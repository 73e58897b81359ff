#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mirrorvis/config.hpp"
#include "mirrorvis/io.hpp"

using namespace mirrorvis;

TEST_CASE("key-value parsing essentials") {
  const auto kv = config::KeyValues::parse_string(
      "# leading comment\n"
      "method = exact\n"
      "kappa=0.25   # trailing comment\n"
      "\n"
      "  label = two words  \n"
      "n_traj = 4096\n"
      "seed = 18446744073709551615\n"
      "flip = true\n"
      "n_list = 8, 12,16\n");

  CHECK(kv.has("method"));
  CHECK(!kv.has("missing"));
  CHECK(kv.get_string("method") == "exact");
  CHECK(kv.get_string("label") == "two words");
  CHECK(kv.get_real("kappa") == 0.25);
  CHECK(kv.get_long("n_traj") == 4096);
  CHECK(kv.get_u64("seed") == 18446744073709551615ULL);
  CHECK(kv.get_bool("flip", false) == true);
  CHECK(kv.get_bool("absent", true) == true);
  CHECK(kv.get_int_list("n_list") == std::vector<int>{8, 12, 16});

  CHECK(kv.get_real("absent", 2.5) == 2.5);
  CHECK(kv.get_string("absent", "fallback") == "fallback");
  CHECK(kv.get_long("absent", -3) == -3);
  CHECK(kv.get_u64("absent", 9) == 9);
}

TEST_CASE("key-value parsing failures") {
  using config::KeyValues;
  CHECK_THROWS_AS(KeyValues::parse_string("a = 1\na = 2\n"), InvalidParams);
  CHECK_THROWS_AS(KeyValues::parse_string("just words\n"), InvalidParams);
  CHECK_THROWS_AS(KeyValues::parse_string("= 1\n"), InvalidParams);
  CHECK_THROWS_AS(KeyValues::parse_string("a =\n"), InvalidParams);
  CHECK_THROWS_AS(KeyValues::parse_string("a = # gone\n"), InvalidParams);

  // Line numbers make it into the message.
  try {
    KeyValues::parse_string("ok = 1\nbroken line\n");
    FAIL("expected a throw");
  } catch (const InvalidParams& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  const auto kv = KeyValues::parse_string("x = nope\nf = 1.5\nneg = -4\n");
  CHECK_THROWS_AS(kv.get_real("x"), InvalidParams);
  CHECK_THROWS_AS(kv.get_long("f"), InvalidParams);
  CHECK_THROWS_AS(kv.get_u64("neg"), InvalidParams);
  CHECK_THROWS_AS(kv.get_real("absent"), InvalidParams);
  CHECK_THROWS_AS(kv.get_bool("x", false), InvalidParams);
  CHECK_THROWS_AS(kv.get_int_list("x"), InvalidParams);

  const auto gappy = KeyValues::parse_string("n_list = 4,,8\n");
  CHECK_THROWS_AS(gappy.get_int_list("n_list"), InvalidParams);

  // Trailing garbage after a number is an error, not a partial parse.
  const auto tail = KeyValues::parse_string("v = 1.5x\n");
  CHECK_THROWS_AS(tail.get_real("v"), InvalidParams);
}

TEST_CASE("unknown keys are rejected against a schema") {
  const auto kv = config::KeyValues::parse_string("kappa = 0.25\netahat = 0.1\n");
  try {
    kv.require_known({"kappa", "eta_hat"});
    FAIL("expected a throw");
  } catch (const InvalidParams& e) {
    CHECK(std::string(e.what()).find("etahat") != std::string::npos);
  }
  CHECK_NOTHROW(kv.require_known({"kappa", "etahat", "extra"}));
}

TEST_CASE("file parsing matches string parsing") {
  const std::string path = "test_config_io_scratch.cfg";
  {
    std::ofstream out(path);
    out << "kappa = 0.25\nmethod = exact\n";
  }
  const auto kv = config::KeyValues::parse_file(path);
  CHECK(kv.get_real("kappa") == 0.25);
  CHECK(kv.get_string("method") == "exact");
  std::remove(path.c_str());

  CHECK_THROWS_AS(config::KeyValues::parse_file("no_such_file.cfg"), InvalidParams);
}

TEST_CASE("real formatting round trips") {
  CHECK(io::format_real(0.0) == "0");
  CHECK(io::format_real(1.0) == "1");
  CHECK(io::format_real(0.5) == "0.5");
  const Real v = 0.1 + 0.2;
  CHECK(std::stod(io::format_real(v)) == v);
  CHECK(std::stod(io::format_real(two_pi)) == two_pi);
}

TEST_CASE("curve serialization layout") {
  exact::VisibilityCurve curve;
  curve.method = exact::Method::Exact;
  curve.meta["method"] = "exact";
  curve.meta["kappa"] = "0.25";
  curve.samples.push_back({0.0, Complex(1, 0), 1.0});
  // All fields dyadic, so the 17-digit formatting has one right answer.
  curve.samples.push_back({0.5, Complex(0.25, -0.5), 0.5625});

  std::ostringstream os;
  io::write_curve_csv(os, curve);
  std::istringstream lines(os.str());
  std::string line;

  std::getline(lines, line);
  CHECK(line == "# kappa = 0.25");  // meta sorted by key
  std::getline(lines, line);
  CHECK(line == "# method = exact");
  std::getline(lines, line);
  CHECK(line == "t_rad,re_f,im_f,visibility");
  std::getline(lines, line);
  CHECK(line == "0,1,0,1");
  std::getline(lines, line);
  CHECK(line == "0.5,0.25,-0.5,0.5625");
  CHECK(!std::getline(lines, line));
}

TEST_CASE("estimate serialization layout") {
  unravel::EnsembleEstimate est;
  est.n_traj = 2;
  est.seed = 9;
  est.method = exact::Method::UnravelLinear;
  est.records.push_back({0.0, Complex(1, 0), 0.0, 1.0, 0.0});
  est.records.push_back({1.5, Complex(0.5, 0), 0.03125, 1.0, 0.0});

  std::ostringstream os;
  io::write_estimate_csv(os, est, {{"seed", "9"}});
  std::istringstream lines(os.str());
  std::string line;

  std::getline(lines, line);
  CHECK(line == "# seed = 9");
  std::getline(lines, line);
  CHECK(line == "t_rad,re_f,im_f,visibility,stderr");
  std::getline(lines, line);
  CHECK(line == "0,1,0,1,0");
  std::getline(lines, line);
  // visibility column is |mean_f|
  CHECK(line == "1.5,0.5,0,0.5,0.03125");
  CHECK(!std::getline(lines, line));
}
