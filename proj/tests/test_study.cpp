#include <catch_amalgamated.hpp>

#include "tfa/study.hpp"

using namespace tfa;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

json minimal_stft() {
  return json::parse(R"({
    "study": "stft", "name": "mini",
    "signal": {"kind": "gaussian"},
    "phase_grid": {"basis": {"columns": [[1, 0], [0, 1]]}, "samples_per_cell": [1],
                   "lo": [-1, -1], "hi": [1, 1], "offset": [-0.5, -0.5]}
  })");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("minimal stft study reproduces the Gaussian pair at the origin") {
  const auto studies = prepare_config(minimal_stft());
  REQUIRE(studies.size() == 1);
  const Table t = studies[0].run();
  REQUIRE(t.rows.size() == 9);
  const auto& centre = t.rows[4];
  CHECK(centre[0] == "0");
  CHECK(centre[1] == "0");
  CHECK_THAT(std::stod(centre[4]), WithinAbs(0.398942, 1e-6));
  CHECK_THAT(std::stod(centre[4]), WithinAbs(1.0 / std::sqrt(two_pi), 1e-12));

  const auto lines = split(to_csv(t), '\n');
  CHECK(lines[0] == "# study: stft; anchor: short-time Fourier transform");
  CHECK(lines[1] == "x,xi,re,im,abs");
  CHECK(lines.size() == 11);
}

TEST_CASE("resolution scale multiplies grid densities") {
  const auto t1 = prepare_config(minimal_stft(), 1)[0].run();
  const auto t2 = prepare_config(minimal_stft(), 2)[0].run();
  CHECK(t2.rows.size() == 4 * t1.rows.size());
  CHECK_THROWS_AS(prepare_config(minimal_stft(), 0), InvalidArgument);
}

TEST_CASE("study output is a pure function of the config") {
  auto cfg = json::parse(R"({"study": "young", "cells": {"columns": [[1.0]]}, "p": [1], "r": [0.5],
                              "batches": 5, "seed": 3})");
  const auto a = to_csv(prepare_config(cfg)[0].run());
  const auto b = to_csv(prepare_config(cfg)[0].run());
  CHECK(a == b);
  cfg["seed"] = 4;
  CHECK(to_csv(prepare_config(cfg)[0].run()) != a);
}

TEST_CASE("config errors carry JSON pointers") {
  auto cfg = minimal_stft();
  cfg["colour"] = "red";
  CHECK_THROWS_WITH(prepare_config(cfg), ContainsSubstring("unknown key 'colour'") && ContainsSubstring("/colour"));

  cfg = minimal_stft();
  cfg.erase("phase_grid");
  CHECK_THROWS_WITH(prepare_config(cfg), ContainsSubstring("/phase_grid"));

  cfg = minimal_stft();
  cfg["signal"]["kind"] = "boxcar";
  CHECK_THROWS_WITH(prepare_config(cfg), ContainsSubstring("/signal/kind"));

  cfg = minimal_stft();
  cfg["study"] = "spectrogram";
  CHECK_THROWS_AS(prepare_config(cfg), ValidationError);

  const auto multi = json::parse(R"({"studies": [{"study": "young", "cells": {"columns": [[1.0]]},
                                                    "p": [1], "r": ["bogus"]}]})");
  CHECK_THROWS_WITH(prepare_config(multi), ContainsSubstring("/studies/0/r"));

  const auto dup = json{{"studies", {minimal_stft(), minimal_stft()}}};
  CHECK_THROWS_WITH(prepare_config(dup), ContainsSubstring("duplicate study name"));
}

TEST_CASE("hypotheses are checked before execution") {
  const auto young = json::parse(R"({"study": "young", "cells": {"columns": [[1, 0], [0, 1]]},
                                     "p": [2, 0.5], "r": [1, 1]})");
  CHECK_THROWS_WITH(prepare_config(young), ContainsSubstring("fails at k = 2"));

  const auto emb = json::parse(R"({"study": "embedding-rel1", "p": [0.5], "q": [1], "r": [1], "r1": 1, "r2": 1,
    "phase_grid": {"basis": {"columns": [[1, 0], [0, 1]]}, "samples_per_cell": [2], "lo": [-2, -2], "hi": [1, 1]}})");
  CHECK_THROWS_AS(prepare_config(emb), PreconditionError);

  const auto empty = json::parse(R"({"study": "equiv-wiener-r", "corpus": [], "p": [1, 1], "rs": [1],
    "phase_grid": {"basis": {"columns": [[1, 0], [0, 1]]}, "samples_per_cell": [2], "lo": [-2, -2], "hi": [1, 1]}})");
  CHECK_THROWS_WITH(prepare_config(empty), "empty corpus");
}

TEST_CASE("exponent strings parse to infinity") {
  const auto cfg = json::parse(R"({"study": "modnorm",
    "signal": {"kind": "trig", "poly": {"lattice": {"columns": [[6.283185307179586]]}, "coeffs": [{"alpha": [1], "re": 1}]}},
    "phase_grid": {"basis": {"columns": [[6.283185307179586, 0], [0, 1]]}, "samples_per_cell": [8], "lo": [0, -8], "hi": [0, 9]},
    "norms": [{"p": ["inf"], "q": [2]}, {"p": ["inf"], "q": [2], "flavor": "W"}]})");
  const auto t = prepare_config(cfg)[0].run();
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "inf");
  CHECK_THAT(std::stod(t.rows[0][3]), WithinAbs(1.0, 1e-6));
  CHECK_THAT(std::stod(t.rows[1][3]), WithinAbs(1.0, 1e-6));
}

TEST_CASE("gabor study reports the frame verdict") {
  const auto cfg = json::parse(R"({"study": "gabor-dual", "L": 32, "a": 4, "b": 4, "signals": 5})");
  const auto t = prepare_config(cfg)[0].run();
  std::map<std::string, std::string> kv;
  for (const auto& r : t.rows) kv[r[0]] = r[1];
  CHECK(std::stod(kv["A"]) > 0.0);
  CHECK(std::stod(kv["max_reconstruction_error"]) < 1e-10);
  CHECK(kv["n_min"] == "1");
  CHECK(std::stod(kv["domination_defect"]) <= 1e-10);

  const auto bad = json::parse(R"({"study": "gabor-dual", "L": 32, "a": 8, "b": 8, "signals": 1})");
  CHECK_THROWS_AS(prepare_config(bad)[0].run(), DefinitenessError);
}
