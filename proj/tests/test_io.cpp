#include <doctest.h>

#include "cyclica/io.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>

using namespace cyclica;
using io::Json;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("double formatting is round-trip exact") {
  CHECK(io::format_double(1.0) == "1.0");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1e300) == "1.0000000000000001e+300");
  CHECK(io::format_double(std::nan("")) == "null");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("dump layout") {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({1.5, 2});
  j["c"] = Json::array({Json::array({1, 2})});
  j["s"] = "x";
  j["n"] = nullptr;
  const std::string want =
      "{\n"
      "  \"b\": 1,\n"
      "  \"a\": [1.5, 2],\n"
      "  \"c\": [\n"
      "    [1, 2]\n"
      "  ],\n"
      "  \"s\": \"x\",\n"
      "  \"n\": null\n"
      "}\n";
  CHECK(io::dump(j) == want);
  CHECK(io::dump(Json::array()) == "[]\n");
  CHECK(io::dump(Json::object()) == "{}\n");
}

TEST_CASE("series round trip through JSON text") {
  std::mt19937_64 rng(2);
  std::vector<Term> terms;
  for (Exponent e : {1, 4, 17, 100}) terms.push_back({e, oracle::gaussian(rng, 3)});
  const VectorSeries f(3, terms, 128);
  const std::string text = io::dump(io::to_json(f));
  const VectorSeries g = io::parse_disc_series(io::parse_json_text(text));
  CHECK(g.truncation_degree() == 128);
  CHECK(g.spectrum() == f.spectrum());
  CHECK((g - f).norm() == 0.0);
  CHECK(io::dump(io::to_json(g)) == text);
}

TEST_CASE("scalars and vectors") {
  CHECK(io::parse_scalar(Json(2.5), "x") == Scalar(2.5, 0.0));
  CHECK(io::parse_scalar(Json::array({1, -2}), "x") == Scalar(1.0, -2.0));
  CHECK_THROWS_AS(io::parse_scalar(Json("a"), "x"), InputError);
  CHECK_THROWS_AS(io::parse_scalar(Json::array({1, 2, 3}), "x"), InputError);
  CHECK(error_of([] { io::parse_vector(Json::array({1}), 2, "v"); }) == "v: expected 2 entries, got 1");
}

TEST_CASE("field paths in error messages") {
  const Json bad_coeff = io::parse_json_text(R"({"dim": 2, "terms": [{"exp": 1, "coeff": [1, 0]},
      {"exp": 3, "coeff": [1, "x"]}]})");
  CHECK(error_of([&] { io::parse_series_file(bad_coeff); }) ==
        "series.terms[1].coeff[1]: expected a number or an [re, im] pair");
  const Json no_dim = io::parse_json_text(R"({"terms": []})");
  CHECK(error_of([&] { io::parse_series_file(no_dim); }) == "series: missing field \"dim\"");
  const Json neg = io::parse_json_text(R"({"dim": 1, "terms": [{"exp": -1, "coeff": [1]}]})");
  CHECK(error_of([&] { io::parse_series_file(neg); }) == "series.terms[0].exp: expected a nonnegative integer");
  const Json kind = io::parse_json_text(R"({"dim": 1, "kind": "torus", "terms": []})");
  CHECK(error_of([&] { io::parse_series_file(kind); }).rfind("series.kind", 0) == 0);
  const Json unsorted = io::parse_json_text(R"({"dim": 1, "terms": [{"exp": 3, "coeff": [1]}, {"exp": 1, "coeff": [1]}]})");
  CHECK(error_of([&] { io::parse_series_file(unsorted); }).rfind("series: ", 0) == 0);
  CHECK(error_of([] { io::parse_json_text("{\"dim\": ", "in.json"); }).rfind("in.json: ", 0) == 0);
  CHECK(error_of([] { io::read_json_file("/nonexistent/x.json"); }) == "/nonexistent/x.json: cannot open file");
}

TEST_CASE("tail model and spectrum parsing") {
  const Json j = io::parse_json_text(R"({
    "dim": 2,
    "terms": [{"exp": 1, "coeff": [1, 1]}, {"exp": 2, "coeff": [1, 0]}, {"exp": 4, "coeff": [0, 1]}],
    "tail_model": {"transient": [{"index": 0, "coeff": [1, 1]}], "recurrent": [[1, 0], [0, 1]],
                   "spectrum": {"kind": "geometric", "base": 2}}
  })");
  const auto f = io::parse_series_file(j);
  REQUIRE(f.disc);
  REQUIRE(f.tail_model);
  CHECK(f.tail_model->recurrent().size() == 2);
  CHECK(f.tail_model->transient().size() == 1);
  REQUIRE(f.tail_model->spectrum());
  CHECK(f.tail_model->spectrum()->value(3) == 8);

  CHECK(io::parse_spectrum(io::parse_json_text(R"({"kind": "factorial_plus_k"})")).value(2) == 8);
  CHECK(io::parse_spectrum(io::parse_json_text(R"({"kind": "crt", "set": [4, 6]})")).is_generator());
  CHECK(io::parse_spectrum(io::parse_json_text(R"({"kind": "explicit", "terms": [1, 3, 9]})")).value(2) == 9);
  CHECK(error_of([] { io::parse_spectrum(io::parse_json_text(R"({"kind": "nope"})")); }).rfind("spectrum.kind", 0) ==
        0);
  CHECK(error_of([] { io::parse_spectrum(io::parse_json_text(R"({"kind": "geometric"})")); }) ==
        "spectrum: missing field \"base\"");
}

TEST_CASE("polydisc series parsing") {
  const Json j = io::parse_json_text(R"({"dim": 1, "kind": "polydisc", "poly_dim": 2, "enumeration": "as_given",
      "terms": [{"exp": [4, 9], "coeff": [1]}, {"exp": [2, 3], "coeff": [[0.5, 0.5]]}]})");
  const auto f = io::parse_series_file(j);
  REQUIRE(f.poly);
  CHECK(f.poly->enumeration() == Enumeration::AsGiven);
  CHECK(f.poly->terms().front().exp == MultiIndex{4, 9});
  const Json bad = io::parse_json_text(R"({"dim": 1, "kind": "polydisc", "poly_dim": 2,
      "terms": [{"exp": [4], "coeff": [1]}]})");
  CHECK(error_of([&] { io::parse_series_file(bad); }) == "series.terms[0].exp: expected 2 entries");
}

TEST_CASE("block series and model parsing") {
  const Json j = io::parse_json_text(R"({"dim": 2, "degree": 1,
      "blocks": [{"start": 2, "poly": [[1, 0], [0, 1]]}, {"start": 8, "poly": [[0.5, 0], [0, 0.5]]}]})");
  const BlockSeries bs = io::parse_block_series(j);
  CHECK(bs.size() == 2);
  CHECK(bs.stack(1)(3) == Scalar(0.5));
  const Json m = io::parse_json_text(R"({"recurrent": [[[1, 0], [0, 1]]]})");
  const PolyDirectionModel model = io::parse_poly_model(m, 2, 1);
  CHECK(model.recurrent.size() == 1);
  CHECK(model.recurrent[0].size() == 4);
}

TEST_CASE("theta output and csv") {
  const PotapovProduct pp{2, {basis_vector(2, 1)}};
  const Json t = io::theta_to_json(pp);
  CHECK(t["dim"] == 2);
  CHECK(t["coefficients"].size() == 2);
  CHECK(io::csv({"budget", "residual"}, {{0, 1.0}, {1, 0.25}, {2, 1.0 / 3.0}}) ==
        "budget,residual\n0,1\n1,0.25\n2,0.33333333333333331\n");
  CHECK(io::to_decimal(U128(1) << 100) == "1267650600228229401496703205376");
  CHECK(io::to_decimal(0) == "0");
}

TEST_CASE("text files") {
  const auto path = std::filesystem::temp_directory_path() / "cyclica_io_test.json";
  io::write_text_file(path.string(), "{\"dim\": 1, \"terms\": []}");
  const Json j = io::read_json_file(path.string());
  CHECK(j["dim"] == 1);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::write_text_file("/nonexistent/dir/out.json", "x"), InputError);
}
