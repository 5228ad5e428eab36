#pragma once

#include "cyclica/blocks.hpp"
#include "cyclica/coefspace.hpp"
#include "cyclica/core.hpp"
#include "cyclica/modelspace.hpp"
#include "cyclica/polydisc.hpp"
#include "cyclica/spectrum.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cyclica::io {

using Json = nlohmann::ordered_json;

// Parse errors carry the line and column, field errors the field path.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& origin = "<input>");
void write_text_file(const std::string& path, const std::string& content);

// Deterministic writer: insertion order, two-space indent, %.17g floats.
std::string dump(const Json& j);

Scalar parse_scalar(const Json& j, const std::string& path);
CVector parse_vector(const Json& j, Index dim, const std::string& path);
Json to_json(Scalar z);
Json to_json(const CVector& v);
Json to_json(const Subspace& s);
Json to_json(const Verdict& v);

struct SeriesFile {
  std::optional<VectorSeries> disc;
  std::optional<PolySeries> poly;
  std::optional<TailModel> tail_model;
};

// {"dim", "kind": "disc"|"polydisc", "poly_dim", "terms": [{"exp", "coeff"}], "tail_model"}
SeriesFile parse_series_file(const Json& j);
VectorSeries parse_disc_series(const Json& j);
Json to_json(const VectorSeries& f);
Json to_json(const PolySeries& f);

// {"transient": [{"index", "coeff"}], "recurrent": [vector], "spectrum"}
TailModel parse_tail_model(const Json& j, Index dim, const std::string& path);

// {"kind": "explicit", "terms": [...]} | {"kind": "geometric", "base": a}
// | {"kind": "factorial_plus_k"} | {"kind": "crt", "set": [...]}
IntegerSpectrum parse_spectrum(const Json& j, const std::string& path = "spectrum");

// {"dim", "degree", "blocks": [{"start", "poly": [vector x (N+1)]}]}
BlockSeries parse_block_series(const Json& j);
// {"recurrent": [[vector x (N+1)]], "transient": [{"index", "poly"}]}
PolyDirectionModel parse_poly_model(const Json& j, Index dim, std::size_t degree);

// {"dim", "factors": [vector], "coefficients": [[[re, im] row-major]]}
Json theta_to_json(const PotapovProduct& pp);

std::string format_double(double x);
std::string to_decimal(U128 x);

// One header line and one line per row, %.17g fields.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace cyclica::io
