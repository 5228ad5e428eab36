#include "cyclica/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cyclica::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) fail(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a nonnegative integer");
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Index parse_dim(const Json& j, const std::string& path) {
  const auto d = as_u64(field(j, "dim", path), path + ".dim");
  if (d < 1 || d > 4096) fail(path + ".dim", "dimension must lie in [1, 4096]");
  return static_cast<Index>(d);
}

std::vector<CVector> parse_vector_list(const Json& j, Index dim, const std::string& path) {
  std::vector<CVector> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(parse_vector(j[i], dim, at(path, i)));
  return out;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(j[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << content;
  if (!out) throw InputError(path + ": write failed");
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

std::string to_decimal(U128 x) {
  if (x == 0) return "0";
  std::string s;
  while (x > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Scalar parse_scalar(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(path, "expected a number or an [re, im] pair");
}

CVector parse_vector(const Json& j, Index dim, const std::string& path) {
  as_array(j, path);
  if (static_cast<Index>(j.size()) != dim) {
    fail(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  }
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = parse_scalar(j[static_cast<std::size_t>(i)], at(path, static_cast<std::size_t>(i)));
  if (!all_finite(v)) fail(path, "non-finite entry");
  return v;
}

Json to_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const Subspace& s) {
  Json o;
  o["ambient_dim"] = s.ambient_dim();
  o["dim"] = s.dim();
  Json b = Json::array();
  for (Index c = 0; c < s.dim(); ++c) b.push_back(to_json(CVector(s.basis().col(c))));
  o["basis"] = b;
  return o;
}

Json to_json(const Verdict& v) {
  Json o;
  o["value"] = to_string(v.value);
  o["strength"] = to_string(v.strength);
  o["notes"] = v.notes;
  return o;
}

TailModel parse_tail_model(const Json& j, Index dim, const std::string& path) {
  std::vector<TransientEntry> transient;
  if (j.contains("transient")) {
    const auto& t = as_array(j["transient"], path + ".transient");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = at(path + ".transient", i);
      transient.push_back({static_cast<std::size_t>(as_u64(field(t[i], "index", p), p + ".index")),
                           parse_vector(field(t[i], "coeff", p), dim, p + ".coeff")});
    }
  }
  auto recurrent = parse_vector_list(field(j, "recurrent", path), dim, path + ".recurrent");
  std::optional<IntegerSpectrum> spec;
  if (j.contains("spectrum")) spec = parse_spectrum(j["spectrum"], path + ".spectrum");
  try {
    return TailModel(dim, std::move(transient), std::move(recurrent), std::move(spec));
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

SeriesFile parse_series_file(const Json& j) {
  const std::string root = "series";
  const Index dim = parse_dim(j, root);
  std::string kind = "disc";
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail(root + ".kind", "expected a string");
    kind = j["kind"].get<std::string>();
  }
  const auto& terms = as_array(field(j, "terms", root), root + ".terms");
  SeriesFile out;
  try {
    if (kind == "disc") {
      std::vector<Term> ts;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string p = at(root + ".terms", i);
        ts.push_back({as_u64(field(terms[i], "exp", p), p + ".exp"), parse_vector(field(terms[i], "coeff", p), dim, p + ".coeff")});
      }
      std::optional<Exponent> trunc;
      if (j.contains("truncation")) trunc = as_u64(j["truncation"], root + ".truncation");
      out.disc = VectorSeries(dim, std::move(ts), trunc);
    } else if (kind == "polydisc") {
      const auto n = as_u64(field(j, "poly_dim", root), root + ".poly_dim");
      if (n < 1 || n > 64) fail(root + ".poly_dim", "must lie in [1, 64]");
      std::vector<PolyTerm> ts;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string p = at(root + ".terms", i);
        const auto& e = as_array(field(terms[i], "exp", p), p + ".exp");
        if (e.size() != n) fail(p + ".exp", "expected " + std::to_string(n) + " entries");
        MultiIndex alpha;
        for (std::size_t c = 0; c < e.size(); ++c) alpha.push_back(as_u64(e[c], at(p + ".exp", c)));
        ts.push_back({std::move(alpha), parse_vector(field(terms[i], "coeff", p), dim, p + ".coeff")});
      }
      Enumeration order = Enumeration::GradedLex;
      if (j.contains("enumeration")) {
        const auto& e = j["enumeration"];
        if (e == "as_given") {
          order = Enumeration::AsGiven;
        } else if (e != "graded_lex") {
          fail(root + ".enumeration", "expected \"graded_lex\" or \"as_given\"");
        }
      }
      out.poly = PolySeries(static_cast<Index>(n), dim, std::move(ts), order);
    } else {
      fail(root + ".kind", "expected \"disc\" or \"polydisc\"");
    }
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(root, 0) == 0) throw;
    fail(root, what);
  }
  if (j.contains("tail_model")) out.tail_model = parse_tail_model(j["tail_model"], dim, root + ".tail_model");
  return out;
}

VectorSeries parse_disc_series(const Json& j) {
  auto f = parse_series_file(j);
  if (!f.disc) throw InputError("series.kind: expected a disc series");
  return *f.disc;
}

Json to_json(const VectorSeries& f) {
  Json o;
  o["dim"] = f.dim();
  o["kind"] = "disc";
  o["truncation"] = f.truncation_degree();
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json e;
    e["exp"] = t.exp;
    e["coeff"] = to_json(t.coeff);
    terms.push_back(e);
  }
  o["terms"] = terms;
  return o;
}

Json to_json(const PolySeries& f) {
  Json o;
  o["dim"] = f.dim();
  o["kind"] = "polydisc";
  o["poly_dim"] = f.poly_dim();
  o["enumeration"] = to_string(f.enumeration());
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json e;
    e["exp"] = t.exp;
    e["coeff"] = to_json(t.coeff);
    terms.push_back(e);
  }
  o["terms"] = terms;
  return o;
}

IntegerSpectrum parse_spectrum(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = "explicit";
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail(path + ".kind", "expected a string");
    kind = j["kind"].get<std::string>();
  }
  try {
    if (kind == "explicit") {
      const auto& t = as_array(field(j, "terms", path), path + ".terms");
      std::vector<Exponent> terms;
      for (std::size_t i = 0; i < t.size(); ++i) terms.push_back(as_u64(t[i], at(path + ".terms", i)));
      return IntegerSpectrum::explicit_list(std::move(terms));
    }
    if (kind == "geometric") return IntegerSpectrum::geometric(as_u64(field(j, "base", path), path + ".base"));
    if (kind == "factorial_plus_k") return IntegerSpectrum::factorial_plus_k();
    if (kind == "crt") {
      const auto& s = as_array(field(j, "set", path), path + ".set");
      std::vector<std::uint64_t> gens;
      for (std::size_t i = 0; i < s.size(); ++i) gens.push_back(as_u64(s[i], at(path + ".set", i)));
      return IntegerSpectrum::crt(DivisorClosedSet(std::move(gens)));
    }
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    fail(path, what);
  }
  fail(path + ".kind", "expected explicit, geometric, factorial_plus_k or crt");
}

BlockSeries parse_block_series(const Json& j) {
  const std::string root = "blocks";
  const Index dim = parse_dim(j, root);
  const auto degree = as_u64(field(j, "degree", root), root + ".degree");
  if (degree > 4096) fail(root + ".degree", "too large");
  const auto& b = as_array(field(j, "blocks", root), root + ".blocks");
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::string p = at(root + ".blocks", i);
    Block blk;
    blk.start = as_u64(field(b[i], "start", p), p + ".start");
    blk.poly = parse_vector_list(field(b[i], "poly", p), dim, p + ".poly");
    blocks.push_back(std::move(blk));
  }
  try {
    return BlockSeries(dim, static_cast<std::size_t>(degree), std::move(blocks));
  } catch (const InputError& e) {
    fail(root, e.what());
  }
}

PolyDirectionModel parse_poly_model(const Json& j, Index dim, std::size_t degree) {
  const std::string root = "model";
  PolyDirectionModel m;
  auto poly = [&](const Json& e, const std::string& p) {
    auto v = parse_vector_list(e, dim, p);
    if (v.size() != degree + 1) fail(p, "expected " + std::to_string(degree + 1) + " coefficient vectors");
    return stack_poly(v);
  };
  const auto& r = as_array(field(j, "recurrent", root), root + ".recurrent");
  for (std::size_t i = 0; i < r.size(); ++i) m.recurrent.push_back(poly(r[i], at(root + ".recurrent", i)));
  if (j.contains("transient")) {
    const auto& t = as_array(j["transient"], root + ".transient");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = at(root + ".transient", i);
      m.transient.push_back({static_cast<std::size_t>(as_u64(field(t[i], "index", p), p + ".index")),
                             poly(field(t[i], "poly", p), p + ".poly")});
    }
  }
  return m;
}

Json theta_to_json(const PotapovProduct& pp) {
  Json o;
  o["dim"] = pp.dim;
  Json f = Json::array();
  for (const auto& x : pp.factors) f.push_back(to_json(x));
  o["factors"] = f;
  const MatrixPolynomial theta = pp.assembled();
  Json c = Json::array();
  for (const auto& m : theta.coeffs()) {
    Json entries = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index s = 0; s < m.cols(); ++s) entries.push_back(to_json(m(r, s)));
    }
    c.push_back(entries);
  }
  o["coefficients"] = c;
  return o;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += i ? "," : "";
      const double x = row[i];
      // Integral columns print without a fraction.
      if (std::abs(x) < 9.0e15 && x == std::floor(x)) {
        out += std::to_string(static_cast<long long>(x));
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace cyclica::io
