#include "cyclica/cli.hpp"

#include "cyclica/blocks.hpp"
#include "cyclica/coefspace.hpp"
#include "cyclica/constructions.hpp"
#include "cyclica/io.hpp"
#include "cyclica/modelspace.hpp"
#include "cyclica/multishift.hpp"
#include "cyclica/orbit.hpp"
#include "cyclica/polydisc.hpp"
#include "cyclica/spectrum.hpp"
#include "cyclica/unions.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace cyclica {

namespace {

using io::Json;

struct Config {
  Tolerances tol;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t seed = 42;
  std::size_t horizon = 64;
  unsigned jobs = 1;
  bool strict = false;
  std::string report;
};

struct Outcome {
  Json result;
  bool at_horizon = false;
  std::optional<Verdict> verdict;
};

Json config_json(const Config& c) {
  Json o;
  o["tol_rank"] = c.tol.rank;
  o["tol_orth"] = c.tol.orth;
  o["tol_unitary"] = c.tol.unitary;
  o["tol_residual"] = c.tol.residual;
  o["seed"] = c.seed;
  o["horizon"] = c.horizon;
  o["jobs"] = c.jobs;
  return o;
}

Json exp_json(Exponent e) { return Json(e); }

Json spectrum_value(const IntegerSpectrum& s, std::size_t k) {
  if (auto e = s.exact(k)) {
    if (*e <= std::numeric_limits<std::uint64_t>::max()) return Json(static_cast<std::uint64_t>(*e));
    return Json(io::to_decimal(*e));
  }
  return Json(nullptr);
}

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      if (item.empty() || item[0] == '-') throw std::invalid_argument(item);
      out.push_back(std::stoull(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError(std::string(what) + ": cannot parse \"" + item + "\"");
    }
  }
  if (out.empty()) throw InputError(std::string(what) + ": empty list");
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json residue_json(const ResidueVerdict& r) {
  Json o;
  o["kind"] = to_string(r.kind);
  o["witness_index"] = r.witness_index;
  o["missing_residue"] = r.missing_residue;
  o["reason"] = r.reason;
  return o;
}

Json necessary_json(const NecessaryResult& n) {
  Json o;
  o["possibly_cyclic"] = n.possibly_cyclic;
  o["witness"] = n.witness ? Json(*n.witness) : Json(nullptr);
  o["strength"] = to_string(n.strength);
  o["span_dim"] = n.span.dim();
  return o;
}

Json decomposition_json(const Decomposition& d, bool exact) {
  Json o;
  o["mode"] = exact ? "exact" : "horizon";
  o["verdict"] = io::to_json(d.verdict);
  o["x_star"] = io::to_json(d.x_star);
  o["n_of_f"] = d.n_of_f;
  o["p"] = io::to_json(d.p);
  o["p_exponent_degree"] = d.p_exponent_degree ? exp_json(*d.p_exponent_degree) : Json(nullptr);
  o["p_index_degree"] = d.p_index_degree;
  o["window_start"] = d.window_start;
  o["warnings"] = d.warnings;
  return o;
}

io::SeriesFile load_series(const std::string& path) {
  const Json j = io::read_json_file(path);
  try {
    return io::parse_series_file(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

VectorSeries load_disc(const std::string& path, std::optional<TailModel>* model = nullptr) {
  auto f = load_series(path);
  if (!f.disc) throw InputError(path + ": expected a disc series (use the polydisc subcommand)");
  if (model) *model = f.tail_model;
  return *f.disc;
}

IntegerSpectrum load_spectrum(const std::string& path) {
  const Json j = io::read_json_file(path);
  try {
    return io::parse_spectrum(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

// ---- subcommands ----

Outcome cmd_analyze(const Config& cfg, const std::string& input) {
  std::optional<TailModel> model;
  const VectorSeries f = load_disc(input, &model);
  const Decomposition d = decompose(f, model ? &*model : nullptr, cfg.tol);
  Outcome o;
  o.result = decomposition_json(d, model.has_value());
  o.at_horizon = d.verdict.strength == Strength::AtHorizon;
  o.verdict = d.verdict;
  return o;
}

struct SpectrumOpts {
  std::string input;
  bool lacunarity = false;
  bool diff_mult = false;
  std::uint64_t residues = 0;
};

Outcome cmd_spectrum(const Config& cfg, const SpectrumOpts& so) {
  const IntegerSpectrum s = load_spectrum(so.input);
  const std::size_t k = s.available(cfg.horizon);
  Outcome o;
  o.result["name"] = s.name();
  o.result["first_index"] = s.first_index();
  o.result["terms_evaluated"] = k;
  Json terms = Json::array();
  for (std::size_t i = 0; i < k; ++i) terms.push_back(spectrum_value(s, s.first_index() + i));
  o.result["terms"] = terms;
  const bool all = !so.lacunarity && !so.diff_mult && so.residues == 0;
  if (so.lacunarity || all) {
    const double r = lacunarity_ratio(s, cfg.horizon);
    o.result["lacunarity_ratio"] = r;
    o.result["hadamard_lacunary_at_horizon"] = r >= kLacunarityFloor;
    o.at_horizon = true;
  }
  if (so.diff_mult || all) {
    o.result["difference_multiplicity"] = difference_multiplicity(s, cfg.horizon);
    o.at_horizon = true;
  }
  if (so.residues > 0) {
    const ResidueVerdict rv = spectrum_admits_SstarN(s, so.residues, cfg.horizon);
    o.result["residues"] = residue_json(rv);
    o.result["residues"]["modulus"] = so.residues;
    o.at_horizon = o.at_horizon || rv.kind == ResidueVerdict::Kind::YesAtHorizon;
  }
  return o;
}

struct ConstructOpts {
  std::size_t count = 16;
  std::uint64_t mod = 0;
  std::string set;
  Index dim = 2;
  std::string csv;
};

std::string construct_factorial(const ConstructOpts& c) {
  std::string out = c.mod ? "index,residue\n" : "index,value\n";
  for (std::size_t k = 1; k <= c.count; ++k) {
    out += std::to_string(k) + ",";
    if (c.mod) {
      out += std::to_string(factorial_residue(k, c.mod));
    } else {
      auto v = factorial_exact(k);
      if (!v) throw InputError("(k+1)! + k exceeds 128 bits at k = " + std::to_string(k) + "; pass --mod");
      out += io::to_decimal(*v);
    }
    out += "\n";
  }
  return out;
}

std::string construct_crt(const ConstructOpts& c) {
  if (c.set.empty()) throw InputError("--set is required");
  const CrtSequence seq(DivisorClosedSet(parse_list(c.set, "--set")));
  std::string out = c.mod ? "index,residue\n" : "index,value\n";
  for (std::size_t k = 1; k <= c.count; ++k) {
    out += std::to_string(k) + ",";
    if (c.mod) {
      out += std::to_string(seq.residue(k, c.mod));
    } else {
      auto v = seq.exact(k);
      if (!v) throw InputError("term exceeds 128 bits at k = " + std::to_string(k) + "; pass --mod");
      out += io::to_decimal(*v);
    }
    out += "\n";
  }
  return out;
}

std::string construct_crc(const ConstructOpts& c) {
  const CrcPointSet pts = CrcPointSet::standard(c.dim, c.count);
  std::vector<std::string> header{"index"};
  for (Index j = 0; j < c.dim; ++j) {
    header.push_back("re" + std::to_string(j));
    header.push_back("im" + std::to_string(j));
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 1; k <= c.count; ++k) {
    const CVector a = crc_sequence(pts, k);
    std::vector<double> row{static_cast<double>(k)};
    for (Index j = 0; j < a.size(); ++j) {
      row.push_back(a(j).real());
      row.push_back(a(j).imag());
    }
    rows.push_back(std::move(row));
  }
  return io::csv(header, rows);
}

struct MultishiftOpts {
  std::string input;
  std::string spectrum;
  std::uint64_t power = 0;
  bool af = false;
  std::uint64_t nmax = 12;
};

Outcome cmd_multishift(const Config& cfg, const MultishiftOpts& m) {
  Outcome o;
  if (m.af) {
    std::optional<IntegerSpectrum> s;
    if (!m.spectrum.empty()) {
      s = load_spectrum(m.spectrum);
    } else if (!m.input.empty()) {
      s = IntegerSpectrum::explicit_list(load_disc(m.input).spectrum());
    } else {
      throw InputError("--af needs --spectrum or --input");
    }
    if (m.nmax < 1) throw InputError("--nmax must be at least 1");
    o.result["spectrum"] = s->name();
    o.result["nmax"] = m.nmax;
    o.result["af"] = af_membership(*s, m.nmax, cfg.horizon, cfg.jobs);
    o.at_horizon = !s->is_generator();
    return o;
  }
  if (m.input.empty()) throw InputError("--input is required");
  if (m.power < 1) throw InputError("--power must be at least 1");
  const Json j = io::read_json_file(m.input);
  const VectorSeries f = load_disc(m.input);
  Verdict v;
  if (j.contains("reshaped_tail_model")) {
    const TailModel rm = io::parse_tail_model(j["reshaped_tail_model"], f.dim() * static_cast<Index>(m.power),
                                              "series.reshaped_tail_model");
    v = sstarN_cyclicity(f, m.power, rm, cfg.tol);
  } else {
    v = sstarN_cyclicity(f, m.power, cfg.tol);
  }
  o.result["power"] = m.power;
  o.result["verdict"] = io::to_json(v);
  if (f.dim() == 1) {
    const auto s = IntegerSpectrum::explicit_list(f.spectrum());
    o.result["residues"] = residue_json(spectrum_admits_SstarN(s, m.power, cfg.horizon));
  }
  o.at_horizon = v.strength == Strength::AtHorizon;
  o.verdict = v;
  return o;
}

struct UnionsOpts {
  std::string spectra;
  std::string input;
  Exponent cap = 1024;
};

Outcome cmd_unions_construct(const Config& cfg, const UnionsOpts& u) {
  std::vector<IntegerSpectrum> spectra;
  for (const auto& p : split(u.spectra)) spectra.push_back(load_spectrum(p));
  if (spectra.empty()) throw InputError("--spectra is required");
  PrescribedOptions opts;
  opts.seed = cfg.seed;
  opts.degree_cap = u.cap;
  const PrescribedConstruction pc = construct_prescribed_spectra(spectra, cfg.tol, opts);
  Outcome o;
  Json comps = Json::array();
  for (const auto& c : pc.components) comps.push_back(io::to_json(c));
  o.result["components"] = comps;
  o.result["verdict"] = io::to_json(pc.verdict);
  o.result["attempts"] = pc.attempts;
  o.result["target_residuals"] = pc.target_residuals;
  o.at_horizon = pc.verdict.strength == Strength::AtHorizon;
  o.verdict = pc.verdict;
  return o;
}

Outcome cmd_unions_check(const Config& cfg, const UnionsOpts& u) {
  if (u.input.empty()) throw InputError("--input is required");
  const Json j = io::read_json_file(u.input);
  Outcome o;
  try {
    if (j.contains("components")) {
      ShiftedSpectrumFamily fam;
      if (!j.contains("base") || !j.contains("shifts")) throw InputError("family: base and shifts are required");
      fam.base = j["base"].get<std::vector<Exponent>>();
      fam.shifts = j["shifts"].get<std::vector<std::int64_t>>();
      for (const auto& c : j["components"]) fam.components.push_back(io::parse_disc_series(c));
      if (fam.components.empty()) throw InputError("family.components: empty");
      std::optional<TailModel> model;
      if (j.contains("stacked_tail_model")) {
        const Index dim = fam.components.front().dim() * static_cast<Index>(fam.components.size());
        model = io::parse_tail_model(j["stacked_tail_model"], dim, "family.stacked_tail_model");
      }
      const Decomposition d = shifted_stack_cyclicity(fam, model ? &*model : nullptr, cfg.tol);
      o.result["shifted_stack"] = decomposition_json(d, model.has_value());
      o.at_horizon = d.verdict.strength == Strength::AtHorizon;
      o.verdict = d.verdict;
    }
    if (j.contains("dc_ledger")) {
      const Json& l = j["dc_ledger"];
      DcLedger led;
      led.dim = l.value("dim", Index{1});
      if (l.contains("declared")) led.declared = l["declared"].get<std::map<std::string, Index>>();
      if (l.contains("inclusions")) {
        for (const auto& p : l["inclusions"]) led.inclusions.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      }
      if (l.contains("sums")) {
        for (const auto& s : l["sums"]) {
          led.sums.push_back({s.at(0).get<std::string>(), s.at(1).get<std::string>(), s.at(2).get<std::string>()});
        }
      }
      if (l.contains("cyclic")) led.cyclic = l["cyclic"].get<std::map<std::string, bool>>();
      Json checks = Json::array();
      for (const auto& c : dc_checks(led)) {
        Json e;
        e["relation"] = c.relation;
        e["satisfied"] = c.satisfied;
        e["detail"] = c.detail;
        checks.push_back(e);
      }
      o.result["dc_checks"] = checks;
    }
  } catch (const Json::exception& e) {
    throw InputError(u.input + ": " + e.what());
  }
  if (o.result.is_null()) throw InputError(u.input + ": expected \"components\" or \"dc_ledger\"");
  return o;
}

Outcome cmd_blocks(const Config& cfg, const std::string& input, const std::string& model_path) {
  if (model_path.empty()) throw InputError("--model is required");
  const BlockSeries bs = [&] {
    const Json j = io::read_json_file(input);
    try {
      return io::parse_block_series(j);
    } catch (const InputError& e) {
      throw InputError(input + ": " + e.what());
    }
  }();
  const PolyDirectionModel model = [&] {
    const Json j = io::read_json_file(model_path);
    try {
      return io::parse_poly_model(j, bs.dim(), bs.degree());
    } catch (const InputError& e) {
      throw InputError(model_path + ": " + e.what());
    }
  }();
  const BlocksVerdict bv = blocks_cyclicity(bs, model, cfg.tol, cfg.seed);
  Outcome o;
  o.result["verdict"] = io::to_json(bv.verdict);
  o.result["local_rank"] = bv.local_rank;
  o.result["l_dim"] = bv.l.dim();
  o.result["necessary"] = necessary_json(blocks_necessary(bs, cfg.tol));
  o.verdict = bv.verdict;
  return o;
}

Outcome cmd_factorize(const Config& cfg, const std::string& poly, const std::string& out_path, std::size_t trials) {
  const VectorSeries p = load_disc(poly);
  const PotapovProduct pp = factorize_Ep(p, cfg.tol);
  const Json theta = io::theta_to_json(pp);
  if (!out_path.empty()) io::write_text_file(out_path, io::dump(theta));
  const PotapovReport r = verify_potapov(pp, trials, cfg.seed, cfg.tol);
  Outcome o;
  o.result["theta"] = theta;
  Json v;
  v["ok"] = r.ok();
  v["unitarity_defect"] = r.unitarity_defect;
  v["norm_defect"] = r.norm_defect;
  v["gamma"] = io::to_json(r.gamma);
  v["gamma_defect"] = r.gamma_defect;
  v["det_fit_defect"] = r.det_fit_defect;
  v["kernel_dim_theta0star"] = r.kernel_dim;
  v["nesting_margins"] = r.nesting_margins;
  v["k_theta_dim"] = r.k_theta_dim;
  o.result["verification"] = v;
  return o;
}

struct OrbitOpts {
  std::string input;
  std::string target;
  Exponent max_shift = 256;
  std::string csv;
};

Outcome cmd_orbit(const Config& cfg, const OrbitOpts& oo, std::ostream& out) {
  const VectorSeries f = load_disc(oo.input);
  const VectorSeries g =
      oo.target.empty() ? VectorSeries(f.dim(), {Term{0, basis_vector(f.dim(), 0)}}) : load_disc(oo.target);
  if (g.dim() != f.dim()) throw InputError("target dimension differs from the series");
  const OrbitReport r = orbit_project(f, g, oo.max_shift, cfg.tol);
  if (!oo.csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t b = 0; b < r.residuals.size(); ++b) {
      rows.push_back({static_cast<double>(b), r.residuals[b], r.gram_condition[b]});
    }
    write_or_print(oo.csv, io::csv({"budget", "residual", "gram_condition"}, rows), out);
  }
  Outcome o;
  o.result["max_shift"] = oo.max_shift;
  o.result["truncation_degree"] = r.truncation_degree;
  o.result["target_norm"] = r.target_norm;
  o.result["final_residual"] = r.final_residual;
  o.result["accepted_shifts"] = r.accepted.size();
  o.result["residual_below_tol"] = r.final_residual < cfg.tol.residual;
  return o;
}

struct PolydiscOpts {
  std::string input;
  bool check = false;
  bool analyze = false;
  std::string box;
};

Outcome cmd_polydisc(const Config& cfg, const PolydiscOpts& po) {
  const auto file = load_series(po.input);
  if (!file.poly) throw InputError(po.input + ": expected a polydisc series");
  const PolySeries& f = *file.poly;
  const bool both = !po.check && !po.analyze;
  Outcome o;
  o.result["enumeration"] = to_string(f.enumeration());
  const MultiSpectrum ms = f.spectrum();
  const C2Report c2 = polydisc_c2(ms);
  if (po.check || both) {
    const C1Certificate c1 = polydisc_c1_certificate(ms);
    o.result["c1"] = {{"constant", c1.constant},
                      {"certified", c1.certified},
                      {"certifying_coordinate", c1.certifying_coordinate}};
    o.result["c2"] = {{"holds_at_horizon", c2.holds_at_horizon},
                      {"failing_coordinates", c2.failing_coordinates},
                      {"window_start", c2.window_start}};
    o.at_horizon = true;
  }
  if (po.analyze || both) {
    if (c2.holds_at_horizon) {
      const PolydiscReport r = polydisc_cyclicity(f, file.tail_model ? &*file.tail_model : nullptr, cfg.tol);
      o.result["verdict"] = io::to_json(r.verdict);
      o.result["x_star"] = io::to_json(r.x_star);
      o.result["n_of_f"] = r.n_of_f;
      o.verdict = r.verdict;
      o.at_horizon = o.at_horizon || r.verdict.strength == Strength::AtHorizon;
    } else {
      o.result["verdict"] = nullptr;
      o.result["note"] = "(C2) fails at the horizon; orbit harness used instead";
    }
  }
  if (!po.box.empty() || ((po.analyze || both) && !c2.holds_at_horizon)) {
    MultiIndex box = po.box.empty() ? f.truncation() : parse_list(po.box, "--box");
    if (static_cast<Index>(box.size()) != f.poly_dim()) throw InputError("--box needs one entry per variable");
    const OneInOrbit r = one_in_orbit_check(f, box, cfg.tol);
    Json replay = Json::array();
    for (const auto& [alpha, res] : r.replay) replay.push_back({{"target", alpha}, {"residual", res}});
    o.result["orbit"] = {{"box", box}, {"reached", r.reached}, {"residual", r.residual}, {"replay", replay}};
  }
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclicity of lacunary power series under the backward shift", "cyclica"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Config cfg;
  std::uint64_t seed_flag = 0;
  app.add_option("--tol", cfg.tol.rank, "relative rank cutoff")->capture_default_str();
  app.add_option("--tol-orth", cfg.tol.orth)->capture_default_str();
  app.add_option("--tol-unitary", cfg.tol.unitary)->capture_default_str();
  app.add_option("--tol-residual", cfg.tol.residual)->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed_flag, "random seed (default 42, or CYCLICA_SEED)");
  app.add_option("--horizon", cfg.horizon, "evaluation horizon in terms")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads for independent sweeps")->capture_default_str();
  app.add_flag("--strict", cfg.strict, "exit 1 on a NonCyclic verdict");
  app.add_option("--report", cfg.report, "write the JSON report here instead of stdout");

  std::string input;
  auto* analyze = app.add_subcommand("analyze", "tail-span cyclicity and decomposition f = g + p");
  analyze->add_option("--input", input)->required();

  SpectrumOpts so;
  auto* spectrum = app.add_subcommand("spectrum", "lacunarity, difference multiplicity and residues");
  spectrum->add_option("--input", so.input)->required();
  spectrum->add_flag("--lacunarity", so.lacunarity);
  spectrum->add_flag("--diff-mult", so.diff_mult);
  spectrum->add_option("--residues", so.residues, "modulus N");

  ConstructOpts co;
  auto* construct = app.add_subcommand("construct", "sequence constructions as CSV");
  construct->require_subcommand(1);
  auto* c_fact = construct->add_subcommand("factorial", "(k+1)! + k");
  auto* c_crt = construct->add_subcommand("crt", "residue-class sequence for a divisor-closed set");
  auto* c_crc = construct->add_subcommand("crc", "sum_j lambda_k^j x_j");
  for (auto* c : {c_fact, c_crt, c_crc}) {
    c->add_option("--count", co.count)->capture_default_str();
    c->add_option("--csv", co.csv, "output path (default stdout)");
  }
  c_fact->add_option("--mod", co.mod);
  c_crt->add_option("--mod", co.mod);
  c_crt->add_option("--set", co.set, "generators, e.g. 4,6")->required();
  c_crc->add_option("--dim", co.dim)->capture_default_str();

  MultishiftOpts mo;
  auto* multishift = app.add_subcommand("multishift", "cyclicity for S*^N and the set A(f)");
  multishift->add_option("--input", mo.input);
  multishift->add_option("--spectrum", mo.spectrum);
  multishift->add_option("--power", mo.power);
  multishift->add_flag("--af", mo.af);
  multishift->add_option("--nmax", mo.nmax)->capture_default_str();

  UnionsOpts uo;
  auto* unions = app.add_subcommand("unions", "families, prescribed spectra and dc checks");
  unions->require_subcommand(1);
  auto* u_construct = unions->add_subcommand("construct", "cyclic family with prescribed spectra");
  u_construct->add_option("--spectra", uo.spectra, "comma-separated spectrum files")->required();
  u_construct->add_option("--cap", uo.cap, "degree cap")->capture_default_str();
  auto* u_check = unions->add_subcommand("check", "shifted-spectra family and dc ledger");
  u_check->add_option("--input", uo.input)->required();

  std::string model_path;
  auto* blocks = app.add_subcommand("blocks", "bounded-block series");
  blocks->add_option("--input", input)->required();
  blocks->add_option("--model", model_path)->required();

  std::string poly, theta_out;
  std::size_t trials = 32;
  auto* factorize = app.add_subcommand("factorize", "Blaschke-Potapov factorization of E_p");
  factorize->add_option("--poly", poly)->required();
  factorize->add_option("--out", theta_out);
  factorize->add_option("--trials", trials)->capture_default_str();

  OrbitOpts oo;
  auto* orbit = app.add_subcommand("orbit", "least-squares residual curve of the shift orbit");
  orbit->add_option("--input", oo.input)->required();
  orbit->add_option("--target", oo.target, "default: the constant e_1");
  orbit->add_option("--max-shift", oo.max_shift)->capture_default_str();
  orbit->add_option("--csv", oo.csv, "curve output path, - for stdout");

  PolydiscOpts po;
  auto* polydisc = app.add_subcommand("polydisc", "(C1), (C2) and cyclicity on the polydisc");
  polydisc->add_option("--input", po.input)->required();
  polydisc->add_flag("--check-c1c2", po.check);
  polydisc->add_flag("--analyze", po.analyze);
  polydisc->add_option("--box", po.box, "shift box, e.g. 1024,243");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*seed_opt) {
      cfg.seed = seed_flag;
    } else if (const char* env = std::getenv("CYCLICA_SEED")) {
      try {
        std::size_t pos = 0;
        const std::string s(env);
        if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
        cfg.seed = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
      } catch (const std::logic_error&) {
        throw InputError("CYCLICA_SEED: not an unsigned integer");
      }
    }
    cfg.tol.validate();
    if (cfg.horizon < 8) throw InputError("--horizon must be at least 8");
    if (cfg.jobs < 1) throw InputError("--jobs must be at least 1");

    std::string command;
    Outcome o;
    if (*construct) {
      if (co.count < 1) throw InputError("--count must be at least 1");
      std::string text;
      if (*c_fact) {
        text = construct_factorial(co);
      } else if (*c_crt) {
        text = construct_crt(co);
      } else {
        if (co.dim < 1) throw InputError("--dim must be at least 1");
        text = construct_crc(co);
      }
      write_or_print(co.csv, text, out);
      return 0;
    } else if (*analyze) {
      command = "analyze";
      o = cmd_analyze(cfg, input);
    } else if (*spectrum) {
      command = "spectrum";
      o = cmd_spectrum(cfg, so);
    } else if (*multishift) {
      command = "multishift";
      o = cmd_multishift(cfg, mo);
    } else if (*u_construct) {
      command = "unions construct";
      o = cmd_unions_construct(cfg, uo);
    } else if (*u_check) {
      command = "unions check";
      o = cmd_unions_check(cfg, uo);
    } else if (*blocks) {
      command = "blocks";
      o = cmd_blocks(cfg, input, model_path);
    } else if (*factorize) {
      command = "factorize";
      o = cmd_factorize(cfg, poly, theta_out, trials);
    } else if (*orbit) {
      command = "orbit";
      o = cmd_orbit(cfg, oo, out);
    } else if (*polydisc) {
      command = "polydisc";
      o = cmd_polydisc(cfg, po);
    }

    Json report;
    report["tool"] = "cyclica";
    report["version"] = kVersion;
    report["command"] = command;
    report["config"] = config_json(cfg);
    report["at_horizon"] = o.at_horizon;
    report["result"] = o.result;
    // The orbit curve may already occupy stdout.
    if (cfg.report.empty() && command == "orbit" && oo.csv == "-") {
      err << io::dump(report);
    } else {
      write_or_print(cfg.report, io::dump(report), out);
    }
    if (cfg.strict && o.verdict && !o.verdict->cyclic()) return 1;
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotCyclicGenerator& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace cyclica
