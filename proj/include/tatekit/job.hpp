#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "tatekit/json_io.hpp"
#include "tatekit/period_index.hpp"
#include "tatekit/smith.hpp"

namespace tatekit {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr unsigned kDefaultPrecision = 8;

struct Job {
  std::string command;
  io::Json input;                          // inline input (null when absent)
  std::optional<std::string> input_path;   // or a file to load it from
  std::map<std::string, std::string> options;
};

struct RunContext {
  bool verbose = false;
  unsigned default_precision = kDefaultPrecision;
  std::filesystem::path base_dir = ".";  // relative input paths resolve here
};

struct Report {
  io::Json document;

  std::string dump() const { return document.dump(2) + "\n"; }
};

namespace detail {

struct CommandSpec {
  const char* name;
  bool needs_input;
  std::vector<const char*> required_options;
};

inline const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"snf", true, {}},
      {"tate", true, {}},
      {"transfer", true, {}},
      {"counterexample-local", false, {"p", "q"}},
      {"teichmuller", false, {"p", "alpha"}},
      {"quad-sub", false, {"p", "f", "e"}},
      {"sha1", true, {}},
      {"tate-obstruction", true, {}},
      {"subgroup-bound", true, {}},
      {"exponents", false, {"theta-order"}},
      {"split-sim", true, {}},
  };
  return specs;
}

inline const CommandSpec* find_command(const std::string& name) {
  for (const auto& s : command_specs())
    if (name == s.name) return &s;
  return nullptr;
}

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline std::string option(const Job& job, const std::string& key) {
  auto it = job.options.find(key);
  if (it == job.options.end()) throw io::schema("/options/" + key, "missing option");
  return it->second;
}

inline Int int_option(const Job& job, const std::string& key) {
  try {
    return parse_int(option(job, key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    throw io::schema("/options/" + key, "not a decimal integer");
  }
}

inline u64 u64_option(const Job& job, const std::string& key) {
  Int v = int_option(job, key);
  if (v < 0 || v > Int(std::numeric_limits<std::uint32_t>::max())) throw io::schema("/options/" + key, "out of range");
  return static_cast<u64>(v);
}

}  // namespace detail

// Validated Job from JSON text; PARSE_ERROR or SCHEMA_ERROR name the field.
inline Job parse_job(std::string_view source) {
  io::Json j;
  try {
    j = io::Json::parse(source);
  } catch (const io::Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw io::schema("", "job must be an object");
  Job job;
  const io::Json& cmd = io::field(j, "command", "");
  if (!cmd.is_string()) throw io::schema("/command", "expected a string");
  job.command = cmd.get<std::string>();
  const detail::CommandSpec* spec = detail::find_command(job.command);
  if (!spec) throw io::schema("/command", "unknown command '" + job.command + "'");
  for (const auto& [key, value] : j.items())
    if (key != "command" && key != "input" && key != "options") throw io::schema("/" + key, "unexpected field");
  if (j.contains("input")) {
    if (j["input"].is_string()) job.input_path = j["input"].get<std::string>();
    else if (j["input"].is_object()) job.input = j["input"];
    else throw io::schema("/input", "expected an object or a path");
  }
  if (j.contains("options")) {
    const io::Json& o = j["options"];
    if (!o.is_object()) throw io::schema("/options", "expected an object");
    for (const auto& [key, value] : o.items()) {
      if (value.is_string()) job.options[key] = value.get<std::string>();
      else if (value.is_number_integer() || value.is_boolean()) job.options[key] = value.dump();
      else throw io::schema("/options/" + key, "expected a string");
    }
  }
  if (spec->needs_input && job.input.is_null() && !job.input_path) throw io::schema("/input", "missing field");
  for (const char* key : spec->required_options)
    if (!job.options.count(key)) throw io::schema(std::string("/options/") + key, "missing option");
  return job;
}

namespace detail {

using io::Json;

inline Json resolve_input(const Job& job, const RunContext& ctx) {
  if (!job.input_path) return job.input;
  std::filesystem::path p = *job.input_path;
  if (p.is_relative()) p = ctx.base_dir / p;
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read input file " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, p.string() + ": " + e.what());
  }
}

inline Json run_snf(const Json& in, std::vector<std::string>& trace) {
  IntMatrix a = io::read_matrix(io::field(in, "matrix", ""), "/input/matrix");
  SmithForm f = smith_normal_form(a);
  if (f.U * a * f.V != f.S) throw Error(ErrorCode::InvalidArgument, "Smith form certificate failed");
  FinAbGroup c = cokernel(a);
  trace.push_back("smith_normal_form: U A V = S with U, V unimodular (certified)");
  trace.push_back("cokernel: Z^" + std::to_string(a.rows()) + " / col(A) read off the diagonal");
  Json r;
  r["diagonal"] = io::write_vector(f.diagonal());
  r["rank"] = std::to_string(f.rank);
  r["S"] = io::write_matrix(f.S);
  r["U"] = io::write_matrix(f.U);
  r["V"] = io::write_matrix(f.V);
  r["cokernel"] = io::write_group(c);
  return r;
}

inline Subgroup optional_subgroup(const GroupPtr& g, const Json& in, const char* key) {
  if (!in.contains(key)) return Subgroup::whole(g);
  return io::read_subgroup(g, in[key], std::string("/input/") + key);
}

inline Json run_tate(const Json& in, std::vector<std::string>& trace) {
  GroupPtr g = io::read_group(io::field(in, "group", ""), "/input/group");
  GModule m = io::read_module(g, io::field(in, "module", ""), "/input/module");
  Subgroup h = optional_subgroup(g, in, "subgroup");
  Json r;
  r["coinvariants"] = io::write_group(coinvariants(m, h));
  r["invariants_rank"] = std::to_string(invariants(m, h).cols());
  r["norm_matrix"] = io::write_matrix(norm_matrix(m, h));
  r["h_minus1"] = io::write_group(tate_h_minus1(m, h));
  r["h0"] = io::write_group(tate_h0(m, h));
  trace.push_back("coinvariants: M_H = M / I_H M");
  trace.push_back("tate_h_minus1: kernel of the norm M_H -> M^H");
  trace.push_back("tate_h0: M^H / N_H M");
  return r;
}

inline Json run_transfer(const Json& in, std::vector<std::string>& trace) {
  GroupPtr g = io::read_group(io::field(in, "group", ""), "/input/group");
  GModule m = io::read_module(g, io::field(in, "module", ""), "/input/module");
  Subgroup from = optional_subgroup(g, in, "from");
  Subgroup to = io::read_subgroup(g, io::field(in, "to", ""), "/input/to");
  FinAbGroup source = torsion_subgroup(coinvariants(m, from)).group;
  FinAbGroup target = torsion_subgroup(coinvariants(m, to)).group;
  Json r;
  r["transfer_matrix"] = io::write_matrix(transfer_matrix(m, from, to));
  r["source"] = io::write_group(source);
  r["target"] = io::write_group(target);
  Json images = Json::array();
  for (const auto& x : source.generators()) {
    Json e;
    e["generator"] = io::write_element(x);
    e["lift"] = io::write_vector(source.lift(x));
    AbElement y = transfer(m, from, to, source, x, target);
    e["image"] = io::write_element(y);
    e["image_lift"] = io::write_vector(target.lift(y));
    images.push_back(e);
  }
  r["generator_images"] = images;
  if (in.contains("class")) {
    AbElement x = io::read_element(source, in["class"], "/input/class");
    r["class_image"] = io::write_element(transfer(m, from, to, source, x, target));
  }
  trace.push_back("transfer: [m] -> [sum of g_i m] over representatives of the cosets of the smaller subgroup");
  trace.push_back("torsion_subgroup: both sides restricted to torsion of the coinvariants");
  return r;
}

inline Json write_descriptor(const TameExtDescriptor& d) {
  Json j;
  j["wild_exponent"] = std::to_string(d.wild_exponent);
  j["f"] = std::to_string(d.f);
  j["e"] = std::to_string(d.e);
  Json a = Json::array();
  for (u64 c : d.alpha) a.push_back(std::to_string(c));
  j["alpha"] = a;
  return j;
}

inline Json run_counterexample(const Job& job, std::vector<std::string>& trace) {
  CounterexampleReport rep = verify_counterexample_local(u64_option(job, "p"), u64_option(job, "q"));
  Json r;
  r["p"] = std::to_string(rep.p);
  r["q"] = std::to_string(rep.q);
  r["period"] = rep.period.str();
  r["index_divisibility"] = rep.index_divisibility.str();
  Json ws = Json::array();
  for (const auto& w : rep.witnesses) {
    Json x;
    x["square_class"] = std::string(square_class_name(w.square_class));
    x["xi_j"] = io::write_vector(w.xi_j);
    x["sample_descriptor"] = write_descriptor(w.sample_descriptor);
    x["descriptor_lands_here"] = w.descriptor_lands_here;
    x["restriction_nontrivial"] = w.restriction_nontrivial;
    x["split_by_quadratic"] = w.split_by_quadratic;
    x["coprime_rule_applies"] = w.coprime_rule_applies;
    x["contradiction"] = w.contradiction();
    ws.push_back(x);
  }
  r["witnesses"] = ws;
  r["imported_lemmas"] = rep.imported_lemmas;
  trace.insert(trace.end(), rep.trace.begin(), rep.trace.end());
  return r;
}

inline unsigned precision_option(const Job& job, const RunContext& ctx) {
  if (!job.options.count("precision")) return ctx.default_precision;
  u64 n = u64_option(job, "precision");
  if (n == 0 || n > 4096) throw io::schema("/options/precision", "must be in [1, 4096]");
  return static_cast<unsigned>(n);
}

inline Json run_teichmuller(const Job& job, const RunContext& ctx, std::vector<std::string>& trace) {
  const u64 p = u64_option(job, "p");
  if (!is_prime(p)) throw Error(ErrorCode::BadResidue, "p must be prime");
  const Int alpha = int_option(job, "alpha");
  const unsigned n = precision_option(job, ctx);
  const ResidueField field = ResidueField::prime(p);
  TeichmullerResult t = teichmuller_lift_traced(static_cast<long long>(floor_mod(alpha, Int(p))), field, n);
  Json r;
  r["value"] = t.lift.value.str();
  r["precision"] = std::to_string(n);
  r["modulus"] = tatekit::pow(Int(p), n).str();
  Json it = Json::array();
  for (const auto& x : t.iterates) it.push_back(x.str());
  r["iterates"] = it;
  trace.push_back("teichmuller_lift: x_0 = alpha, x_{k+1} = x_k^p mod p^" + std::to_string(n) + ", " +
                  std::to_string(t.iterates.size() - 1) + " steps to the fixed point");
  trace.push_back("the fixed point satisfies x^p = x and x = alpha mod p");
  return r;
}

inline FieldElement parse_residue(const std::string& text, const ResidueField& k, const std::string& path) {
  std::vector<long long> coeffs;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      Int v = parse_int(part);
      coeffs.push_back(static_cast<long long>(floor_mod(v, Int(k.p()))));
    } catch (const Error&) {
      throw io::schema(path, "expected comma-separated coefficients");
    }
  }
  if (coeffs.empty() || coeffs.size() > k.degree()) throw io::schema(path, "expected 1.." + std::to_string(k.degree()) + " coefficients");
  return k.from_coeffs(coeffs);
}

inline Json run_quad_sub(const Job& job, std::vector<std::string>& trace) {
  const u64 p = u64_option(job, "p");
  if (p < 2 || !is_prime(p)) throw Error(ErrorCode::BadResidue, "p must be prime");
  if (p == 2) throw Error(ErrorCode::WildEven, "residue characteristic 2 makes the wild degree even");
  const std::size_t r = job.options.count("r") ? u64_option(job, "r") : 1;
  if (r == 0 || r > 16) throw io::schema("/options/r", "must be in [1, 16]");
  const ResidueField field = ResidueField::canonical(p, r);
  TameExtDescriptor d;
  d.wild_exponent = job.options.count("wild") ? static_cast<unsigned>(u64_option(job, "wild")) : 0;
  d.f = u64_option(job, "f");
  d.e = u64_option(job, "e");
  if (d.f != 0 && d.f % 2 != 0 && d.f * d.e % 2 == 0 && d.e % p != 0) {
    const ResidueField ke = residue_extension(field, d.f);
    d.alpha = parse_residue(detail::option(job, "alpha"), ke, "/options/alpha");
  }
  QuadraticSubextension q = quadratic_subextension(d, field);
  Json res;
  res["class"] = std::string(square_class_name(q.square_class));
  if (q.beta) res["beta"] = field.to_string(*q.beta);
  res["residue_field_size"] = std::to_string(field.size());
  trace.insert(trace.end(), q.trace.begin(), q.trace.end());
  return res;
}

inline Json write_places(const GlobalData& d) {
  Json a = Json::array();
  for (const auto& p : d.places) {
    Json x;
    x["label"] = p.label;
    x["decomposition_members"] = io::write_indices(p.decomposition.members());
    a.push_back(x);
  }
  return a;
}

inline Json run_sha1(const Json& in, std::vector<std::string>& trace) {
  GlobalData d = io::read_global_data(in, "/input");
  PlaceModule pm = build_place_module(d);
  KernelResult s = sha1_S(d);
  KernelResult t = sha1_shapiro(d);
  Json r;
  r["points"] = std::to_string(pm.points());
  r["degree_zero_rank"] = std::to_string(pm.zero_part.rank());
  r["domain"] = io::write_group(s.domain);
  Json sj = io::write_group(s.kernel);
  Json gens = Json::array();
  for (const auto& k : s.kernel.generators()) gens.push_back(io::write_element(s.include(k)));
  sj["generators_in_domain"] = gens;
  r["sha1_S"] = sj;
  r["sha1_shapiro"] = io::write_group(t.kernel);
  const bool agree = s.kernel.invariant_factors() == t.kernel.invariant_factors();
  r["descriptions_agree"] = agree;
  trace.push_back("build_place_module: " + std::to_string(pm.points()) + " points, degree-zero rank " +
                  std::to_string(pm.zero_part.rank()));
  trace.push_back("sha1_S: kernel of (M[S_F]_0)_{Theta,Tors} -> M[S_F]_{Theta,Tors}");
  trace.push_back("sha1_shapiro: kernel of (M[S_F]_0)_{Theta,Tors} -> sum of M_{Theta_v,Tors}");
  if (!agree) trace.push_back("the two descriptions DISAGREE on this instance");
  return r;
}

inline std::map<std::string, AbElement> read_local_classes(const GlobalData& d, const Json& in) {
  std::map<std::string, AbElement> out;
  const Json& lc = io::field(in, "local_classes", "/input");
  if (!lc.is_object()) throw io::schema("/input/local_classes", "expected an object keyed by place label");
  for (const auto& [label, value] : lc.items()) {
    const std::size_t v = d.place_index(label);
    out[label] = io::read_element(local_group(d, v), value, "/input/local_classes/" + label);
  }
  return out;
}

inline Json run_tate_obstruction(const Json& in, std::vector<std::string>& trace) {
  GlobalData d = io::read_global_data(in, "/input");
  auto classes = read_local_classes(d, in);
  GlobalClassResult g = tate_obstruction(d, classes);
  Json r;
  r["status"] = g.exists ? "EXISTS" : "OBSTRUCTED";
  r["obstruction"] = io::write_element(g.obstruction);
  r["global_group"] = io::write_group(torsion_subgroup(coinvariants(d.module)).group);
  Json contrib = Json::object();
  for (const auto& [label, mu] : g.contributions) contrib[label] = io::write_element(mu);
  r["contributions"] = contrib;
  if (g.exists) {
    Json loc = Json::object();
    for (const auto& [label, x] : g.local_classes) loc[label] = io::write_element(x);
    r["global_class_localizations"] = loc;
  }
  trace.push_back("local_group: M_{Theta_v,Tors} for each place");
  trace.push_back("tate_obstruction: sum of the natural projections into M_{Theta,Tors}");
  trace.push_back(g.exists ? "the sum vanishes, so a global class with these localizations exists"
                           : "the sum is nonzero, so no global class has these localizations");
  return r;
}

inline Json run_subgroup_bound(const Json& in, std::vector<std::string>& trace) {
  GroupPtr g = io::read_group(in.contains("group") ? in["group"] : in, in.contains("group") ? "/input/group" : "/input");
  SubgroupBound b = subgroup_bound_check(g);
  Json r;
  r["order"] = std::to_string(g->order());
  r["sub_count"] = std::to_string(b.count);
  r["lambda"] = std::to_string(b.lambda);
  r["bound"] = b.bound.str();
  r["holds"] = b.holds;
  trace.push_back("enumerate_subgroups: " + std::to_string(b.count) + " subgroups");
  trace.push_back("subgroup_bound_check: sub <= theta^lambda with lambda = floor(log2 theta)");
  if (!b.holds) throw Error(ErrorCode::BoundViolated, "subgroup count exceeds theta^lambda");
  return r;
}

inline Json run_exponents(const Job& job, std::vector<std::string>& trace) {
  const u64 t = u64_option(job, "theta-order");
  if (t == 0) throw io::schema("/options/theta-order", "must be positive");
  DegreeExponents e = degree_exponents(t);
  Json r;
  r["theta"] = std::to_string(t);
  r["lambda"] = std::to_string(e.lambda);
  r["r1"] = std::to_string(e.lambda + 1);
  r["rho"] = e.rho.str();
  r["d"] = e.d.str();
  trace.push_back("degree_exponents: lambda = floor(log2 theta), rho = (theta - 1) theta^lambda + 1, d = r1 + rho");
  return r;
}

inline Json write_power(const PowerOf& p) {
  Json j;
  j["base"] = std::to_string(p.base);
  j["exponent"] = p.exponent.str();
  return j;
}

// Input: a scenario plus {"tower": {"n", "r"?, "places": [{label,
// kernel_members, frobenius}]?, "alpha"?}}; option n overrides tower.n.
inline Json run_split_sim(const Job& job, const Json& in, std::vector<std::string>& trace) {
  GlobalData d = io::read_global_data(in, "/input");
  const Json tower = in.contains("tower") ? in["tower"] : Json::object();
  TowerConfig cfg{d, 0, std::nullopt, {}};
  if (job.options.count("n")) cfg.n = u64_option(job, "n");
  else cfg.n = io::read_size(io::field(tower, "n", "/input/tower"), "/input/tower/n");
  if (tower.contains("r")) cfg.r = io::read_size(tower["r"], "/input/tower/r");
  if (tower.contains("places")) {
    const Json& tp = tower["places"];
    if (!tp.is_array() || tp.size() != d.places.size()) throw io::schema("/input/tower/places", "expected one entry per place");
    for (std::size_t i = 0; i < tp.size(); ++i) {
      const std::string p = "/input/tower/places/" + std::to_string(i);
      const Json& label = io::field(tp[i], "label", p);
      if (!label.is_string() || label.get<std::string>() != d.places[i].label) throw io::schema(p + "/label", "must match the place order");
      Subgroup k = io::read_subgroup(d.theta, io::field(tp[i], "kernel_members", p), p + "/kernel_members");
      std::size_t f = io::read_size(io::field(tp[i], "frobenius", p), p + "/frobenius");
      if (f >= d.theta->order()) throw io::schema(p + "/frobenius", "out of range");
      cfg.tower_places.push_back({k, f});
    }
  }
  KernelResult sha = sha1_S(d);
  AbElement alpha = sha.kernel.zero();
  if (tower.contains("alpha")) alpha = io::read_element(sha.kernel, tower["alpha"], "/input/tower/alpha");
  else if (!sha.kernel.is_trivial()) alpha = sha.kernel.generator(0);
  SimulationReport rep = simulate_splitting_tower(cfg, alpha);
  Json r;
  r["n"] = std::to_string(cfg.n);
  r["r"] = std::to_string(rep.r);
  r["alpha_S"] = io::write_element(alpha);
  r["sha1_S"] = io::write_group(sha.kernel);
  r["chosen_s"] = std::to_string(rep.chosen_s);
  r["cardinality_sequence"] = io::write_indices(rep.cardinalities);
  r["cardinality_bounds"] = io::write_indices({rep.lower_bound, rep.upper_bound});
  Json at = Json::array();
  for (const auto& c : rep.alpha_trace) {
    Json x;
    x["name"] = c.name;
    x["group_invariants"] = io::write_vector(c.invariants);
    x["value"] = io::write_element(c.value);
    at.push_back(x);
  }
  r["alpha_trace"] = at;
  r["isomorphism_certified"] = rep.isomorphism_certified;
  r["transitivity_holds"] = rep.transitivity_holds;
  r["images_coincide"] = rep.images_coincide;
  r["transfer_is_multiplication_by_n"] = rep.transfer_is_multiplication;
  r["transfer_vanished"] = rep.transfer_vanished;
  r["splitting_degree"] = write_power(rep.splitting_degree);
  r["bound"] = write_power(rep.bound);
  trace.insert(trace.end(), rep.trace.begin(), rep.trace.end());
  trace.push_back("interpretation: the injections into (M[V_{FL_s}]_0)-coinvariants carry T_{1,s}(alpha_1) = 0 to Res(xi) = 1");
  return r;
}

}  // namespace detail

// Runs a validated job; module errors propagate with the command as context.
inline Report run_job(const Job& job, const RunContext& ctx = {}) {
  const detail::CommandSpec* spec = detail::find_command(job.command);
  if (!spec) throw io::schema("/command", "unknown command '" + job.command + "'");
  io::Json input = detail::resolve_input(job, ctx);
  if (spec->needs_input && !input.is_object()) throw io::schema("/input", "expected an object");
  std::vector<std::string> trace;
  io::Json result;
  try {
    const std::string& c = job.command;
    if (c == "snf") result = detail::run_snf(input, trace);
    else if (c == "tate") result = detail::run_tate(input, trace);
    else if (c == "transfer") result = detail::run_transfer(input, trace);
    else if (c == "counterexample-local") result = detail::run_counterexample(job, trace);
    else if (c == "teichmuller") result = detail::run_teichmuller(job, ctx, trace);
    else if (c == "quad-sub") result = detail::run_quad_sub(job, trace);
    else if (c == "sha1") result = detail::run_sha1(input, trace);
    else if (c == "tate-obstruction") result = detail::run_tate_obstruction(input, trace);
    else if (c == "subgroup-bound") result = detail::run_subgroup_bound(input, trace);
    else if (c == "exponents") result = detail::run_exponents(job, trace);
    else if (c == "split-sim") result = detail::run_split_sim(job, input, trace);
  } catch (const Error& e) {
    throw Error(e.code(), job.command + ": " + e.message());
  }
  if (!ctx.verbose)
    for (const char* bulky : {"U", "V", "iterates"}) result.erase(bulky);

  io::Json digest_src;
  digest_src["command"] = job.command;
  digest_src["input"] = input;
  digest_src["options"] = job.options;
  Report rep;
  rep.document["command"] = job.command;
  rep.document["inputs_digest"] = "sha256:" + detail::sha256_hex(digest_src.dump());
  rep.document["result"] = std::move(result);
  rep.document["trace"] = trace;
  rep.document["version"] = kVersion;
  return rep;
}

inline int exit_code_for(const Error& e) { return is_theorem_violation(e.code()) ? 2 : 1; }

}  // namespace tatekit
