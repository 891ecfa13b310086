#pragma once

// wpl-cli: JSON in (--in, default stdin), JSON out (--out, default stdout).
// Exit 0 when every check passes, 1 on a mathematical failure (diagnostics in the JSON),
// 2 on malformed input or usage.

#include "wpl/io.hpp"
#include "wpl/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace wpl::cli {

inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kMalformed = 2;

struct JobConfig {
  std::string command;
  std::string in = "-";
  std::string out = "-";
  std::uint64_t seed = 1;
  std::size_t count = 1;
  unsigned jobs = 1;
  int retries = 50;
  bool verbose = false;
};

/// A mathematical failure carrying its JSON diagnostics.
struct DomainFailure {
  io::Json body;
};

struct Outcome {
  io::Json body;
  int status = kOk;
};

namespace detail {

using io::Json;

inline Outcome report_outcome(const Report& r) { return {io::to_json(r), r.ok() ? kOk : kDomainFailure}; }

inline Report fail_with(const std::string& what) {
  Report r;
  r.fail(what);
  return r;
}

inline PatchedSheaf valid_sheaf(const Json& j) {
  PatchedSheaf S = io::sheaf_from_json(j);
  if (const Report r = check_sheaf(S); !r.ok()) throw DomainFailure{io::to_json(r)};
  return S;
}

/// {sheaf, zeta, section}
struct SectionInput {
  PatchedSheaf sheaf;
  ZetaData zeta;
  ConnectionSection section;
};

inline SectionInput section_input(const Json& in) {
  SectionInput s{valid_sheaf(io::detail::field(in, "sheaf")), io::zeta_from_json(io::detail::field(in, "zeta")),
                 io::section_from_json(io::detail::field(in, "section"))};
  s.zeta.check_shape(s.sheaf.weights);
  return s;
}

inline Json forms_to_json(const ConnectionForms& f) {
  Json charts = Json::array();
  for (const auto& m : f.chart_forms) charts.push_back(io::to_json(m));
  return Json{{"chart_forms", charts},
              {"connection", f.fuchsian ? io::to_json(*f.fuchsian) : Json(nullptr)},
              {"flags", io::flags_to_json(f.flags)}};
}

/// The star quiver of the zeta shape (one weight per zeta row).
inline StarQuiver star_of(const ZetaData& z) { return star_quiver(z.weights()); }

inline std::vector<long> shift_vector(const Json& j, std::size_t k) {
  if (!j.is_array() || j.size() != k) throw io::ParseError("\"r\" must hold one integer per marked point");
  std::vector<long> r;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw io::ParseError("shift entries must be integers");
    r.push_back(x.get<long>());
  }
  return r;
}

inline Json suite_json(const suites::SuiteResult& r, bool verbose) {
  Json j{{"name", r.name},
         {"title", r.title},
         {"summary", std::to_string(r.passed) + "/" + std::to_string(r.total)},
         {"ok", r.ok()}};
  if (verbose) j["seconds"] = r.seconds;
  if (!r.failures.empty()) j["failures"] = r.failures;
  return j;
}

// ---- commands ----

inline Outcome check_sheaf_cmd(const Json& in, const JobConfig&) { return report_outcome(check_sheaf(io::sheaf_from_json(in))); }

inline Outcome flags_cmd(const Json& in, const JobConfig&) {
  return {Json{{"flags", io::flags_to_json(extract_flags(valid_sheaf(in)))}}};
}

inline Outcome shift_cmd(const Json& in, const JobConfig&) {
  const PatchedSheaf S = valid_sheaf(io::detail::field(in, "sheaf"));
  return {io::to_json(shift_sheaf(S, shift_vector(io::detail::field(in, "r"), S.weights.size())))};
}

inline Outcome twist_cmd(const Json& in, const JobConfig&) { return {io::to_json(twist_omega(valid_sheaf(in)))}; }

inline Outcome build_dzeta_cmd(const Json& in, const JobConfig&) {
  const PatchedSheaf S = valid_sheaf(io::detail::field(in, "sheaf"));
  const ZetaData z = io::zeta_from_json(io::detail::field(in, "zeta"));
  z.check_shape(S.weights);
  const NormalizedZeta nz = normalize_zeta(z);
  const DZetaSheaf D = build_dzeta(S, nz.zeta);
  const Report r = check_dzeta(S, nz.zeta, D);
  Json shift = Json::array();
  for (const auto& c : nz.shift) shift.push_back(io::scalar_to_json(c));
  return {Json{{"shift", shift}, {"zeta", io::to_json(nz.zeta)}, {"dzeta", io::to_json(D.sheaf)}, {"check", io::to_json(r)}},
          r.ok() ? kOk : kDomainFailure};
}

inline Outcome verify_section_cmd(const Json& in, const JobConfig&) {
  const SectionInput s = section_input(in);
  return report_outcome(verify_section(s.sheaf, s.zeta, s.section));
}

inline Outcome section2conn_cmd(const Json& in, const JobConfig&) {
  const SectionInput s = section_input(in);
  if (const Report r = verify_section(s.sheaf, s.zeta, s.section); !r.ok()) throw DomainFailure{io::to_json(r)};
  return {forms_to_json(section_to_connection(s.sheaf, s.zeta, s.section))};
}

inline Outcome conn2section_cmd(const Json& in, const JobConfig&) {
  const FuchsianTuple T = io::tuple_from_json(in);
  if (const Report r = T.check(); !r.ok()) throw DomainFailure{io::to_json(r)};
  const ConnectionSection sigma = connection_to_section(T.flags, T.weights, T.zeta, T.connection());
  return {Json{{"sheaf", io::to_json(parabolic_to_sheaf(T.rank, T.flags, T.weights))}, {"section", io::to_json(sigma)}}};
}

inline Outcome residue_tower_cmd(const Json& in, const JobConfig&) {
  const SectionInput s = section_input(in);
  if (const Report r = verify_section(s.sheaf, s.zeta, s.section); !r.ok()) throw DomainFailure{io::to_json(r)};
  const ResidueTower t = residue_tower(s.sheaf, s.zeta, s.section);
  Json charts = Json::array();
  for (std::size_t i = 0; i < t.charts.size(); ++i) {
    const auto& c = t.charts[i];
    Json R = Json::array();
    for (const auto& m : c.R) R.push_back(io::to_json(m));
    charts.push_back(Json{{"i", i},
                          {"residue", io::to_json(c.residue)},
                          {"R", R},
                          {"identities", io::to_json(c.identities)},
                          {"factorization", io::to_json(c.factorization)},
                          {"literal_intertwining", io::to_json(c.literal_intertwining)}});
  }
  return {Json{{"ok", t.ok()}, {"charts", charts}}, t.ok() ? kOk : kDomainFailure};
}

inline Outcome check_zeta_cmd(const Json& in, const JobConfig&) {
  const Report r = io::tuple_from_json(in).check();
  return {io::to_json(r), r.ok() ? kOk : kDomainFailure};
}

/// {weights:[{point,w}]} with optional rank and flag_dims, or a zeta/tuple (shape taken from it).
inline Outcome star_quiver_cmd(const Json& in, const JobConfig&) {
  WeightData W;
  if (in.contains("weights") && in.at("weights").is_array() && !in.at("weights").empty() && in.at("weights").at(0).is_object())
    W = io::weights_from_json(in.at("weights"));
  else if (in.contains("residues"))
    W = io::tuple_from_json(in).weights;
  else {
    const ZetaData z = io::zeta_from_json(in);
    W = z.weights();
  }
  const StarQuiver sq = star_quiver(W);
  Json out{{"quiver", io::to_json(sq.quiver)}};
  if (in.contains("rank")) {
    std::vector<std::vector<std::size_t>> fd;
    for (const auto& row : io::detail::array_field(in, "flag_dims")) {
      fd.emplace_back();
      for (const auto& d : row) fd.back().push_back(io::detail::to_size(d, "flag dimension"));
    }
    const DimVector d = star_dims(W, io::detail::to_size(in.at("rank"), "rank"), fd);
    out["dims"] = io::dims_to_json(sq.quiver, d);
    out["tits_form"] = tits_form(sq.quiver, d);
  }
  return {out};
}

inline Outcome zeta2lambda_cmd(const Json& in, const JobConfig&) {
  const ZetaData z = io::zeta_from_json(in);
  return {io::lambda_json(star_of(z).quiver, zeta_to_lambda(z))};
}

/// {quiver, rep, lambda}
inline Outcome moment_defect_cmd(const Json& in, const JobConfig&) {
  const Quiver Q = io::quiver_from_json(io::detail::field(in, "quiver"));
  const DoubledRep rep = io::rep_from_json(Q, io::detail::field(in, "rep"));
  const LambdaVec lambda = io::lambda_from_json(Q, io::detail::field(in, "lambda"));
  const auto defect = moment_defect(Q, rep, lambda);
  Json d = Json::object();
  for (std::size_t v = 0; v < Q.vertices.size(); ++v) d[Q.vertices[v]] = io::to_json(defect[v]);
  const bool zero = defect_is_zero(defect);
  return {Json{{"ok", zero}, {"defect", d}, {"trace_pairing", io::scalar_to_json(trace_pairing(lambda, rep.dims))}},
          zero ? kOk : kDomainFailure};
}

inline Outcome fuchs2rep_cmd(const Json& in, const JobConfig&) {
  const FuchsianTuple T = io::tuple_from_json(in);
  if (const Report r = T.check(); !r.ok()) throw DomainFailure{io::to_json(r)};
  const BridgeRep b = fuchs_to_rep(T);
  return {Json{{"quiver", io::to_json(b.star.quiver)},
               {"rep", io::to_json(b.star.quiver, b.rep)},
               {"lambda", io::lambda_json(b.star.quiver, b.lambda)}}};
}

/// {rep, zeta} with optional quiver and lambda (both default to those of the zeta shape).
inline Outcome rep2fuchs_cmd(const Json& in, const JobConfig&) {
  const ZetaData z = io::zeta_from_json(io::detail::field(in, "zeta"));
  const StarQuiver sq = star_of(z);
  if (in.contains("quiver") && !(io::quiver_from_json(in.at("quiver")) == sq.quiver))
    throw io::ParseError("quiver is not the star quiver of the zeta shape");
  const DoubledRep rep = io::rep_from_json(sq.quiver, io::detail::field(in, "rep"));
  const LambdaVec lambda = in.contains("lambda") ? io::lambda_from_json(sq.quiver, in.at("lambda")) : zeta_to_lambda(z);
  Report pre;
  pre.require(lambda == zeta_to_lambda(z), "lambda is not zeta_to_lambda(zeta)");
  pre.require(defect_is_zero(moment_defect(sq.quiver, rep, lambda)), "representation has nonzero moment defect");
  if (!pre.ok()) throw DomainFailure{io::to_json(pre)};
  return {io::to_json(rep_to_fuchs(sq, rep, lambda, z))};
}

inline Outcome gen_instance_cmd(const Json&, const JobConfig& cfg) {
  std::vector<Json> out(cfg.count);
  std::vector<std::string> errors(cfg.count);
  suites::run_indexed("gen", "", cfg.count, cfg.jobs, [&](std::size_t idx) {
    try {
      out[idx] = io::to_json(generate_instance(cfg.seed + idx, 4, 4, 4, cfg.retries));
    } catch (const std::runtime_error& e) {
      errors[idx] = e.what();
    }
    return Report{};
  });
  Report r;
  for (std::size_t i = 0; i < cfg.count; ++i)
    if (!errors[i].empty()) r.fail("seed " + std::to_string(cfg.seed + i) + ": " + errors[i]);
  if (!r.ok()) throw DomainFailure{io::to_json(r)};
  return {Json{{"instances", out}}};
}

inline Outcome selftest_cmd(const Json&, const JobConfig& cfg) {
  const suites::Options o{cfg.seed, cfg.count, cfg.jobs, cfg.retries};
  Json list = Json::array();
  bool all = true;
  for (const auto& r : suites::run_all(o)) {
    list.push_back(suite_json(r, cfg.verbose));
    all = all && r.ok();
  }
  return {Json{{"ok", all}, {"seed", cfg.seed}, {"count", cfg.count}, {"suites", list}}, all ? kOk : kDomainFailure};
}

using Handler = Outcome (*)(const Json&, const JobConfig&);

struct Command {
  Handler run;
  bool reads_input;
  const char* help;
};

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"check-sheaf", {check_sheaf_cmd, true, "PatchedSheaf -> report"}},
      {"flags", {flags_cmd, true, "PatchedSheaf -> flags at the marked points"}},
      {"shift", {shift_cmd, true, "{sheaf, r} -> shifted sheaf"}},
      {"twist-omega", {twist_cmd, true, "PatchedSheaf -> E(omega)"}},
      {"build-dzeta", {build_dzeta_cmd, true, "{sheaf, zeta} -> normalization shift, D_zeta and its check"}},
      {"verify-section", {verify_section_cmd, true, "{sheaf, zeta, section} -> report"}},
      {"section2conn", {section2conn_cmd, true, "{sheaf, zeta, section} -> connection forms"}},
      {"conn2section", {conn2section_cmd, true, "FuchsianTuple -> {sheaf, section}"}},
      {"residue-tower", {residue_tower_cmd, true, "{sheaf, zeta, section} -> residue tower"}},
      {"check-zeta", {check_zeta_cmd, true, "FuchsianTuple -> report"}},
      {"star-quiver", {star_quiver_cmd, true, "{weights[, rank, flag_dims]} -> quiver[, dims]"}},
      {"zeta2lambda", {zeta2lambda_cmd, true, "{points, zeta} -> lambda by vertex"}},
      {"moment-defect", {moment_defect_cmd, true, "{quiver, rep, lambda} -> defect by vertex"}},
      {"fuchs2rep", {fuchs2rep_cmd, true, "FuchsianTuple -> {quiver, rep, lambda}"}},
      {"rep2fuchs", {rep2fuchs_cmd, true, "{rep, zeta[, quiver, lambda]} -> FuchsianTuple"}},
      {"gen-instance", {gen_instance_cmd, false, "--seed --count --retries -> generated FuchsianTuples"}},
      {"selftest", {selftest_cmd, false, "--seed --count -> acceptance suites AC-1..AC-7"}},
  };
  return table;
}

inline Json read_input(const std::string& path, std::istream& stdin_stream) {
  std::stringstream buf;
  if (path == "-") {
    buf << stdin_stream.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw io::ParseError("cannot read " + path);
    buf << f.rdbuf();
  }
  return Json::parse(buf.str());
}

}  // namespace detail

/// Runs one command; returns the exit status.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  CLI::App app{"Exact computations with sheaves on weighted projective lines", "wpl-cli"};
  std::vector<std::string> names;
  std::string usage = "Commands:\n";
  for (const auto& [name, c] : detail::commands()) {
    names.push_back(name);
    usage += "  " + name + std::string(16 - std::min<std::size_t>(15, name.size()), ' ') + c.help + "\n";
  }
  app.footer(usage);
  app.add_option("command", cfg.command, "Command to run")->required()->check(CLI::IsMember(names));
  app.add_option("--in", cfg.in, "Input JSON file ('-' for stdin)");
  app.add_option("--out", cfg.out, "Output JSON file ('-' for stdout)");
  app.add_option("--seed", cfg.seed, "Seed for gen-instance and selftest");
  app.add_option("--count", cfg.count, "Number of instances")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  app.add_option("--jobs", cfg.jobs, "Worker threads for independent instances")->check(CLI::Range(1u, 1024u));
  app.add_option("--retries", cfg.retries, "Generator retry limit")->check(CLI::Range(1, 1000000));
  app.add_flag("--verbose", cfg.verbose, "Diagnostics and timings on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kMalformed;
  }

  const auto& cmd = detail::commands().at(cfg.command);
  if (cfg.command == "selftest" && app.count("--count") == 0) cfg.count = 25;
  Outcome result;
  try {
    const io::Json input = cmd.reads_input ? detail::read_input(cfg.in, in) : io::Json();
    result = cmd.run(input, cfg);
  } catch (const DomainFailure& f) {
    result = {f.body, kDomainFailure};
  } catch (const io::ParseError& e) {
    result = {io::Json{{"error", e.what()}}, kMalformed};
  } catch (const nlohmann::json::exception& e) {
    result = {io::Json{{"error", e.what()}}, kMalformed};
  } catch (const std::domain_error& e) {
    result = {io::to_json(detail::fail_with(e.what())), kDomainFailure};
  } catch (const std::invalid_argument& e) {
    result = {io::Json{{"error", e.what()}}, kMalformed};
  } catch (const std::exception& e) {
    result = {io::to_json(detail::fail_with(e.what())), kDomainFailure};
  }

  const std::string text = result.body.dump(2) + "\n";
  if (cfg.out == "-") {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "cannot write " << cfg.out << "\n";
      return kMalformed;
    }
    f << text;
  }
  if (cfg.verbose) {
    err << cfg.command << ": exit " << result.status << "\n";
    if (result.body.contains("suites"))
      for (const auto& s : result.body.at("suites"))
        err << "  " << s.at("name").get<std::string>() << " " << s.at("summary").get<std::string>() << " "
            << s.at("seconds").get<double>() << "s\n";
  }
  return result.status;
}

}  // namespace wpl::cli
