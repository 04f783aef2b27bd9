#include "asymgreen/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "asymgreen/exact.hpp"
#include "asymgreen/expansion.hpp"
#include "asymgreen/generators.hpp"
#include "asymgreen/oracle.hpp"
#include "asymgreen/parallel.hpp"
#include "asymgreen/remainder.hpp"
#include "asymgreen/validity.hpp"

namespace asymgreen {

using json = nlohmann::ordered_json;

namespace {

double to_double(std::string_view s) {
  if (s.empty() || s == "+") return 1;
  if (s == "-") return -1;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  const bool imag_unit = s.back() == 'i' || s.back() == 'j';
  if (!imag_unit) return {to_double(s), 0};
  s.pop_back();
  // split at the last sign that is not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) return {0, to_double(s)};
  return {to_double(std::string_view(s).substr(0, split)), to_double(std::string_view(s).substr(split))};
}

namespace {

struct RunConfig {
  // potential source
  std::string builtin_name, f_expr, V_expr, VS_expr, potential_file;
  double E0 = 0;
  // geometry and orders
  double x = 1, y = 0;
  double x1 = 0, x2 = 1;
  int N = 4;
  int order = 1;
  std::string basis = "native", kind = "s";
  std::string k_text;
  std::string regime = "auto";
  std::string ray = "real";
  double kmin = 1, kmax = 40;
  int nk = 100;
  std::string reference = "auto";
  std::string corrections = "auto";
  bool force = false;
  std::vector<double> t_values;
  double tmin = 0.05, tmax = 0.5;
  int nt = 10;
  // numerics
  double ode_tol = 0, tol = 0;
  std::string form = "auto";
  int threads = 0;
  // output
  std::string format = "auto", out_path, golden_path;
};

PotentialSpec load_spec(const RunConfig& c) {
  const int given = !c.builtin_name.empty() + !c.f_expr.empty() + !c.V_expr.empty() + !c.VS_expr.empty() +
                    !c.potential_file.empty();
  if (given != 1) throw std::invalid_argument("give exactly one of --builtin, --f, --V, --VS, --potential");
  if (!c.builtin_name.empty()) return builtin(c.builtin_name);
  if (!c.f_expr.empty()) return make_potential(PotentialMode::FGiven, c.f_expr, 0, "inline");
  if (!c.V_expr.empty()) return make_potential(PotentialMode::VGiven, c.V_expr, 0, "inline");
  if (!c.VS_expr.empty()) return make_potential(PotentialMode::VSGiven, c.VS_expr, c.E0, "inline");
  return load_potential_file(c.potential_file);
}

std::optional<Basis> basis_option(const std::string& b) {
  if (b == "f") return Basis::F;
  if (b == "vs") return Basis::VS;
  return std::nullopt;
}

ExpansionOptions expansion_options(const RunConfig& c, bool corrections_default) {
  ExpansionOptions o;
  o.basis = basis_option(c.basis);
  o.force = c.force;
  o.apply_corrections = c.corrections == "auto" ? corrections_default : c.corrections == "on";
  return o;
}

OracleConfig oracle_config(const RunConfig& c, OracleConfig base = {}) {
  if (c.ode_tol > 0) base.ode_tol = c.ode_tol;
  if (c.tol > 0) base.tol = c.tol;
  if (c.form == "S") base.form = RiccatiForm::S;
  if (c.form == "schrodinger") base.form = RiccatiForm::Schrodinger;
  if (c.form == "linear") base.form = RiccatiForm::Linear;
  return base;
}

std::optional<Regime> regime_option(const std::string& r) {
  if (r == "sector") return Regime::Sector;
  if (r == "half") return Regime::HalfPlane;
  if (r == "real") return Regime::RealAxis;
  return std::nullopt;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json potential_json(const PotentialSpec& s) {
  json j;
  j["name"] = s.name;
  j["mode"] = mode_name(s.mode);
  j["given"] = s.given.to_string();
  if (s.mode == PotentialMode::VSGiven) j["E0"] = s.e0;
  return j;
}

json corrections_json(const std::vector<Correction>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back({{"order", c.order}, {"value", c.value}, {"location", c.location}});
  return a;
}

json validity_json(const ValidityReport& v) {
  json j;
  for (const RegimeReport* r : {&v.sector, &v.half_plane, &v.real_axis}) {
    json e;
    e["cap"] = r->cap.to_string();
    e["corrections"] = corrections_json(r->corrections);
    e["notes"] = r->notes;
    j[regime_name(r->regime)] = e;
  }
  j["notes"] = v.notes;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> grid(double lo, double hi, int n) {
  if (n < 1 || hi < lo) throw std::invalid_argument("empty grid");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return g;
}

// ----------------------------------------------------------------- commands

std::string cmd_coeffs(const RunConfig& c, const std::string& format) {
  if (c.order < 1) throw std::invalid_argument("--order must be >= 1");
  const Basis b = basis_option(c.basis).value_or(Basis::F);
  const std::string n = std::to_string(c.order);
  std::vector<std::pair<std::string, std::string>> rows;
  const bool all = c.kind == "all";
  if ((c.kind == "c" || c.kind == "K") && b != Basis::F) throw std::invalid_argument("c and K exist in the f basis only");
  if (all || c.kind == "c") rows.emplace_back("c_tilde_" + n, gen_c_tilde(c.order).to_string());
  if (all || c.kind == "K") rows.emplace_back("K_" + n, gen_K(c.order).to_string());
  if (all || c.kind == "s") {
    if (b == Basis::VS && c.order == 1) {
      if (!all) throw std::invalid_argument("s_1 = -f has no V_S-basis form");
    } else {
      rows.emplace_back("s_" + n, gen_s(c.order, b).to_string());
    }
  }
  if (all || c.kind == "alpha") {
    if (c.order % 2 == 0)
      rows.emplace_back("alpha_" + n, gen_alpha(c.order, b).to_string());
    else if (!all)
      throw std::invalid_argument("alpha_n is generated for even n only");
  }
  if (format == "json") {
    json j;
    j["order"] = c.order;
    j["basis"] = basis_name(b);
    for (const auto& [k, v] : rows) j[k] = v;
    return j.dump(2) + "\n";
  }
  std::string out;
  for (const auto& [k, v] : rows) out += (all ? k + " = " : std::string()) + v + "\n";
  return out;
}

std::string cmd_expand(const RunConfig& c, const std::string& format) {
  const PotentialSpec spec = load_spec(c);
  const ExpansionSeries s = make_expansion(spec, c.x, c.y, c.N, expansion_options(c, true));
  json j;
  j["command"] = "expand";
  j["potential"] = potential_json(spec);
  j["x"] = c.x;
  j["y"] = c.y;
  j["N"] = c.N;
  j["basis"] = basis_name(s.basis);
  j["forced"] = s.forced;
  j["validity"] = validity_json(s.validity);
  j["corrections"] = corrections_json(s.corrections);
  std::optional<LogGResult> lg;
  if (!c.k_text.empty()) lg = logG_series(s, parse_complex(c.k_text), regime_option(c.regime));
  json orders = json::array();
  cplx partial = lg ? lg->terms[0] : cplx(0);
  for (int n = 1; n <= c.N; ++n) {
    json o;
    o["n"] = n;
    o["a"] = s.a[static_cast<std::size_t>(n)];
    o["a_corrected"] = s.coefficient(n);
    if (lg) {
      partial += lg->terms[static_cast<std::size_t>(n)];
      o["term"] = cplx_json(lg->terms[static_cast<std::size_t>(n)]);
      o["partial_logG"] = cplx_json(partial);
    }
    orders.push_back(o);
  }
  j["orders"] = orders;
  if (lg) {
    const cplx k = parse_complex(c.k_text);
    j["k"] = cplx_json(k);
    j["regime"] = regime_name(lg->regime);
    j["beyond_cap"] = lg->beyond_cap;
    j["logG"] = cplx_json(lg->log_G);
    j["G"] = cplx_json(G_series(s, k, regime_option(c.regime)));
    j["logGS"] = cplx_json(lg->log_GS);
    if (lg->log_GF) j["logGF"] = cplx_json(*lg->log_GF);
  }
  if (format == "text") {
    std::string out;
    for (const auto& o : j["orders"]) out += "a_" + std::to_string(o["n"].get<int>()) + " = " + fmt17(o["a_corrected"].get<double>()) + "\n";
    if (lg) out += "logG = " + fmt17(lg->log_G.real()) + (lg->log_G.imag() < 0 ? " - " : " + ") + fmt17(std::abs(lg->log_G.imag())) + "i\n";
    return out;
  }
  return j.dump(2) + "\n";
}

std::string cmd_compare(const RunConfig& c, const std::string& format, std::ostream& err) {
  const PotentialSpec spec = load_spec(c);
  RemainderOptions opt;
  opt.expansion = expansion_options(c, false);
  opt.expansion.force = true;
  opt.oracle = oracle_config(c, RemainderOptions::oracle_defaults());
  opt.reference = parse_reference(c.reference);
  opt.threads = c.threads;
  if (!c.builtin_name.empty()) opt.example = c.builtin_name;
  const Ray ray = Ray::parse(c.ray);
  const RemainderReport r = remainder_report(spec, c.x, c.y, c.N, ray, linear_moduli(c.kmin, c.kmax, c.nk), opt);
  int failed = 0;
  for (const auto& s : r.samples)
    if (!s.ok) {
      if (failed++ == 0) err << "warning: sample k = " << s.k << " failed: " << s.error << "\n";
    }
  if (failed > 1) err << "warning: " << failed << " samples failed\n";
  if (r.beyond_cap) err << "note: N = " << c.N << " lies beyond the " << regime_name(ray.regime()) << " validity cap\n";
  if (format == "json") {
    json j;
    j["command"] = "compare";
    j["potential"] = potential_json(spec);
    j["x"] = r.x;
    j["y"] = r.y;
    j["N"] = r.N;
    j["ray"] = ray.to_string();
    j["beyond_cap"] = r.beyond_cap;
    j["corrections"] = corrections_json(r.corrections);
    j["trend"] = trend_name(r.trend);
    j["slope"] = r.slope;
    j["limit"] = r.limit;
    json samples = json::array();
    for (const auto& s : r.samples) {
      json e;
      e["k"] = cplx_json(s.k);
      e["ok"] = s.ok;
      if (s.ok) {
        e["reference"] = reference_name(s.used);
        e["abs_kN_DeltaN"] = s.abs_kN_delta;
        e["Delta"] = cplx_json(s.delta);
      } else {
        e["error"] = s.error;
      }
      samples.push_back(e);
    }
    j["samples"] = samples;
    return j.dump(2) + "\n";
  }
  if (format == "text")
    return std::string("trend = ") + trend_name(r.trend) + "\nlimit = " + fmt17(r.limit) + "\nslope = " + fmt17(r.slope) + "\n";
  err << "trend = " << trend_name(r.trend) << ", limit = " << fmt17(r.limit) << "\n";
  return remainder_csv(r);
}

std::string cmd_shorttime(const RunConfig& c, const std::string& format) {
  const PotentialSpec spec = load_spec(c);
  const ShortTimeSeries s = make_shorttime(spec, c.x, c.y, c.N, expansion_options(c, true));
  const std::vector<double> ts = c.t_values.empty() ? grid(c.tmin, c.tmax, c.nt) : c.t_values;
  const bool has_exact = c.builtin_name == "ex1" || c.builtin_name == "ex2";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (format == "json") {
    json j;
    j["command"] = "shorttime";
    j["potential"] = potential_json(spec);
    j["x"] = c.x;
    j["y"] = c.y;
    j["N"] = c.N;
    j["policy"] = diagonal_policy_name(s.policy);
    j["g"] = s.g;
    json rows = json::array();
    for (double t : ts) {
      json r{{"t", t}, {"series", s.value(t)}};
      if (has_exact) r["exact"] = exact_GF_time(c.builtin_name, c.x, c.y, t);
      rows.push_back(r);
    }
    j["values"] = rows;
    return j.dump(2) + "\n";
  }
  std::string out = "t,series,exact\n";
  for (double t : ts)
    out += fmt17(t) + "," + fmt17(s.value(t)) + "," + fmt17(has_exact ? exact_GF_time(c.builtin_name, c.x, c.y, t) : nan) + "\n";
  return out;
}

std::string cmd_validity(const RunConfig& c, const std::string& format) {
  const PotentialSpec spec = load_spec(c);
  const ValidityReport v = classify_validity(spec, c.x, c.y);
  if (format == "json") {
    json j;
    j["command"] = "validity";
    j["potential"] = potential_json(spec);
    j["x"] = c.x;
    j["y"] = c.y;
    j["validity"] = validity_json(v);
    return j.dump(2) + "\n";
  }
  return v.to_string();
}

std::string cmd_scatter(const RunConfig& c, const std::string& format) {
  const PotentialSpec spec = load_spec(c);
  const Ray ray = Ray::parse(c.ray);
  const std::vector<double> moduli = linear_moduli(c.kmin, c.kmax, c.nk);
  const OracleConfig cfg = oracle_config(c);
  std::vector<ScatteringTriple> rows(moduli.size());
  parallel_for(moduli.size(), c.threads,
               [&](std::size_t i) { rows[i] = finite_scattering(c.x1, c.x2, ray.at(moduli[i]), spec, cfg); });
  if (format == "json") {
    json j;
    j["command"] = "scatter";
    j["potential"] = potential_json(spec);
    j["x1"] = c.x1;
    j["x2"] = c.x2;
    j["ray"] = ray.to_string();
    json a = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
      a.push_back({{"k", cplx_json(ray.at(moduli[i]))},
                   {"tau", cplx_json(rows[i].tau)},
                   {"R_r", cplx_json(rows[i].R_r)},
                   {"R_l", cplx_json(rows[i].R_l)}});
    j["samples"] = a;
    return j.dump(2) + "\n";
  }
  std::string out = "k_re,k_im,tau_re,tau_im,R_r_re,R_r_im,R_l_re,R_l_im\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const cplx k = ray.at(moduli[i]);
    for (double v : {k.real(), k.imag(), rows[i].tau.real(), rows[i].tau.imag(), rows[i].R_r.real(), rows[i].R_r.imag(),
                     rows[i].R_l.real(), rows[i].R_l.imag()})
      out += fmt17(v) + ",";
    out.back() = '\n';
  }
  return out;
}

void add_potential_options(CLI::App* sub, RunConfig& c) {
  auto* src = sub->add_option_group("potential", "potential source (exactly one)");
  src->add_option("--builtin", c.builtin_name, "builtin example ex1..ex8");
  src->add_option("--f", c.f_expr, "drift f(z)");
  src->add_option("--V", c.V_expr, "Fokker-Planck potential V(z)");
  src->add_option("--VS", c.VS_expr, "Schrodinger potential V_S(z)");
  src->add_option("--potential", c.potential_file, "potential file");
  sub->add_option("--E0", c.E0, "energy shift for --VS");
}

void add_output_options(CLI::App* sub, RunConfig& c, std::vector<std::string> formats) {
  formats.insert(formats.begin(), "auto");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats));
  sub->add_option("--out", c.out_path, "write to this file instead of stdout");
  sub->add_option("--golden", c.golden_path, "compare the output with this file; nonzero exit on any difference");
}

void add_oracle_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--ode-tol", c.ode_tol, "ODE local error tolerance");
  sub->add_option("--tol", c.tol, "convergence tolerance in the truncation length");
  sub->add_option("--form", c.form, "Riccati form")->check(CLI::IsMember({"auto", "S", "schrodinger", "linear"}));
  sub->add_option("--threads", c.threads, "threads (default: ASYMGREEN_THREADS, then OpenMP)");
}

int emit(const RunConfig& c, const std::string& text, std::ostream& out, std::ostream& err) {
  if (!c.golden_path.empty()) {
    std::ifstream in(c.golden_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read golden file " << c.golden_path << "\n";
      return kExitFailure;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string want = buf.str();
    if (want == text) {
      err << "golden: match\n";
      return kExitOk;
    }
    std::size_t line = 1, i = 0;
    while (i < want.size() && i < text.size() && want[i] == text[i]) line += want[i++] == '\n';
    err << "golden: differs from " << c.golden_path << " at line " << line << "\n";
    return kExitFailure;
  }
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::binary);
    f << text;
    if (!f) {
      err << "error: cannot write " << c.out_path << "\n";
      return kExitFailure;
    }
    return kExitOk;
  }
  out << text;
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string_view>& argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"High-energy 1/k expansion of one-dimensional Green functions", "asymgreen"};
  app.set_config("--config", "", "key = value file; options of a subcommand go under [subcommand]");
  app.require_subcommand(1);

  auto* coeffs = app.add_subcommand("coeffs", "print canonical s_n, c~_n, K_n, alpha_n");
  coeffs->add_option("--order", c.order, "n")->required();
  coeffs->add_option("--basis", c.basis, "f or vs")->check(CLI::IsMember({"native", "f", "vs"}));
  coeffs->add_option("--kind", c.kind, "s, alpha, c, K or all")->check(CLI::IsMember({"s", "alpha", "c", "K", "all"}));
  add_output_options(coeffs, c, {"text", "json"});

  auto* expand = app.add_subcommand("expand", "coefficients a_n and, with --k, the log G partial sums");
  add_potential_options(expand, c);
  expand->add_option("--x", c.x)->required();
  expand->add_option("--y", c.y)->required();
  expand->add_option("--N", c.N, "order");
  expand->add_option("--k", c.k_text, "complex k, e.g. 2+1i");
  expand->add_option("--regime", c.regime)->check(CLI::IsMember({"auto", "sector", "half", "real"}));
  expand->add_option("--basis", c.basis)->check(CLI::IsMember({"native", "f", "vs"}));
  expand->add_option("--corrections", c.corrections, "jump corrections (default on)")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  expand->add_flag("--force", c.force, "allow orders beyond the validity cap");
  add_output_options(expand, c, {"json", "text"});

  auto* compare = app.add_subcommand("compare", "remainder |k^N Delta_N| along a ray of k");
  add_potential_options(compare, c);
  compare->add_option("--x", c.x)->required();
  compare->add_option("--y", c.y)->required();
  compare->add_option("--N", c.N, "order");
  compare->add_option("--ray", c.ray, "real, sector:<theta> or imline:<b>");
  compare->add_option("--kmin", c.kmin);
  compare->add_option("--kmax", c.kmax);
  compare->add_option("--nk", c.nk, "number of |k| samples");
  compare->add_option("--reference", c.reference)->check(CLI::IsMember({"auto", "oracle", "exact"}));
  compare->add_option("--basis", c.basis)->check(CLI::IsMember({"native", "f", "vs"}));
  compare->add_option("--corrections", c.corrections, "jump corrections (default off)")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  add_oracle_options(compare, c);
  add_output_options(compare, c, {"csv", "json", "text"});

  auto* shorttime = app.add_subcommand("shorttime", "short-time series of G_F(x, y; t)");
  add_potential_options(shorttime, c);
  shorttime->add_option("--x", c.x)->required();
  shorttime->add_option("--y", c.y)->required();
  shorttime->add_option("--N", c.N, "order");
  shorttime->add_option("--t", c.t_values, "explicit times");
  shorttime->add_option("--tmin", c.tmin);
  shorttime->add_option("--tmax", c.tmax);
  shorttime->add_option("--nt", c.nt);
  shorttime->add_flag("--force", c.force, "allow orders beyond the validity cap");
  add_output_options(shorttime, c, {"csv", "json"});

  auto* validity = app.add_subcommand("validity", "validity caps per k-regime");
  add_potential_options(validity, c);
  validity->add_option("--x", c.x)->required();
  validity->add_option("--y", c.y)->required();
  add_output_options(validity, c, {"text", "json"});

  auto* scatter = app.add_subcommand("scatter", "tau, R_r, R_l of a finite interval along a ray of k");
  add_potential_options(scatter, c);
  scatter->add_option("--x1", c.x1)->required();
  scatter->add_option("--x2", c.x2)->required();
  scatter->add_option("--ray", c.ray, "real, sector:<theta> or imline:<b>");
  scatter->add_option("--kmin", c.kmin);
  scatter->add_option("--kmax", c.kmax);
  scatter->add_option("--nk", c.nk);
  add_oracle_options(scatter, c);
  add_output_options(scatter, c, {"csv", "json"});

  std::vector<std::string> args;
  for (std::size_t i = argv.size(); i-- > 1;) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto fmt = [&](const char* dflt) { return c.format == "auto" ? std::string(dflt) : c.format; };
  try {
    std::string text;
    if (coeffs->parsed()) text = cmd_coeffs(c, fmt("text"));
    else if (expand->parsed()) text = cmd_expand(c, fmt("json"));
    else if (compare->parsed()) text = cmd_compare(c, fmt("csv"), err);
    else if (shorttime->parsed()) text = cmd_shorttime(c, fmt("csv"));
    else if (validity->parsed()) text = cmd_validity(c, fmt("text"));
    else text = cmd_scatter(c, fmt("csv"));
    return emit(c, text, out, err);
  } catch (const OracleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const CapError& e) {
    err << "error: " << e.what() << " (use --force)\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PotentialError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace asymgreen
