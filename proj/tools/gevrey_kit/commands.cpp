#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gevrey/gevrey.hpp>

namespace gevrey_kit {

using namespace gevrey;
using cd = std::complex<double>;

namespace {

constexpr const char* kVersion = "0.1.0";

double parse_real(std::string_view s, const std::string& whole) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("cannot parse number '" + whole + "'");
  return v;
}

bool is_builtin_riccati(const RunConfig& cfg) { return cfg.builtin && *cfg.builtin == "riccati"; }

ProblemSpec<double> load(const RunConfig& cfg) {
  if (cfg.problem_path && cfg.builtin) throw UsageError("give either --problem or --builtin, not both");
  if (cfg.builtin) {
    if (*cfg.builtin != "riccati") throw UsageError("unknown builtin problem '" + *cfg.builtin + "'");
    return builtin_riccati<double>();
  }
  if (cfg.problem_path) return load_problem(*cfg.problem_path);
  throw UsageError("a problem is required: --problem FILE or --builtin riccati");
}

std::vector<cd> or_default(const std::vector<cd>& v, std::initializer_list<double> d) {
  if (!v.empty()) return v;
  std::vector<cd> out;
  for (double x : d) out.emplace_back(x);
  return out;
}

int positive(std::optional<int> v, int fallback, const char* name) {
  const int x = v.value_or(fallback);
  if (x < 1) throw UsageError(std::string("--") + name + " must be >= 1");
  return x;
}

/// The Bessel reference covers real eps in (0, 2] and real z in (0, 4].
bool reference_available(const RunConfig& cfg, cd eps, cd z) {
  return is_builtin_riccati(cfg) && eps.imag() == 0.0 && z.imag() == 0.0 && eps.real() > 0.0 &&
         eps.real() <= 2.0 && z.real() > 0.0 && z.real() <= 4.0;
}

template <class Real>
Real reference_value(cd eps, cd z) {
  return shifted_reference<Real>(Real(eps.real()), Real(z.real()));
}

json radii_json(const ProblemSpec<double>& p, const RunConfig& cfg, std::optional<TailParams>* tail) {
  json out;
  try {
    const auto rep = spectrum_report(p, cfg.theta);
    const double gamma = cfg.gamma.value_or(std::min(0.9 * rep.gamma_max, 2.0 * std::numbers::pi));
    if (!(gamma > 0.0)) throw Error(ErrorCode::sector_too_wide, "no admissible opening at this direction");
    const SectorSpec sector{cfg.theta, gamma, cfg.E};
    const auto c = resolvent_bound(p, sector, 50, 64);
    const auto r = radius_estimates(p, c.c, std::nullopt, sector);
    out = {{"feasible", true}, {"gamma", gamma}, {"c", c.c}, {"alpha", r.alpha},
           {"kappa", r.kappa}, {"sigma", r.sigma}, {"limiting_block", {r.limiting_n, r.limiting_m}}};
    if (tail) *tail = TailParams{r.alpha, r.kappa, kConvTamingA};
  } catch (const RadiiInfeasibleError& e) {
    out = {{"feasible", false}, {"code", to_string(e.code())}, {"message", e.what()},
           {"limiting_block", {e.limiting_block().first, e.limiting_block().second}}, {"alpha", e.alpha()}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::sector_too_wide && e.code() != ErrorCode::degenerate_spectrum) throw;
    out = {{"feasible", false}, {"code", to_string(e.code())}, {"message", e.what()}};
  }
  return out;
}

Outcome check_sector(const RunConfig& cfg) {
  const auto p = load(cfg);
  p.validate();
  const auto rep = spectrum_report(p, cfg.theta);
  json ev = json::array();
  for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j)
    ev.push_back({{"value", complex_json(rep.eigenvalues[j])}, {"arg", rep.args[j]},
                  {"distance", wrapped_angle_distance(rep.args[j], cfg.theta)}});
  json data = {{"theta", cfg.theta}, {"eigenvalues", ev}, {"gamma_max", rep.gamma_max}, {"summable", rep.summable}};
  if (cfg.gamma) {
    const auto s = check_siegel(rep.eigenvalues, cfg.theta, *cfg.gamma);
    data["sector"] = {{"gamma", *cfg.gamma}, {"E", cfg.E}, {"admissible", s.ok}, {"margins", s.margins}};
    if (s.ok) {
      const int k_max = positive(cfg.K, 50, "K");
      const auto c = resolvent_bound(p, SectorSpec{cfg.theta, *cfg.gamma, cfg.E}, k_max, 64);
      data["sector"]["resolvent"] = {{"c", c.c}, {"k_max", c.k_max}, {"samples", c.samples},
                                     {"worst_eps", complex_json(c.worst_eps)}, {"worst_k", c.worst_k}};
    }
  }
  data["radii"] = radii_json(p, cfg, nullptr);
  Outcome out;
  out.report = {{"meta", meta_block(cfg)}, {"verdict", rep.summable ? "summable" : "not_summable"}, {"data", data}};
  Csv t{{"index", "re", "im", "arg", "distance", "gamma_max", "summable"}, {}};
  for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j)
    t.rows.push_back({std::to_string(j), cell(rep.eigenvalues[j].real()), cell(rep.eigenvalues[j].imag()),
                      cell(rep.args[j]), cell(wrapped_angle_distance(rep.args[j], cfg.theta)), cell(rep.gamma_max),
                      rep.summable ? "true" : "false"});
  out.tables.push_back(std::move(t));
  out.exit_code = rep.summable ? kOk : kNegative;
  return out;
}

template <class Real>
Outcome solve(const RunConfig& cfg) {
  const auto base = load(cfg);
  base.validate();
  const auto p = base.template cast<Real>();
  const int K = positive(cfg.K, 60, "K");
  const auto eps_list = or_default(cfg.eps, {0.1});
  const auto z_list = or_default(cfg.z, {0.05});
  std::optional<TailParams> tail;
  json data = {{"K", K}, {"radii", radii_json(base, cfg, &tail)}, {"points", json::array()}};
  Csv t{{"eps_re", "eps_im", "z_re", "z_im", "component", "value_re", "value_im", "ode_residual", "tail_bound",
         "tail_valid", "reference_error"},
        {}};
  for (const auto& e : eps_list) {
    const auto sol = solve_coeffs_z(p, complex_cast<Real>(e), K, tail);
    double rec = 0.0;
    for (double r : sol.residuals) rec = std::max(rec, r);
    for (const auto& z : z_list) {
      const auto zr = complex_cast<Real>(z);
      const auto v = evaluate_f(sol, zr);
      const double az = std::abs(z);
      const auto grid = az > 0.0 ? disc_grid<Real>(az, 4, 32) : std::vector<Complex<Real>>{zr};
      const double res = ode_residual_z(p, sol, grid);
      json row = {{"eps", complex_json(e)}, {"z", complex_json(z)}, {"value", vector_json(v.value)},
                  {"ode_residual_disc", res}, {"recursion_residual", rec},
                  {"tail_bound", v.tail_valid ? number(v.tail_bound) : json(nullptr)}, {"tail_valid", v.tail_valid}};
      std::optional<double> ref_err;
      if (reference_available(cfg, e, z)) {
        const Real ref = reference_value<Real>(e, z);
        ref_err = to_double(magnitude(v.value[0] - Complex<Real>(ref)));
        row["reference"] = to_double(ref);
        row["reference_error"] = *ref_err;
      }
      data["points"].push_back(row);
      for (std::size_t c = 0; c < v.value.size(); ++c) {
        const auto x = to_double(v.value[c]);
        t.rows.push_back({cell(e.real()), cell(e.imag()), cell(z.real()), cell(z.imag()), std::to_string(c),
                          cell(x.real()), cell(x.imag()), cell(res), v.tail_valid ? cell(v.tail_bound) : "",
                          v.tail_valid ? "true" : "false", ref_err ? cell(*ref_err) : ""});
      }
    }
  }
  if (cfg.I) {
    const int I = positive(cfg.I, 0, "I");
    const int Kz = positive(cfg.Kz, 60, "Kz");
    const auto es = solve_eps(p, I, Kz);
    json coeffs = json::array();
    for (const auto& z : z_list) {
      const auto a = evaluate_coefficients(es, complex_cast<Real>(z));
      json col = json::array();
      for (const auto& ai : a) col.push_back(vector_json(ai));
      coeffs.push_back({{"z", complex_json(z)}, {"a", col}});
    }
    data["eps_expansion"] = {{"I", I}, {"Kz", Kz}, {"residuals", es.residuals}, {"coefficients", coeffs}};
  }
  Outcome out;
  out.report = {{"meta", meta_block(cfg)}, {"verdict", "solved"}, {"data", data}};
  out.tables.push_back(std::move(t));
  return out;
}

template <class Real>
LaplaceOptions laplace_options(const RunConfig& cfg) {
  LaplaceOptions opt;
  opt.theta = cfg.theta;
  if constexpr (!std::is_same_v<Real, double>) {
    opt.eta = 1e-32;
    opt.abs_tol = 1e-28;
    opt.rel_tol = 1e-26;
  }
  return opt;
}

template <class Real>
Outcome resum(const RunConfig& cfg) {
  const auto base = load(cfg);
  base.validate();
  const auto p = base.template cast<Real>();
  const int I = positive(cfg.I, 30, "I");
  const int Kz = positive(cfg.Kz, 60, "Kz");
  if (I < 4) throw Error(ErrorCode::insufficient_data, "Borel-Pade needs I >= 4");
  const int L = (I - 1) / 2;
  const int M = I - 1 - L;
  const auto eps_list = or_default(cfg.eps, {0.1});
  const auto z_list = or_default(cfg.z, {0.05});
  const auto opt = laplace_options<Real>(cfg);
  const auto sol = solve_eps(p, I, Kz);
  json rows = json::array();
  Csv t{{"eps_re", "eps_im", "z_re", "z_im", "status", "value_re", "value_im", "quadrature_error", "pole_clearance",
         "truncation_value_re", "I_star", "reference_error", "truncation_error"},
        {}};
  bool obstructed = false;
  for (const auto& z : z_list) {
    const auto a = evaluate_coefficients(sol, complex_cast<Real>(z));
    for (const auto& e : eps_list) {
      const auto er = complex_cast<Real>(e);
      json row = {{"eps", complex_json(e)}, {"z", complex_json(z)}, {"I", I}, {"pade", {L, M}}};
      const auto trunc = optimal_truncation_sum<Real>(a, er);
      row["optimal_truncation"] = {{"value", vector_json(trunc.value)}, {"I_star", trunc.I_star}};
      std::optional<Real> ref;
      if (reference_available(cfg, e, z)) ref = reference_value<Real>(e, z);
      std::vector<std::string> csv{cell(e.real()), cell(e.imag()), cell(z.real()), cell(z.imag())};
      std::optional<double> trunc_err;
      if (ref) trunc_err = to_double(magnitude(trunc.value[0] - Complex<Real>(*ref)));
      try {
        const auto r = borel_pade_laplace<Real>(a, er, L, M, opt);
        row["status"] = "summed";
        row["borel"] = {{"value", vector_json(r.value)},
                        {"method", r.method},
                        {"quadrature_error_estimate", number(r.quadrature_error_estimate)},
                        {"tail_bound", number(r.tail_bound)},
                        {"pole_clearance", number(r.pole_clearance)},
                        {"t_max", r.t_max},
                        {"panels", r.panels},
                        {"L", r.L},
                        {"M", r.M},
                        {"fallback", r.fallback},
                        {"spurious_poles", r.spurious_poles}};
        std::optional<double> err;
        if (ref) {
          err = to_double(magnitude(r.value[0] - Complex<Real>(*ref)));
          row["reference"] = to_double(*ref);
          row["reference_error"] = *err;
          row["truncation_error"] = *trunc_err;
        }
        const auto v = to_double(r.value[0]);
        csv.insert(csv.end(), {"summed", cell(v.real()), cell(v.imag()), cell(r.quadrature_error_estimate),
                               cell(r.pole_clearance)});
        csv.insert(csv.end(), {cell(to_double(trunc.value[0]).real()), std::to_string(trunc.I_star),
                               err ? cell(*err) : "", trunc_err ? cell(*trunc_err) : ""});
      } catch (const PoleObstructionError& ex) {
        obstructed = true;
        row["status"] = "pole_obstruction";
        row["obstruction"] = {{"pole", complex_json(ex.pole())}, {"clearance", ex.clearance()}, {"message", ex.what()}};
        csv.insert(csv.end(), {"pole_obstruction", "", "", "", cell(ex.clearance()),
                               cell(to_double(trunc.value[0]).real()), std::to_string(trunc.I_star), "",
                               trunc_err ? cell(*trunc_err) : ""});
      }
      rows.push_back(row);
      t.rows.push_back(std::move(csv));
    }
  }
  Outcome out;
  json data = {{"I", I}, {"Kz", Kz}, {"theta", cfg.theta}, {"points", rows}};
  out.report = {{"meta", meta_block(cfg)}, {"verdict", obstructed ? "pole_obstruction" : "summed"}, {"data", data}};
  out.tables.push_back(std::move(t));
  out.exit_code = obstructed ? kNegative : kOk;
  return out;
}

std::vector<double> read_norms(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::domain, "cannot open norms file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  std::vector<double> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const auto doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) throw Error(ErrorCode::schema, "norms file is not a JSON array");
    for (const auto& x : doc) {
      if (!x.is_number()) throw Error(ErrorCode::schema, "norms must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::string tok;
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) out.push_back(parse_real(tok, tok));
      tok.clear();
    } else {
      tok += ch;
    }
  }
  if (!tok.empty()) out.push_back(parse_real(tok, tok));
  return out;
}

json fit_json(const GevreyFit& f) {
  return {{"C", number(f.C)}, {"mu", number(f.mu)}, {"r2", number(f.r2)}, {"C_fit", number(f.C_fit)},
          {"i_min", f.i_min}, {"bound_holds", f.bound_holds}};
}

Csv fit_table(const std::vector<double>& norms) {
  Csv t{{"i", "norm", "log_norm_minus_log_factorial"}, {}};
  for (std::size_t i = 0; i < norms.size(); ++i)
    t.rows.push_back({std::to_string(i), cell(norms[i]), cell(std::log(norms[i]) - std::lgamma(i + 1.0))});
  return t;
}

bool certified(const GevreyFit& f) { return std::isfinite(f.mu) && f.mu > 0.0 && f.r2 > 0.99 && f.bound_holds; }

template <class Real>
Outcome diagnose(const RunConfig& cfg) {
  Outcome out;
  json data;
  if (cfg.norms_path) {
    const auto norms = read_norms(*cfg.norms_path);
    const auto fit = gevrey_fit(norms);
    data = {{"source", "norms_file"}, {"norms", norms}, {"fit", fit_json(fit)}};
    out.report = {{"meta", meta_block(cfg)}, {"verdict", certified(fit) ? "gevrey1_certified" : "not_certified"},
                  {"data", data}};
    out.tables.push_back(fit_table(norms));
    out.exit_code = certified(fit) ? kOk : kNegative;
    return out;
  }
  const auto base = load(cfg);
  base.validate();
  const auto p = base.template cast<Real>();
  const int I = positive(cfg.I, 30, "I");
  const int Kz = positive(cfg.Kz, 60, "Kz");
  const auto z_list = or_default(cfg.z, {0.05});
  const auto eps_list = or_default(cfg.eps, {0.1});
  if (cfg.format == "csv" && eps_list.size() > 1)
    throw UsageError("CSV output of diagnose takes a single --eps (one remainder table)");
  const cd z = z_list.front();
  const double sigma = std::abs(z);
  if (!(sigma > 0.0)) throw UsageError("diagnose needs a nonzero --z (the disc radius for the sup norms)");
  const auto sol = solve_eps(p, I, Kz);
  std::vector<double> norms;
  for (const auto& a : sol.a) norms.push_back(sup_norm_disc(a, sigma));
  const auto fit = gevrey_fit(norms);
  const auto a = evaluate_coefficients(sol, complex_cast<Real>(z));
  json profiles = json::array();
  Csv rem{{"I", "abs_rI", "abs_rI_epsI"}, {}};
  for (const auto& e : eps_list) {
    const auto er = complex_cast<Real>(e);
    CVector<Real> f;
    std::string source;
    if (reference_available(cfg, e, z)) {
      f = {Complex<Real>(reference_value<Real>(e, z))};
      source = "bessel_reference";
    } else {
      const int L = (I - 1) / 2;
      f = borel_pade_laplace<Real>(a, er, L, I - 1 - L, laplace_options<Real>(cfg)).value;
      source = "borel_pade_laplace";
    }
    const auto rp = remainder_profile<Real>(a, f, er);
    json abs_r = json::array(), abs_re = json::array();
    for (std::size_t i = 0; i < rp.abs_r.size(); ++i) {
      abs_r.push_back(number(rp.abs_r[i]));
      abs_re.push_back(number(rp.abs_r_eps[i]));
    }
    profiles.push_back({{"eps", complex_json(e)}, {"reference_source", source}, {"I_star", rp.I_star},
                        {"I_star_raw", rp.I_star_raw}, {"window", rp.window}, {"finite", rp.finite},
                        {"abs_rI", abs_r}, {"abs_rI_epsI", abs_re}});
    if (rem.rows.empty())
      for (std::size_t i = 0; i < rp.abs_r.size(); ++i)
        rem.rows.push_back({std::to_string(i), cell(rp.abs_r[i]), cell(rp.abs_r_eps[i])});
  }
  data = {{"source", "solver"}, {"I", I}, {"Kz", Kz}, {"sigma", sigma}, {"z", complex_json(z)},
          {"norms", norms}, {"fit", fit_json(fit)}, {"remainder", profiles}};
  out.report = {{"meta", meta_block(cfg)}, {"verdict", certified(fit) ? "gevrey1_certified" : "not_certified"},
                {"data", data}};
  out.tables.push_back(fit_table(norms));
  out.tables.push_back(std::move(rem));
  out.exit_code = certified(fit) ? kOk : kNegative;
  return out;
}

Outcome validate_riccati(const RunConfig& cfg) {
  if (cfg.problem_path || (cfg.builtin && *cfg.builtin != "riccati"))
    throw UsageError("validate-riccati works on the builtin Riccati problem only");
  const int K = positive(cfg.K, 60, "K");
  const auto eps_list = or_default(cfg.eps, {0.5, 0.2, 0.1, 0.05});
  const auto z_list = or_default(cfg.z, {0.01, 0.05, 0.1, 0.5, 1.0});
  for (const auto& x : eps_list)
    if (x.imag() != 0.0) throw UsageError("validate-riccati takes real eps values");
  for (const auto& x : z_list)
    if (x.imag() != 0.0) throw UsageError("validate-riccati takes real z values");
  const auto p = builtin_riccati<double>();
  json rows = json::array();
  Csv t{{"eps", "z", "phi_eps", "phi0", "ode_residual", "in_range", "series_error"}, {}};
  bool ok = true;
  bool monotone = true;
  for (const auto& zc : z_list) {
    const double z = zc.real();
    const double limit = phi0<double>(cd(z)).real();
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& ec : eps_list) {
      const double e = ec.real();
      const double v = phi_eps(e, z);
      const double res = riccati_reference_residual(e, z);
      const bool in_range = v < 0.0 && v > -0.5;
      const double d = std::abs(v - limit);
      if (d >= prev) monotone = false;
      prev = d;
      json row = {{"eps", e}, {"z", z}, {"phi_eps", v}, {"phi0", limit}, {"ode_residual", res},
                  {"in_range", in_range}};
      std::string series_cell;
      // The z-series converges for |z| < 1/4; compare well inside that disc.
      if (z <= 0.1) {
        const auto sol = solve_coeffs_z(p, cd(e), K);
        const double err = std::abs(evaluate_f(sol, cd(z)).value[0] - (v + 0.5));
        row["series_error"] = err;
        series_cell = cell(err);
        ok = ok && err <= 1e-8;
      }
      ok = ok && res <= 1e-9 && in_range;
      rows.push_back(row);
      t.rows.push_back({cell(e), cell(z), cell(v), cell(limit), cell(res), in_range ? "true" : "false", series_cell});
    }
  }
  ok = ok && monotone;
  json data = {{"K", K}, {"monotone_limit", monotone}, {"points", rows}};
  Outcome out;
  out.report = {{"meta", meta_block(cfg)}, {"verdict", ok ? "valid" : "invalid"}, {"data", data}};
  out.tables.push_back(std::move(t));
  out.exit_code = ok ? kOk : kNegative;
  return out;
}

template <class Real>
Outcome dispatch(const RunConfig& cfg) {
  if (cfg.command == "check-sector") return check_sector(cfg);
  if (cfg.command == "solve") return solve<Real>(cfg);
  if (cfg.command == "resum") return resum<Real>(cfg);
  if (cfg.command == "diagnose") return diagnose<Real>(cfg);
  if (cfg.command == "validate-riccati") return validate_riccati(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError("empty number");
  if (s.back() != 'i') return {parse_real(s, text), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) {
    const std::string im = s.empty() || s == "+" ? "1" : (s == "-" ? "-1" : s);
    return {0.0, parse_real(im, text)};
  }
  std::string im = s.substr(split);
  if (im == "+" || im == "-") im += "1";
  if (im.front() == '+') im.erase(0, 1);
  return {parse_real(s.substr(0, split), text), parse_real(im, text)};
}

std::vector<std::complex<double>> parse_list(const std::string& text) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

json meta_block(const RunConfig& cfg) {
  json config = {{"theta", cfg.theta}, {"E", cfg.E}, {"format", cfg.format}};
  if (cfg.gamma) config["gamma"] = *cfg.gamma;
  if (cfg.K) config["K"] = *cfg.K;
  if (cfg.Kz) config["Kz"] = *cfg.Kz;
  if (cfg.I) config["I"] = *cfg.I;
  if (!cfg.eps.empty()) {
    config["eps"] = json::array();
    for (const auto& e : cfg.eps) config["eps"].push_back(complex_json(e));
  }
  if (!cfg.z.empty()) {
    config["z"] = json::array();
    for (const auto& z : cfg.z) config["z"].push_back(complex_json(z));
  }
  json meta = {{"tool", "gevrey-kit"}, {"version", kVersion}, {"command", cfg.command}, {"precision", cfg.precision}};
  if (cfg.builtin) meta["problem"] = "builtin:" + *cfg.builtin;
  else if (cfg.problem_path) meta["problem"] = *cfg.problem_path;
  else if (cfg.norms_path) meta["norms"] = *cfg.norms_path;
  meta["config"] = config;
  if (cfg.timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["generated_at"] = buf;
  }
  return meta;
}

Outcome run_command(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  if (cfg.precision == "double") return dispatch<double>(cfg);
#ifdef GEVREY_WITH_FLOAT128
  if (cfg.precision == "quad") return dispatch<quad>(cfg);
#endif
  throw UsageError("unsupported --precision '" + cfg.precision + "'");
}

json error_report(const RunConfig& cfg, const std::exception& e) {
  json err = {{"code", "internal"}, {"message", e.what()}};
  if (const auto* g = dynamic_cast<const Error*>(&e)) err["code"] = to_string(g->code());
  if (const auto* r = dynamic_cast<const ResonanceError*>(&e)) {
    err["k"] = r->k();
    err["eps"] = complex_json(r->eps());
  }
  if (const auto* r = dynamic_cast<const RadiiInfeasibleError*>(&e))
    err["limiting_block"] = {r->limiting_block().first, r->limiting_block().second};
  if (const auto* s = dynamic_cast<const SingularError*>(&e)) err["smallest_singular_value"] = s->smallest_singular_value();
  if (const auto* o = dynamic_cast<const PoleObstructionError*>(&e)) {
    err["pole"] = complex_json(o->pole());
    err["clearance"] = o->clearance();
  }
  return {{"meta", meta_block(cfg)}, {"verdict", "error"}, {"data", nullptr}, {"error", err}};
}

}  // namespace gevrey_kit
