#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "sponge/error.hpp"
#include "sponge/examples.hpp"
#include "sponge/oracle.hpp"
#include "sponge/pressure.hpp"
#include "sponge/scene.hpp"

using namespace sponge;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kParse = 2, kBudget = 3 };

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// 12 significant digits in JSON too
json jnum(double x) {
  if (!std::isfinite(x)) return num(x);
  return std::stod(num(x));
}

json jstack(const ProbStack& P) {
  json levels = json::array();
  for (const auto& lv : P.levels) {
    json a = json::array();
    for (double v : lv) a.push_back(jnum(v));
    levels.push_back(std::move(a));
  }
  return {{"ordering", format_ordering(P.ordering)}, {"levels", std::move(levels)}};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + tok + "' in list");
    }
  }
  return out;
}

std::vector<int> parse_range(const std::string& s) {
  std::vector<int> out;
  auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      for (int k = a; k <= b; ++k) out.push_back(k);
    } else {
      for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad exponent range '" + s + "'");
  }
  if (out.empty()) throw ParseError("empty exponent range '" + s + "'");
  return out;
}

struct Common {
  std::string scene;
  std::string measure;
  int threads = 1;
  std::string format = "csv";
};

WeightedMeasure pick_measure(const Scene& sc, const std::string& flag) {
  if (flag.empty()) return sc.measure_or_uniform();
  auto w = parse_list(flag);
  if (static_cast<int>(w.size()) != sc.ifs.size())
    throw ParseError("--measure has " + std::to_string(w.size()) + " weights for " +
                     std::to_string(sc.ifs.size()) + " maps");
  return make_measure(std::move(w));
}

int cmd_validate(const Common& c) {
  auto sc = load_scene(c.scene);
  auto rep = validate(sc.ifs);
  json out;
  out["scene"] = sc.name;
  out["valid"] = rep.ok();
  out["lambda_min"] = jnum(rep.lambda_min);
  out["r0"] = jnum(rep.r0);
  json viol = json::array();
  for (const auto& v : rep.violations) viol.push_back({{"kind", v.kind}, {"message", v.message}});
  out["violations"] = viol;
  bool sppc = false;
  if (rep.ok()) {
    SpongeModel model(sc.ifs);
    json ords = json::array();
    for (const auto& v : model.orderings().verdicts)
      ords.push_back({{"ordering", format_ordering(v.ordering)},
                      {"status", to_string(v.status)},
                      {"best_min_coefficient", jnum(v.best_min_coefficient)},
                      {"reason", v.reason}});
    out["orderings"] = ords;
    json adm = json::array();
    for (const auto& s : model.admissible()) adm.push_back(format_ordering(s));
    out["admissible"] = adm;
    sppc = model.sppc().satisfied;
    out["sppc"] = sppc;
    out["very_strong_sppc"] = model.sppc().very_strong;
    json fails = json::array();
    for (const auto& w : model.sppc().failures)
      fails.push_back({{"ordering", format_ordering(w.ordering)}, {"level", w.level}, {"maps", {w.i + 1, w.j + 1}}});
    out["sppc_failures"] = fails;
  }
  if (c.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "scene: " << sc.name << "\n";
    std::cout << "valid: " << (rep.ok() ? "yes" : "no") << "\n";
    for (const auto& v : rep.violations) std::cout << "  " << v.kind << ": " << v.message << "\n";
    if (rep.ok()) {
      for (const auto& o : out["orderings"])
        std::cout << "ordering " << o["ordering"].get<std::string>() << ": " << o["status"].get<std::string>()
                  << "\n";
      std::cout << "sppc: " << (sppc ? "yes" : "no") << "\n";
    }
    std::cout << out.dump() << "\n";
  }
  return rep.ok() && sppc ? kOk : kInvalid;
}

std::vector<double> q_grid(double lo, double hi, int steps) {
  if (lo == hi) return {lo};
  if (steps < 2) throw ParseError("--q-steps must be at least 2");
  std::vector<double> q(steps);
  for (int k = 0; k < steps; ++k) q[k] = lo + (hi - lo) * k / (steps - 1);
  return q;
}

int cmd_spectrum(const Common& c, double qmin, double qmax, int steps) {
  auto sc = load_scene(c.scene);
  SpongeModel model(sc.ifs);
  auto mu = pick_measure(sc, c.measure);
  SpectrumOptions opt;
  opt.threads = c.threads;
  auto res = lq_spectrum(model, mu, q_grid(qmin, qmax, steps), opt);
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& p : res.points)
      rows.push_back({{"q", jnum(p.q)},
                      {"T", jnum(p.pressure.value)},
                      {"argmax_ordering", format_ordering(p.pressure.argmax_ordering)},
                      {"certified", p.pressure.certified},
                      {"gap_to_upper_bound", jnum(p.pressure.gap())}});
    std::cout << json{{"scene", sc.name}, {"symbolic_only", res.symbolic_only}, {"points", rows}}.dump(2) << "\n";
  } else {
    if (res.symbolic_only) std::cout << "# sppc fails: values are symbolic only\n";
    std::cout << "q,T,argmax_ordering,certified,gap_to_upper_bound\n";
    for (const auto& p : res.points)
      std::cout << num(p.q) << "," << num(p.pressure.value) << ",\"" << format_ordering(p.pressure.argmax_ordering)
                << "\"," << (p.pressure.certified ? "true" : "false") << "," << num(p.pressure.gap()) << "\n";
  }
  return kOk;
}

int cmd_dimensions(const Common& c) {
  auto sc = load_scene(c.scene);
  SpongeModel model(sc.ifs);
  auto mu = pick_measure(sc, c.measure);
  auto box = box_dimension(model);
  auto dims = measure_dimensions(model, mu);
  json per = json::array();
  for (const auto& od : dims.per_ordering) {
    json up = json::array(), lo = json::array();
    for (double v : od.bounds.upper) up.push_back(jnum(v));
    for (double v : od.bounds.lower) lo.push_back(jnum(v));
    per.push_back({{"ordering", format_ordering(od.ordering)},
                   {"S_upper", up},
                   {"S_lower", lo},
                   {"inf_S", jnum(od.inf_S)},
                   {"sup_S", jnum(od.sup_S)},
                   {"inf_certified", od.inf_certified},
                   {"sup_certified", od.sup_certified},
                   {"inf_argmin", jstack(od.inf_argmin)},
                   {"sup_argmax", jstack(od.sup_argmax)}});
  }
  json bper = json::array();
  for (const auto& op : box.per_ordering)
    bper.push_back({{"ordering", format_ordering(op.ordering)},
                    {"value", jnum(op.value)},
                    {"upper_bound", jnum(op.upper_bound)},
                    {"certified", op.certified},
                    {"method", op.method},
                    {"argmax", jstack(op.argmax)}});
  json out{{"scene", sc.name},
           {"symbolic_only", dims.symbolic_only},
           {"box_dimension", {{"value", jnum(box.value)},
                              {"certified", box.certified},
                              {"argmax_ordering", format_ordering(box.argmax_ordering)},
                              {"per_ordering", bper}}},
           {"frostman", jnum(dims.frostman)},
           {"box_of_measure", jnum(dims.box_of_measure)},
           {"closed_lower_frostman", jnum(dims.closed_lower_frostman)},
           {"closed_upper_box", jnum(dims.closed_upper_box)},
           {"certified", dims.certified},
           {"asymptote", {{"plus", jnum(dims.asymptote_plus)},
                          {"minus", jnum(dims.asymptote_minus)},
                          {"bound", jnum(dims.asymptote_bound)},
                          {"consistent", dims.asymptote_consistent}}},
           {"entropy_dimension_proxy", jnum(dims.entropy_dimension_proxy)},
           {"per_ordering", per}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_oracle(const Common& c, double q, const std::string& range, std::uint64_t budget) {
  auto sc = load_scene(c.scene);
  SpongeModel model(sc.ifs);
  auto mu = pick_measure(sc, c.measure);
  auto ks = parse_range(range);
  double var = lq_value(model, mu, q).value;
  OracleOptions oo;
  oo.budget = budget;
  bool skipped = false;
  json rows = json::array();
  if (c.format != "json") std::cout << "k,delta,estimate,variational,gap,cube_count,per_ordering,seconds,status\n";
  for (int k : ks) {
    double delta = std::ldexp(1.0, -k);
    try {
      auto r = finite_scale_lq(model, mu, q, delta, oo);
      std::string per;
      for (const auto& [s, lz] : r.log_Z_by_ordering) {
        if (!per.empty()) per += " ";
        per += format_ordering(s) + ":" + num(lz / -std::log(delta));
      }
      if (c.format == "json") {
        json pj;
        for (const auto& [s, lz] : r.log_Z_by_ordering) pj[format_ordering(s)] = jnum(lz / -std::log(delta));
        rows.push_back({{"k", k}, {"delta", jnum(delta)}, {"estimate", jnum(r.estimate)},
                        {"variational", jnum(var)}, {"gap", jnum(r.estimate - var)},
                        {"cube_count", r.cube_count}, {"per_ordering", pj}, {"seconds", jnum(r.seconds)},
                        {"status", "ok"}});
      } else {
        std::cout << k << "," << num(delta) << "," << num(r.estimate) << "," << num(var) << ","
                  << num(r.estimate - var) << "," << r.cube_count << ",\"" << per << "\"," << num(r.seconds)
                  << ",ok\n";
      }
    } catch (const BudgetExceeded& e) {
      skipped = true;
      std::string msg = std::string("skipped: ") + e.what();
      if (c.format == "json")
        rows.push_back({{"k", k}, {"delta", jnum(delta)}, {"status", msg}, {"count_bound", jnum(e.count_bound())}});
      else
        std::cout << k << "," << num(delta) << ",,,,,,,\"" << msg << "\"\n";
    }
  }
  if (c.format == "json") std::cout << json{{"scene", sc.name}, {"q", jnum(q)}, {"rows", rows}}.dump(2) << "\n";
  return skipped ? kBudget : kOk;
}

int cmd_legendre(const Common& c, double qmin, double qmax, int steps) {
  auto sc = load_scene(c.scene);
  SpongeModel model(sc.ifs);
  auto mu = pick_measure(sc, c.measure);
  SpectrumOptions opt;
  opt.threads = c.threads;
  auto grid = q_grid(qmin, qmax, steps);
  auto res = lq_spectrum(model, mu, grid, opt);
  std::vector<double> T;
  for (const auto& p : res.points) T.push_back(p.pressure.value);
  auto f = legendre_transform(grid, T);
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& [a, v] : f) rows.push_back({{"alpha", jnum(a)}, {"f", jnum(v)}});
    std::cout << rows.dump(2) << "\n";
  } else {
    std::cout << "alpha,f\n";
    for (const auto& [a, v] : f) std::cout << num(a) << "," << num(v) << "\n";
  }
  return kOk;
}

int cmd_paper_examples(int threads) {
  bool all = true;
  auto line = [&](bool ok, const std::string& what) {
    all = all && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
  };
  SpongeModel carpet(examples::baranski_carpet());
  double u_edge = std::pow(0.5, examples::carpet_s()) + 0.05;
  for (double u : {0.5, 0.6, 0.7, u_edge}) {
    std::vector<double> q;
    for (int k = 0; k <= 60; ++k) q.push_back(-3.0 + 0.1 * k);
    SpectrumOptions opt;
    opt.threads = threads;
    auto res = lq_spectrum(carpet, make_measure({u, 1.0 - u}), q, opt);
    double worst = 0.0;
    int bad = 0;
    for (const auto& p : res.points) {
      double want = examples::carpet_spectrum(u, p.q);
      double tol = p.pressure.certified ? 1e-6 : 1e-4;
      double err = std::fabs(p.pressure.value - want);
      worst = std::max(worst, err);
      if (err > tol) {
        ++bad;
        std::cout << "  u=" << num(u) << " q=" << num(p.q) << " computed " << num(p.pressure.value) << " expected "
                  << num(want) << "\n";
      }
    }
    line(bad == 0, "carpet spectrum u=" + num(u) + " (61 points, max error " + num(worst) + ")");
  }
  auto v = lq_value(carpet, make_measure({0.5, 0.5}), 2.0).value;
  line(std::fabs(v + 2.0 / 3.0) <= 1e-4, "carpet u=0.5 q=2 gives " + num(v) + " (expected -2/3)");

  auto g = examples::fj_grid_search({100, 500, 1000}, 0.05);
  line(g.both_out.empty(), "sponge grid condition (1) over " + std::to_string(g.instances) + " instances");
  line(g.sigma_out_bad.empty(), "sponge grid condition (2)");
  line(g.omega_out_bad.empty(), "sponge grid condition (3)");
  line(g.sigma_out > 0 && g.omega_out > 0, "exception sets non-empty (sigma out: " + std::to_string(g.sigma_out) +
                                               ", omega out: " + std::to_string(g.omega_out) + ")");
  for (const auto* list : {&g.both_out, &g.sigma_out_bad, &g.omega_out_bad})
    for (const auto& r : *list)
      std::cout << "  counterexample a=" << num(r.params.a) << " b=" << num(r.params.b) << " c=" << num(r.params.c)
                << " N=" << r.params.N << "\n";
  return all ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L^q spectra and dimensions of self-affine sponges"};
  app.require_subcommand(1);
  Common c;
  double qmin = -3.0, qmax = 3.0, q = 0.0;
  int steps = 61;
  std::string range = "10..16";
  std::uint64_t budget = 100'000'000;

  auto add_common = [&](CLI::App* s, bool needs_scene) {
    auto* o = s->add_option("--scene", c.scene, "scene file or shipped scene name");
    if (needs_scene) o->required();
    s->add_option("--measure", c.measure, "weights u1,u2,...");
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* v = app.add_subcommand("validate", "validation, orderings and SPPC report");
  add_common(v, true);
  auto* sp = app.add_subcommand("spectrum", "L^q spectrum on a q grid");
  add_common(sp, true);
  for (auto* s : {sp}) {
    s->add_option("--q-min", qmin);
    s->add_option("--q-max", qmax);
    s->add_option("--q-steps", steps);
  }
  auto* dm = app.add_subcommand("dimensions", "box dimension and measure dimensions");
  add_common(dm, true);
  auto* orc = app.add_subcommand("oracle", "finite-scale estimates at delta = 2^-k");
  add_common(orc, true);
  orc->add_option("--q", q);
  orc->add_option("--delta-exponents", range, "e.g. 10..20 or 10,12,14");
  orc->add_option("--budget", budget, "max cube count");
  auto* pe = app.add_subcommand("paper-examples", "reproduce the two worked examples");
  pe->add_option("--threads", c.threads)->check(CLI::PositiveNumber);
  auto* lg = app.add_subcommand("legendre", "Legendre transform of the spectrum");
  add_common(lg, true);
  lg->add_option("--q-min", qmin);
  lg->add_option("--q-max", qmax);
  lg->add_option("--q-steps", steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*v) return cmd_validate(c);
    if (*sp) return cmd_spectrum(c, qmin, qmax, steps);
    if (*dm) return cmd_dimensions(c);
    if (*orc) return cmd_oracle(c, q, range, budget);
    if (*pe) return cmd_paper_examples(c.threads);
    if (*lg) return cmd_legendre(c, qmin, qmax, steps);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
