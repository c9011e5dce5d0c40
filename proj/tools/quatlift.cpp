// quatlift: class sets, Brandt matrices, theta series, eigencomponents and
// Gross-formula tables for the level-p^2 lift, as JSON or CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "quatlift.hpp"

using json = nlohmann::ordered_json;
using namespace quatlift;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  Int p = 7;
  std::string order = "tilde";
  int sigma = 0;
  std::string m = "1..10";
  Int depth = 0;
  Int d_max = 150;
  Int hecke_bound = 13;
  Tolerances tol;
  std::string format = "json";
  std::string out;
  unsigned threads = 0;
};

json rat(const Rational& r) { return r.str(); }

json lattice_json(const Lattice& L) {
  json rows = json::array();
  for (std::size_t r = 0; r < 4; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < 4; ++c) row.push_back(rat(L.entry(r, c)));
    rows.push_back(row);
  }
  json gens = json::array();
  for (const auto& b : L.basis()) gens.push_back(b.str());
  return json{{"basis", rows}, {"generators", gens}};
}

json order_json(const Order& o) {
  json j = lattice_json(o.lattice);
  j["disc"] = o.disc;
  j["level"] = o.level;
  j["omega"] = o.omega;
  j["theta_level"] = o.theta_level;
  return j;
}

json int_matrix(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json config_json(const Config& c, const std::string& command) {
  json tol{{"eigen", c.tol.eigen}, {"fit", c.tol.fit}, {"ratio", c.tol.ratio}, {"zero_floor", c.tol.zero_floor}};
  json j{{"command", command}, {"p", c.p}, {"order", c.order}};
  j["sigma"] = c.sigma == 0 ? json(nullptr) : json(c.sigma);
  j["m"] = c.m;
  j["depth"] = c.depth > 0 ? c.depth : default_depth(c.p);
  j["dmax"] = c.d_max;
  j["hecke_bound"] = c.hecke_bound;
  j["tolerances"] = tol;
  j["format"] = c.format;
  return j;
}

json envelope(const Config& c, const std::string& command) {
  return json{{"tool", "quatlift"},
              {"version", QUATLIFT_VERSION},
              {"config", config_json(c, command)},
              {"assumptions",
               {{"sigma", "(-Delta(x)/p | p) for x outside Z+pO"},
                {"a_p", "a_{p^k} = 0 for k >= 1 on level-p^2 components"},
                {"conductors", "twisted conductors fitted by A-independence"}}}};
}

void validate(const Config& c, bool need_sigma) {
  if (c.p < 3 || !is_prime(c.p)) throw UsageError("--p must be an odd prime");
  if (c.order != "maximal" && c.order != "tilde" && c.order != "p2")
    throw UsageError("--order must be maximal, tilde or p2");
  if (c.sigma != 0 && c.sigma != 1 && c.sigma != -1) throw UsageError("--sigma must be +1 or -1");
  if ((need_sigma || c.order == "p2") && c.sigma == 0) throw UsageError("--sigma is required here");
  if (c.depth < 0) throw UsageError("--depth must be >= 1");
  if (c.d_max < 1) throw UsageError("--dmax must be >= 1");
  if (c.hecke_bound < 2) throw UsageError("--hecke-bound must be >= 2");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
}

std::pair<Int, Int> parse_range(const std::string& s) {
  try {
    auto dots = s.find("..");
    if (dots == std::string::npos) {
      Int m = std::stoll(s);
      return {m, m};
    }
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--m expects N or A..B");
  }
}

struct Built {
  Tower tower;
  ClassSet maximal, tilde, p2;
  const ClassSet* chosen = nullptr;
  Int disc = 0;
  const Order* order = nullptr;
};

std::unique_ptr<Built> build(const Config& c) {
  auto b = std::make_unique<Built>();
  b->tower = build_tower(c.p);
  b->maximal = maximal_class_set(b->tower);
  b->chosen = &b->maximal;
  b->order = &b->tower.maximal;
  if (c.order == "maximal") {
    b->disc = b->tower.maximal.disc;
    return b;
  }
  b->tilde = tilde_class_set(b->tower, b->maximal);
  b->chosen = &b->tilde;
  b->order = &b->tower.tilde;
  b->disc = b->tower.tilde.disc;
  if (c.order == "p2") {
    b->order = &b->tower.oprime(c.sigma);
    b->p2 = level_p2_class_set(b->tower, b->tilde, *b->order, c.sigma);
    b->chosen = &b->p2;
    b->disc = b->order->disc;
  }
  return b;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + c.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_classes(const Config& c) {
  validate(c, false);
  auto b = build(c);
  json j = envelope(c, "classes");
  j["order"] = order_json(*b->order);
  if (c.order == "p2") j["order"]["sigma"] = c.sigma;
  json classes = json::array();
  const ClassSet& cs = *b->chosen;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    json e{{"index", i}};
    e["ideal"] = lattice_json(cs.reps[i]);
    e["norm"] = rat(lattice_norm(cs.reps[i]));
    e["height"] = cs.heights[i];
    e["parent"] = cs.parent.empty() ? json(nullptr) : json(cs.parent[i]);
    e["right_order"] = lattice_json(cs.right_orders[i]);
    classes.push_back(e);
  }
  j["class_number"] = cs.size();
  j["classes"] = classes;
  if (c.order != "maximal") {
    json sig = json::array();
    for (const auto& o : b->tower.level_p2) {
      json e = lattice_json(o.order.lattice);
      e["sigma"] = o.sigma;
      sig.push_back(e);
    }
    j["level_p2_orders"] = sig;
  }
  emit(c, dump(j));
  return 0;
}

int cmd_brandt(const Config& c) {
  validate(c, false);
  auto [lo, hi] = parse_range(c.m);
  if (lo < 1 || hi < lo) throw UsageError("--m range must satisfy 1 <= A <= B");
  auto b = build(c);
  auto fam = brandt_matrices(*b->chosen, b->disc, hi);
  json j = envelope(c, "brandt");
  j["heights"] = fam.heights;
  json ms = json::array();
  for (Int m = lo; m <= hi; ++m) {
    json e{{"m", m}, {"matrix", int_matrix(fam[m])}};
    e["column_sums"] = column_sums(fam[m]);
    e["self_adjoint"] = is_self_adjoint(fam[m], fam.heights);
    ms.push_back(e);
  }
  j["matrices"] = ms;
  emit(c, dump(j));
  return 0;
}

int cmd_theta(const Config& c) {
  validate(c, false);
  auto b = build(c);
  const Int depth = c.depth > 0 ? c.depth : default_depth(c.p);
  json j = envelope(c, "theta");
  json series = json::array();
  if (c.order == "tilde" && c.sigma != 0) {
    LiftForms lift(b->tower, b->tilde, b->tower.oprime(c.sigma), depth);
    j["kind"] = "lift";
    for (std::size_t i = 0; i < b->tilde.size(); ++i) {
      std::vector<Rational> v(b->tilde.size(), Rational(0));
      v[i] = Rational(1);
      auto q = lift.expansion(v);
      json co = json::array();
      for (const auto& x : q.coeffs) co.push_back(rat(x));
      series.push_back(json{{"class", i}, {"weight", q.weight}, {"level", q.level}, {"character", q.character}, {"coefficients", co}});
    }
  } else {
    const ClassSet& cs = *b->chosen;
    SpecialPoints sp(cs.right_orders, depth * b->order->omega);
    j["kind"] = "special_points";
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::vector<Rational> v(cs.size(), Rational(0));
      v[i] = Rational(1);
      auto q = theta32(sp, v, depth, b->order->theta_level);
      json co = json::array();
      for (const auto& x : q.coeffs) co.push_back(rat(x));
      series.push_back(json{{"class", i}, {"weight", q.weight}, {"level", q.level}, {"character", q.character}, {"coefficients", co}});
    }
  }
  j["series"] = series;
  emit(c, dump(j));
  return 0;
}

json component_json(const IsotypicComponent& comp) {
  json j{{"kind", to_string(comp.kind)}, {"dim", comp.dim()}, {"exact", comp.exact}};
  json ev = json::object();
  for (std::size_t k = 0; k < comp.primes.size(); ++k) {
    if (comp.exact) ev[std::to_string(comp.primes[k])] = rat(Rational(comp.exact_eigenvalues[k]));
    else ev[std::to_string(comp.primes[k])] = comp.eigenvalues[k];
  }
  j["eigenvalues"] = ev;
  j["quadratic_twist_of_level_p"] = comp.quadratic_twist;
  if (comp.exact) j["basis"] = comp.basis;
  else j["basis"] = comp.float_basis;
  return j;
}

int cmd_eigen(const Config& c) {
  validate(c, false);
  auto b = build(c);
  auto primes = hecke_primes(b->disc, c.hecke_bound);
  if (primes.empty()) throw UsageError("--hecke-bound leaves no primes");
  DecomposeOptions o;
  o.tol = c.tol.eigen;
  o.p = c.p;
  if (c.order != "maximal") {
    auto mf = brandt_matrices(b->maximal, b->tower.maximal.disc, primes.back());
    o.level_p_systems = cusp_systems(isotypic_decompose(mf, primes, o));
  }
  auto fam = brandt_matrices(*b->chosen, b->disc, primes.back());
  auto comps = isotypic_decompose(fam, primes, o);
  json j = envelope(c, "eigen");
  j["heights"] = fam.heights;
  j["primes"] = primes;
  json cs = json::array();
  for (const auto& comp : comps) cs.push_back(component_json(comp));
  j["components"] = cs;
  j["reconstruction_error"] = reconstruction_error(comps);
  emit(c, dump(j));
  return 0;
}

json lvalue_json(const LValueEstimate& e) {
  return json{{"value", e.value},           {"error", e.error},         {"terms", e.terms},
              {"epsilon", e.epsilon},       {"conductor", e.conductor}, {"residual", e.residual},
              {"skipped_conductors", e.skipped_conductors}};
}

int cmd_gross(const Config& c) {
  validate(c, true);
  PipelineOptions opt;
  opt.depth = c.depth;
  opt.d_max = c.d_max;
  opt.hecke_bound = c.hecke_bound;
  opt.tol = c.tol;
  auto ctx = prepare(c.p, opt);
  auto rep = run_gross(ctx, c.sigma, opt);

  if (c.format == "csv") {
    std::ostringstream os;
    os << "component,d,c,L,L_error,conductor,epsilon,ratio\n";
    for (const auto& cr : rep.components) {
      if (!cr.analyzed) continue;
      for (const auto& r : cr.table.rows) {
        os << cr.index << "," << r.d << "," << (r.exact ? r.c.str() : std::to_string(r.c_float)) << ",";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g,%.3g", r.L.value, r.L.error);
        os << buf << "," << r.L.conductor << "," << r.L.epsilon << ",";
        if (r.has_ratio) {
          std::snprintf(buf, sizeof buf, "%.12g", r.ratio);
          os << buf;
        }
        os << "\n";
      }
    }
    emit(c, os.str());
    return 0;
  }

  json j = envelope(c, "gross");
  j["depth_used"] = rep.depth;
  j["coefficient_terms"] = rep.coefficient_terms;
  j["oprime"] = lattice_json(ctx.tower.oprime(c.sigma).lattice);
  json comps = json::array();
  for (const auto& cr : rep.components) {
    json e = component_json(*cr.component);
    e["index"] = cr.index;
    if (!cr.analyzed) {
      e["status"] = "skipped";
      e["reason"] = cr.skipped_reason;
      comps.push_back(e);
      continue;
    }
    const auto& cond = cr.conditions;
    e["alpha"] = rat(cond.alpha);
    e["a_n"] = cr.an;
    e["L_f"] = lvalue_json(cond.L1);
    e["L_f_pstar"] = lvalue_json(cond.L_pstar);
    e["pstar"] = p_star(c.p);
    e["condA"] = cond.condA;
    e["condB"] = cond.condB;
    e["condB_observation"] = cond.condB ? "f (x) p* has level p^2 with root number (-1|p)" : "";
    json lift{{"zero", cr.lift.zero}, {"rank", cr.lift.rank}, {"depth_stable", cr.depth_stable}};
    if (cr.lift.exact) {
      lift["e_f"] = cr.lift.vector;
      json co = json::array();
      for (const auto& x : cr.lift.coeffs) co.push_back(rat(x));
      lift["coefficients"] = co;
    } else {
      lift["e_f"] = cr.lift.float_vector;
      lift["coefficients"] = cr.lift.float_coeffs;
    }
    e["lift"] = lift;
    json rows = json::array();
    for (const auto& r : cr.table.rows) {
      json row{{"d", r.d}};
      row["c"] = r.exact ? json(rat(r.c)) : json(r.c_float);
      row["L"] = lvalue_json(r.L);
      row["ratio"] = r.has_ratio ? json(r.ratio) : json(nullptr);
      rows.push_back(row);
    }
    e["rows"] = rows;
    e["verdict"] = to_string(cr.table.verdict);
    e["verdict_detail"] = cr.table.detail;
    e["ratio_spread"] = cr.table.ratio_spread;
    e["usable_rows"] = cr.table.usable;
    comps.push_back(e);
  }
  j["components"] = comps;
  emit(c, dump(j));
  return 0;
}

int cmd_verify(const Config& c) {
  if (c.p < 3 || !is_prime(c.p)) throw UsageError("--p must be an odd prime");
  std::vector<CheckResult> results;
  auto t = build_tower(c.p);
  auto maximal = maximal_class_set(t);
  auto tilde = tilde_class_set(t, maximal);
  results.push_back(check_structure_constants(t));
  results.push_back(check_mass(maximal, c.p));
  auto tfam = brandt_matrices(tilde, t.tilde.disc, 20);
  results.push_back(check_hecke(tfam, c.p, 12, "tilde"));
  results.push_back(check_edhecke(tilde, tfam, c.p, 200, {2, 3, 5}, "tilde"));
  for (int sigma : {1, -1}) {
    auto p2 = level_p2_class_set(t, tilde, t.oprime(sigma), sigma);
    auto pfam = brandt_matrices(p2, t.oprime(sigma).disc, 20);
    std::string label = std::string("p2") + (sigma > 0 ? "+" : "-");
    results.push_back(check_hecke(pfam, c.p, 12, label));
    results.push_back(check_edhecke(p2, pfam, c.p, 200, {2, 3, 5}, label));
    results.push_back(check_psi_commutation(tilde, tfam, p2, pfam, c.p, 20, label));
  }
  json j = envelope(c, "verify");
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(json{{"check", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    all = all && r.ok;
  }
  j["checks"] = arr;
  j["all_ok"] = all;
  if (c.format == "csv") {
    std::ostringstream os;
    os << "check,ok,detail\n";
    for (const auto& r : results) os << '"' << r.name << "\"," << (r.ok ? "true" : "false") << ",\"" << r.detail << "\"\n";
    emit(c, os.str());
  } else {
    emit(c, dump(j));
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quatlift: Brandt modules and the level-p^2 lift for definite quaternion orders"};
  app.require_subcommand(1);
  Config cfg;
  if (const char* env = std::getenv("QUATLIFT_THREADS")) {
    try {
      cfg.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
    }
  }
  std::string sigma_text;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "odd prime")->required();
    sub->add_option("--order", cfg.order, "maximal | tilde | p2");
    sub->add_option("--sigma", sigma_text, "genus sign +1 or -1");
    sub->add_option("--depth", cfg.depth, "expansion depth (default ceil(3p(p+1)/4))");
    sub->add_option("--dmax", cfg.d_max, "largest d in Gross tables");
    sub->add_option("--hecke-bound", cfg.hecke_bound, "Hecke primes q <= bound");
    sub->add_option("--tol-eigen", cfg.tol.eigen);
    sub->add_option("--tol-fit", cfg.tol.fit);
    sub->add_option("--tol-ratio", cfg.tol.ratio);
    sub->add_option("--tol-zero", cfg.tol.zero_floor);
    sub->add_option("--format", cfg.format, "json | csv");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads (default QUATLIFT_THREADS or hardware)");
  };
  auto* classes = app.add_subcommand("classes", "class set representatives and heights");
  auto* brandt = app.add_subcommand("brandt", "Brandt matrices B_m");
  auto* theta = app.add_subcommand("theta", "weight 3/2 theta series");
  auto* eigen = app.add_subcommand("eigen", "Hecke eigencomponents");
  auto* gross = app.add_subcommand("gross", "lift, root numbers and Gross table per component");
  auto* verify = app.add_subcommand("verify", "invariant checks for one prime");
  for (auto* s : {classes, brandt, theta, eigen, gross, verify}) common(s);
  brandt->add_option("--m", cfg.m, "index or range A..B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!sigma_text.empty()) {
      if (sigma_text == "+1" || sigma_text == "1" || sigma_text == "+") cfg.sigma = 1;
      else if (sigma_text == "-1" || sigma_text == "-") cfg.sigma = -1;
      else throw UsageError("--sigma must be +1 or -1");
    }
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    if (*classes) return cmd_classes(cfg);
    if (*brandt) return cmd_brandt(cfg);
    if (*theta) return cmd_theta(cfg);
    if (*eigen) return cmd_eigen(cfg);
    if (*gross) return cmd_gross(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
