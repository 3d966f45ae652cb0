#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "betagap/detcurve.hpp"
#include "betagap/errors.hpp"
#include "betagap/exact.hpp"
#include "betagap/montecarlo.hpp"
#include "betagap/quadrics.hpp"

#ifndef BETAGAP_VERSION
#define BETAGAP_VERSION "0.0.0"
#endif

namespace betagap::cli {

using nlohmann::json;

void to_json(json& j, const RunRecord& r) {
  j = json{{"command", r.command},     {"params", r.params},       {"result", r.result},
           {"seed", nullptr},          {"timestamp", r.timestamp}, {"version", r.version},
           {"wall_seconds", r.wall_seconds}};
  if (r.seed) j["seed"] = *r.seed;
}

void from_json(const json& j, RunRecord& r) {
  j.at("command").get_to(r.command);
  r.params = j.at("params");
  r.result = j.at("result");
  r.seed = j.at("seed").is_null() ? std::nullopt : std::optional<std::uint64_t>(j.at("seed").get<std::uint64_t>());
  j.at("timestamp").get_to(r.timestamp);
  j.at("version").get_to(r.version);
  j.at("wall_seconds").get_to(r.wall_seconds);
}

namespace {

struct Options {
  double beta = 1.0;
  std::size_t n = 2;
  std::size_t k = 2;
  double eps = 0.1;
  double power = 1.0;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "json";
  std::string basis = "monomials";
  std::string curve = "cylinder";
  std::string quantity = "gap-deriv";
  std::size_t grid = 10'000;
  std::size_t n_min = 2, n_max = 200, n_step = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json result;
  bool stochastic = false;
  double wall_seconds = 0.0;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exact_beta(double beta) {
  if (beta != std::round(beta)) throw DomainError("closed forms need beta in {1, 2, 4}");
  return checked_beta(static_cast<int>(beta));
}

json log_json(const LogValue& v) {
  json j{{"log_abs", v.log_abs}, {"sign", v.sign}};
  const double x = v.value();
  j["value"] = std::isfinite(x) ? json(x) : json(nullptr);
  return j;
}

json scalar(double v) { return {{"value", v}, {"mean", v}}; }

Outcome estimate(const Estimate& e, json extra = json::object()) {
  json j{{"mean", e.mean}, {"std_err", e.std_err}, {"trials", e.trials}, {"seed", e.seed}};
  for (auto& [key, val] : extra.items()) j[key] = val;
  return {j, true, e.wall_seconds};
}

RunConfig run_config(const Options& o) { return {o.trials, o.seed, o.threads}; }

CurveBasis make_basis(const Options& o) {
  if (o.basis == "monomials") return CurveBasis::monomials(o.k);
  if (o.basis == "circle") return CurveBasis::circle();
  throw UsageError("unknown basis '" + o.basis + "' (monomials or circle)");
}

json arcs_json(const PencilArcs& a) {
  return {{"n", a.n},           {"singular_angles", a.singular_angles}, {"arc_index", a.arc_index},
          {"mu", a.mu},         {"nu", a.nu},                           {"card", a.card()},
          {"merged", a.merged}, {"recomputed", a.recomputed}};
}

json table_json(const TableE& t) {
  std::vector<std::size_t> betti;
  for (std::size_t i = 0; i < t.n; ++i) betti.push_back(betti_bound(t, i));
  return {{"k", t.k},
          {"n", t.n},
          {"entries", t.entries},
          {"betti", betti},
          {"total_betti", total_betti(t)},
          {"euler", euler_bound(t)}};
}

PencilArcs seeded_pencil(const Options& o) {
  Stream st = Stream::for_trial(o.seed, 0);
  return sample_pencil(o.n, st);
}

PencilArcs example_pencil() {
  RealMatrix q(3, 3);
  q << 0, 1, 1, 1, 1, 1, 1, 1, 0;
  return pencil_arcs(HermitianMatrix::identity(1, 3), HermitianMatrix::from_real(q));
}

double sweep_exact(const std::string& quantity, int beta, std::size_t n) {
  if (quantity == "gap-deriv") return -gap_derivative_zero(beta, n).value();
  return sigma_volume(beta, n).ratio_to_sphere.value();
}

double sweep_asymptotic(const std::string& quantity, std::size_t n) {
  return quantity == "gap-deriv" ? gap_derivative_asymptotic(n) : volume_ratio_asymptotic(n);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_value(const json& v) {
  if (v.is_number_float()) return g17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

using Handler = std::function<Outcome(const Options&)>;

struct Command {
  std::string group, name;
  std::vector<std::string> params;
  std::string help;
  Handler handler;
};

std::vector<Command> commands() {
  return {
      {"exact", "constants", {"beta", "n"}, "All closed-form constants for one (beta, n)",
       [](const Options& o) {
         const auto c = exact_constants(exact_beta(o.beta), o.n);
         return Outcome{{{"beta", c.beta},
                         {"n", c.n},
                         {"N_beta", c.N_beta},
                         {"C", log_json(c.C)},
                         {"mellin", log_json(c.mellin)},
                         {"f_prime_0", log_json(c.f_prime_0)},
                         {"sigma_volume_ratio", log_json(c.sigma_volume_ratio)}}};
       }},
      {"exact", "mellin", {"beta", "n"}, "Half-moment E|det|^(1/2) of the ensemble",
       [](const Options& o) {
         const auto m = mellin_plus(exact_beta(o.beta), o.n);
         json j = scalar(m.value());
         j["log_abs"] = m.log_abs;
         return Outcome{j};
       }},
      {"exact", "gap-deriv", {"beta", "n"}, "Slope of the gap probability at zero, with its asymptotic",
       [](const Options& o) {
         const auto f = gap_derivative_zero(exact_beta(o.beta), o.n);
         json j = scalar(f.value());
         j["asymptotic"] = -gap_derivative_asymptotic(o.n);
         return Outcome{j};
       }},
      {"exact", "volume", {"beta", "n"}, "Volume of the singular hypersurface and its ratio to the sphere",
       [](const Options& o) {
         const auto v = sigma_volume(exact_beta(o.beta), o.n);
         return Outcome{{{"absolute", log_json(v.absolute)},
                         {"ratio_to_sphere", log_json(v.ratio_to_sphere)},
                         {"ratio_closed_form", log_json(v.ratio_closed_form)},
                         {"asymptotic", volume_ratio_asymptotic(o.n)}}};
       }},
      {"exact", "euler", {"k", "n"}, "Euler characteristic bound for k quadrics",
       [](const Options& o) { return Outcome{scalar(euler_char_expectation(o.k, o.n))}; }},
      {"mc", "gap", {"beta", "n", "eps", "trials", "seed"}, "Monte Carlo gap probability at distance eps",
       [](const Options& o) { return estimate(gap_probability({o.beta, o.n, 0}, o.eps, run_config(o))); }},
      {"mc", "cone-gap", {"beta", "n", "eps", "trials", "seed"}, "Same probability on the cone of trace-zero matrices",
       [](const Options& o) { return estimate(cone_gap_probability({o.beta, o.n, 0}, o.eps, run_config(o))); }},
      {"mc", "deriv0", {"beta", "n", "trials", "seed", "curve"}, "Monte Carlo slope at zero along a curve",
       [](const Options& o) {
         GapCurve curve;
         if (o.curve == "cylinder") curve = GapCurve::cylinder;
         else if (o.curve == "cone") curve = GapCurve::cone;
         else throw UsageError("unknown curve '" + o.curve + "' (cylinder or cone)");
         const EnsembleSpec spec{o.beta, o.n, 0};
         const auto grid = default_eps_grid(spec, curve, o.trials);
         const auto s = derivative_at_zero(spec, curve, grid, run_config(o));
         return estimate(s.slope, {{"bias", s.bias}, {"eps_grid", s.eps_grid}, {"one_minus_f", s.one_minus_f}});
       }},
      {"mc", "absdet", {"beta", "n", "power", "trials", "seed"}, "Monte Carlo E|det|^p",
       [](const Options& o) {
         return estimate(expected_abs_det_pow({o.beta, o.n, 0}, o.power, run_config(o)));
       }},
      {"detcurve", "alpha1", {"basis", "k"}, "Projective arc length of a basis curve",
       [](const Options& o) { return Outcome{scalar(alpha1(make_basis(o)))}; }},
      {"detcurve", "roots", {"beta", "n", "basis", "k", "seed"}, "Real roots of det along a random matrix curve",
       [](const Options& o) {
         const auto basis = make_basis(o);
         const EnsembleSpec spec{o.beta, o.n, 0};
         Stream st = Stream::for_trial(o.seed, 0);
         std::vector<HermitianMatrix> a;
         for (std::size_t j = 0; j < basis.size(); ++j) a.push_back(sample_matrix(spec, st));
         const auto r = count_roots(basis, a);
         return Outcome{{{"count", r.count},
                         {"roots", r.roots},
                         {"method", r.method == RootMethod::companion ? "companion" : "sign_scan"},
                         {"flagged", r.flagged}},
                        true};
       }},
      {"detcurve", "ratio", {"beta", "n", "basis", "k", "trials", "seed"}, "Mean root count against alpha1",
       [](const Options& o) {
         const auto basis = make_basis(o);
         const double a1 = alpha1(basis);
         const auto e = alpha_ratio_mc(basis, {o.beta, o.n, 0}, run_config(o));
         json extra{{"alpha1", a1},
                    {"ratio", e.mean / a1},
                    {"ratio_asymptotic", volume_ratio_asymptotic(o.n)}};
         if (o.beta == std::round(o.beta) && o.n >= 2)
           extra["ratio_exact"] = sigma_volume(exact_beta(o.beta), o.n).ratio_to_sphere.value();
         return estimate(e, extra);
       }},
      {"quadrics", "arcs", {"n", "seed"}, "Singular angles and index function of a random pencil", [](const Options& o) { return Outcome{arcs_json(seeded_pencil(o)), true}; }},
      {"quadrics", "table", {"n", "seed"}, "Index table and Betti bounds of a random pencil",
       [](const Options& o) {
         const auto a = seeded_pencil(o);
         json j = table_json(table_E_k2(a));
         j["mu"] = a.mu;
         j["nu"] = a.nu;
         j["card"] = a.card();
         return Outcome{j, true};
       }},
      {"quadrics", "betti", {"n", "seed"}, "Betti bounds with certified small indices",
       [](const Options& o) {
         const auto a = seeded_pencil(o);
         const auto t = table_E_k2(a);
         std::vector<json> small;
         std::vector<std::size_t> betti;
         for (std::size_t i = 0; i < t.n; ++i) {
           betti.push_back(betti_bound(t, i));
           const auto v = small_betti_value(a.mu, 2, a.n, i);
           small.push_back(v ? json(*v) : json(nullptr));
         }
         return Outcome{{{"betti", betti},
                         {"total_betti", total_betti(t)},
                         {"euler", euler_bound(t)},
                         {"certified", small},
                         {"mu", a.mu}},
                        true};
       }},
      {"quadrics", "mc-betti", {"n", "trials", "seed"}, "Mean total Betti bound over random pencils",
       [](const Options& o) { return estimate(expected_betti_mc(o.n, run_config(o))); }},
      {"quadrics", "mc-mu", {"k", "n", "trials", "seed", "grid"}, "Mean maximal index over random k-spans",
       [](const Options& o) {
         MuGrid g;
         g.directions = o.grid;
         return estimate(expected_mu_mc(o.k, o.n, run_config(o), g));
       }},
      {"quadrics", "worked-example", {}, "Pencil (I, [[0,1,1],[1,1,1],[1,1,0]]) with its index table",
       [](const Options&) {
         const auto a = example_pencil();
         json j = arcs_json(a);
         j["table"] = table_json(table_E_k2(a));
         j["b_E"] = total_betti(table_E_k2(a));
         return Outcome{j};
       }},
  };
}

json param_value(const Options& o, const std::string& key) {
  static const std::map<std::string, std::function<json(const Options&)>> get{
      {"beta", [](const Options& x) { return json(x.beta); }},
      {"n", [](const Options& x) { return json(x.n); }},
      {"k", [](const Options& x) { return json(x.k); }},
      {"eps", [](const Options& x) { return json(x.eps); }},
      {"power", [](const Options& x) { return json(x.power); }},
      {"trials", [](const Options& x) { return json(x.trials); }},
      {"seed", [](const Options& x) { return json(x.seed); }},
      {"basis", [](const Options& x) { return json(x.basis); }},
      {"curve", [](const Options& x) { return json(x.curve); }},
      {"grid", [](const Options& x) { return json(x.grid); }},
  };
  return get.at(key)(o);
}

void add_option(CLI::App* sc, Options& o, const std::string& key) {
  if (key == "beta") sc->add_option("--beta", o.beta, "Dyson index")->check(CLI::PositiveNumber);
  else if (key == "n") sc->add_option("--n", o.n, "Matrix size");
  else if (key == "k") sc->add_option("--k", o.k, "Degree or number of quadrics");
  else if (key == "eps") sc->add_option("--eps", o.eps, "Gap radius");
  else if (key == "power") sc->add_option("--power", o.power, "Exponent of |det|");
  else if (key == "trials") sc->add_option("--trials", o.trials, "Monte Carlo trials");
  else if (key == "seed") sc->add_option("--seed", o.seed, "Base seed");
  else if (key == "basis") sc->add_option("--basis", o.basis, "monomials or circle");
  else if (key == "curve") sc->add_option("--curve", o.curve, "cylinder or cone");
  else if (key == "grid") sc->add_option("--grid", o.grid, "Search directions for k = 3");
}

void write_csv_row(std::ostream& os, const json& result) {
  if (!result.is_object()) throw UsageError("csv output needs an object payload");
  std::string head, row;
  for (auto& [key, val] : result.items()) {
    if (val.is_structured()) throw UsageError("csv output is only available for scalar payloads");
    head += (head.empty() ? "" : ",") + key;
    row += (row.empty() ? "" : ",") + csv_value(val);
  }
  os << head << '\n' << row << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gaussian beta-ensemble gap, determinant and quadric experiments", "betagap"};
  app.require_subcommand(1);
  app.add_option("--out", o.out, "Write output here instead of stdout");
  auto* format = app.add_option("--format", o.format, "json or csv (sweeps default to csv)")
                     ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", o.threads, "Worker threads (default: BETAGAP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  const auto table = commands();
  std::map<std::string, CLI::App*> groups;
  std::vector<std::pair<CLI::App*, const Command*>> leaves;
  for (const auto& c : table) {
    auto& g = groups[c.group];
    if (!g) {
      g = app.add_subcommand(c.group, c.group + " commands");
      g->require_subcommand(1);
      g->fallthrough();
    }
    auto* leaf = g->add_subcommand(c.name, c.help);
    leaf->fallthrough();
    for (const auto& key : c.params)
      add_option(leaf, o, key);
    leaves.emplace_back(leaf, &c);
  }
  auto* sweep = app.add_subcommand("sweep", "Exact value against its large-n asymptotic over a range of n");
  sweep->fallthrough();
  sweep->add_option("--beta", o.beta, "Dyson index");
  sweep->add_option("--quantity", o.quantity, "gap-deriv or volume")->check(CLI::IsMember({"gap-deriv", "volume"}));
  sweep->add_option("--n-min", o.n_min, "First n");
  sweep->add_option("--n-max", o.n_max, "Last n");
  sweep->add_option("--n-step", o.n_step, "Step in n")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      err << "error: cannot write " << o.out << '\n';
      return 2;
    }
  }
  std::ostream& sink = o.out.empty() ? out : file;

  try {
    if (sweep->parsed()) {
      if (o.n_min < 1 || o.n_max < o.n_min) throw UsageError("need 1 <= n-min <= n-max");
      if (format->count() == 0) o.format = "csv";
      const int beta = exact_beta(o.beta);
      std::vector<RunRecord> records;
      if (o.format == "csv") sink << "n,exact,asymptotic,ratio\n";
      for (std::size_t n = std::max<std::size_t>(o.n_min, o.quantity == "volume" ? 2 : 1); n <= o.n_max;
           n += o.n_step) {
        const double ex = sweep_exact(o.quantity, beta, n), as = sweep_asymptotic(o.quantity, n);
        if (o.format == "csv") {
          sink << n << ',' << g17(ex) << ',' << g17(as) << ',' << g17(ex / as) << '\n';
          continue;
        }
        RunRecord r{"sweep",
                    {{"beta", o.beta}, {"quantity", o.quantity}, {"n", n}},
                    {{"n", n}, {"exact", ex}, {"asymptotic", as}, {"ratio", ex / as}},
                    std::nullopt,
                    utc_now(),
                    BETAGAP_VERSION,
                    0.0};
        records.push_back(std::move(r));
      }
      if (o.format == "json") sink << json(records).dump(2) << '\n';
      return 0;
    }
    for (const auto& [leaf, cmd] : leaves) {
      if (!leaf->parsed()) continue;
      WallTimer timer;
      const Outcome res = cmd->handler(o);
      RunRecord r;
      r.command = cmd->group + " " + cmd->name;
      for (const auto& key : cmd->params) r.params[key] = param_value(o, key);
      if (res.stochastic) {
        r.params["threads"] = o.threads;
        r.seed = o.seed;
      }
      r.result = res.result;
      r.timestamp = utc_now();
      r.version = BETAGAP_VERSION;
      r.wall_seconds = res.stochastic && res.wall_seconds > 0.0 ? res.wall_seconds : timer.seconds();
      if (o.format == "csv") write_csv_row(sink, r.result);
      else sink << json(r).dump(2) << '\n';
      return 0;
    }
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace betagap::cli
