#include "parashear/cli.hpp"

#include "parashear/algebras.hpp"
#include "parashear/continued_fraction.hpp"
#include "parashear/cq_witness.hpp"
#include "parashear/error.hpp"
#include "parashear/horoshear.hpp"
#include "parashear/json_io.hpp"
#include "parashear/lie.hpp"
#include "parashear/report.hpp"
#include "parashear/roof.hpp"
#include "parashear/sigma.hpp"
#include "parashear/skewflow.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace parashear::cli {

using nlohmann::json;

void emit_plot_data(const PlotSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t i = 0; i < series.columns.size(); ++i)
    out << (i ? "," : "") << series.columns[i];
  out << '\n' << std::setprecision(17);
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

struct Common {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  bool paper_literal = false;

  std::size_t samples_or(std::size_t fallback) const { return samples ? samples : fallback; }
};

/// What a subcommand produced; survives a thrown experiment error.
struct Outcome {
  json result = json::object();
  bool pass = false;
  std::string failure;
  std::vector<std::pair<std::string, PlotSeries>> plots;
};

std::string error_kind(const Error& e) {
#define PARASHEAR_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  PARASHEAR_KIND(WindowFail)
  PARASHEAR_KIND(NotFound)
  PARASHEAR_KIND(NoCrossing)
  PARASHEAR_KIND(NoQualifyingChain)
  PARASHEAR_KIND(WindowOutOfRange)
  PARASHEAR_KIND(OutOfChart)
  PARASHEAR_KIND(DegenerateInput)
  PARASHEAR_KIND(PreconditionViolated)
  PARASHEAR_KIND(PrecisionExhausted)
  PARASHEAR_KIND(NotNilpotent)
  PARASHEAR_KIND(DependentBasis)
  PARASHEAR_KIND(ExpmOverflow)
  PARASHEAR_KIND(SingularMatrix)
  PARASHEAR_KIND(DimensionMismatch)
  PARASHEAR_KIND(NonFiniteEntries)
  PARASHEAR_KIND(QuadratureError)
#undef PARASHEAR_KIND
  return "Error";
}

PlotSeries window_series(const WitnessReport& r) {
  PlotSeries s{{"L", "p_L", "fraction", "max_distance"}, {}};
  for (const auto& w : r.windows) s.rows.push_back({w.L, w.p_L, w.fraction, w.max_distance});
  return s;
}

void set_failure(Outcome& o, const WitnessReport& r, const std::string& label) {
  if (r.pass) return;
  std::ostringstream msg;
  msg << label << ": ";
  if (const auto* w = r.first_failing_window())
    msg << "window fraction " << w->fraction << " < 1 - eps at L = " << w->L;
  else if (!r.terminal_ok)
    msg << "terminal shift condition failed";
  else
    msg << "witness predicate failed";
  if (o.failure.empty()) o.failure = msg.str();
}

// chain-basis / gr

struct AlgebraArgs {
  std::string algebra;
  double conjugate = 0.0;
};

lie::AlgebraCase algebra_for(const AlgebraArgs& a, const Common& c) {
  auto alg = load_algebra(a.algebra);
  if (a.conjugate > 0.0) {
    std::mt19937_64 rng(c.seed);
    alg.generator = lie::conjugate(alg.generator, lie::random_element(alg.basis, a.conjugate, rng));
  }
  return alg;
}

void run_chain_basis(const AlgebraArgs& a, const Common& c, Outcome& o) {
  const auto alg = algebra_for(a, c);
  const auto cb = lie::chain_basis(alg.generator, alg.basis);
  o.result = chain_basis_to_json(cb);
  o.result["algebra"] = alg.name;
  o.result["gr"] = lie::gr_invariant(cb);
  const bool res_ok = cb.bracket_residual < 1e-10 && cb.centralizer_residual < 1e-10;
  const bool indep_ok = cb.min_singular_value > 1e-8;
  o.pass = res_ok && indep_ok;
  if (!res_ok) o.failure = "chain residual >= 1e-10";
  else if (!indep_ok) o.failure = "chain elements not independent (sigma_min <= 1e-8)";
}

void run_gr(const AlgebraArgs& a, const Common& c, Outcome& o) {
  const auto alg = algebra_for(a, c);
  const auto cb = lie::chain_basis(alg.generator, alg.basis);
  o.result = {{"algebra", alg.name}, {"gr", lie::gr_invariant(cb)}, {"lengths", cb.lengths()}};
  o.pass = true;
}

// cq-verify

struct CqArgs {
  std::string algebra = "sl2sl2";
  double epsilon = 0.0;
  std::int64_t N = 100;
  std::size_t L_grid = 20;
};

void run_cq(const CqArgs& a, const Common& c, Outcome& o) {
  const auto alg = load_algebra(a.algebra);
  const auto cb = lie::chain_basis(alg.generator, alg.basis);
  const auto [X0, X1] = cq::select_noncentral_chain(cb, alg.generator);
  const auto s = cq::make_schedule(a.epsilon, a.N, alg.generator, X0, X1);
  const auto r = cq::cq_replay(s, cq::default_L_grid(s, a.L_grid), c.samples_or(200));
  o.result = to_json(r);
  o.result["algebra"] = alg.name;
  o.result["gr"] = lie::gr_invariant(cb);
  o.plots.emplace_back("windows.csv", window_series(r));
  o.pass = r.pass;
  set_failure(o, r, "cq-verify");
}

// horo-shear

struct HoroArgs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  double t_max = 0.0;
  double N_eps = 10.0;
  double delta_prime = 1e-3;
  double c0 = 0.0;
  std::size_t grid = 20;
};

void run_horo(const HoroArgs& a, const Common& c, Outcome& o) {
  const horo::UXVCoords k{a.a, a.b, a.c};
  horo::HoroConfig cfg;
  cfg.paper_literal = c.paper_literal;
  cfg.N_eps = a.N_eps;
  cfg.delta_prime = a.delta_prime;
  cfg.c0 = a.c0;

  double t_max = a.t_max;
  std::optional<horo::ShearWitness> w;
  std::string crossing_error;
  try {
    w = horo::strong_r_witness(a.a, a.b, a.c, a.epsilon, cfg);
  } catch (const NoCrossing& e) {
    crossing_error = e.what();
  }
  if (!(t_max > 0.0)) t_max = w ? w->M : 1e3;

  const std::size_t n = std::max<std::size_t>(c.samples_or(1000), 2);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  const auto div = horo::verify_horocycle_divergence(SquareMatrix::identity(2), k, grid, true);
  PlotSeries ps{{"t", "D_raw", "D_comp", "f"}, {}};
  for (const auto& s : div.samples) ps.rows.push_back({s.t, s.d_raw, s.d_comp, s.f});
  o.plots.emplace_back("divergence.csv", std::move(ps));
  o.result["divergence"] = {{"t_max", t_max},
                            {"max_raw", div.max_raw},
                            {"max_comp", div.max_comp},
                            {"within_bound", div.within_bound}};

  if (!w) throw NoCrossing(crossing_error);
  const auto r = horo::horo_replay(k, *w, a.grid, c.samples_or(1000));
  o.result["witness"] = to_json(r);
  json pre = json::object();
  for (const auto& p : w->preconditions) pre[p.name] = p.held;
  o.result["preconditions"] = pre;
  o.plots.emplace_back("windows.csv", window_series(r));
  const bool f1_ok = r.residuals.at("f1_max_deviation") <= a.epsilon * a.epsilon;
  o.pass = r.pass && f1_ok;
  set_failure(o, r, "horo-shear");
  if (!f1_ok && o.failure.empty()) o.failure = "horo-shear: f1 deviation exceeds eps^2";
}

// sigma-model

struct SigmaArgs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  std::string model = "default";
  double delta_prime = 0.5;
  double kappa = 0.0;
  std::size_t axis_points = 22;
  std::size_t grid = 20;
};

void run_sigma(const SigmaArgs& a, const Common& c, Outcome& o) {
  const auto m = sigma::sigma_by_name(a.model);
  const auto ax = sigma::check_axioms(m, a.axis_points, a.epsilon);
  o.result["axioms"] = {{"points", ax.points},
                        {"scaling_failures", ax.scaling_failures},
                        {"window_failures", ax.window_failures},
                        {"halving_failures", ax.halving_failures},
                        {"monotone_failures", ax.monotone_failures},
                        {"zero_failures", ax.zero_failures},
                        {"worst_scaling_residual", ax.worst_scaling_residual},
                        {"worst_halving_ratio", ax.worst_halving_ratio},
                        {"ok", ax.ok()}};
  sigma::SigmaConfig cfg;
  cfg.delta_prime = a.delta_prime;
  cfg.paper_literal = c.paper_literal;
  cfg.kappa = a.kappa;
  cfg.grid_points = a.grid;
  cfg.samples = c.samples_or(200);
  const auto r = sigma::variable_strong_r_witness(m, a.a, a.b, a.c, a.epsilon, cfg);
  o.result["witness"] = to_json(r);
  o.plots.emplace_back("windows.csv", window_series(r));
  o.pass = ax.ok() && r.pass;
  if (!ax.ok()) o.failure = "sigma-model: axiom check failed";
  set_failure(o, r, "sigma-model");
}

// heis-shear

struct HeisArgs {
  std::string roof = "default";
  std::string roof_rows;
  std::string alpha = "golden";
  double beta = 0.0;
  double x = 0.1;
  double y = 0.2;
  double dx = 0.0;
  double dy = 1e-8;
  double s = 0.0;
  double ds = 0.0;
  double epsilon = 0.0;
  double kappa = 0.0;
  double delta = 0.0;
  double D0 = 1e3;
  double D_max = 1e5;
  std::int64_t max_iterations = std::int64_t{200'000'000};
  std::size_t grid = 20;
  std::size_t max_rows = 10000;
};

roof::RoofFunction parse_roof(const std::string& kind, const std::string& rows_text) {
  if (kind == "default") return roof::default_roof();
  if (kind.rfind("constant:", 0) == 0) {
    try {
      return roof::constant_roof(std::stod(kind.substr(9)));
    } catch (const std::logic_error&) {
      throw ConfigError("roof: bad constant in '" + kind + "'");
    }
  }
  if (kind != "rows") throw ConfigError("roof must be default, constant:<value> or rows");
  std::vector<std::array<double, 4>> rows;
  std::stringstream all(rows_text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::replace(item.begin(), item.end(), ',', ' ');
    std::istringstream in(item);
    std::array<double, 4> r{};
    if (!(in >> r[0] >> r[1] >> r[2] >> r[3])) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      throw ConfigError("roof-rows: expected 'm n re im' in '" + item + "'");
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ConfigError("roof-rows: no coefficient rows");
  return roof::roof_from_rows(rows);
}

void run_heis(const HeisArgs& a, const Common& c, Outcome& o) {
  const auto f = parse_roof(a.roof, a.roof_rows);
  const auto alpha = cf::parse_alpha(a.alpha);
  const auto cfe = cf::continued_fraction_partial(alpha, 30);
  const auto ss = torus::make_skew_shift(alpha, a.beta);
  const torus::TorusPoint p{torus::Phase::from_double(a.x), torus::Phase::from_double(a.y)};
  const torus::TorusPoint q{p.x + torus::Phase::from_double(a.dx), p.y + torus::Phase::from_double(a.dy)};

  skew::HeisConfig cfg;
  cfg.paper_literal = c.paper_literal;
  cfg.kappa = a.kappa;
  cfg.delta = a.delta;
  cfg.search.D0 = a.D0;
  cfg.search.D_max = a.D_max;
  cfg.search.max_iterations = a.max_iterations;
  cfg.grid_points = a.grid;
  cfg.window_samples = c.samples_or(1000);
  cfg.strict = false;

  o.result["roof"] = {{"mean", f.mean()}, {"floor", f.floor()}, {"ceiling", f.ceiling()}};
  o.result["bounded_type_depth30"] = cfe.partial_quotients.size() >= 30 && !cfe.terminated;
  o.result["max_partial_quotient"] = cfe.max_quotient();
  o.result["T"] = skew::shear_time_scale(p, q);

  const auto base = skew::heis_r1prime_witness(ss, f, p, q, a.epsilon, cfg);
  o.result["M_prime"] = base.M_prime;
  o.result["r1prime"] = to_json(base.report);
  o.result["r1a"] = base.r1a;
  o.result["r1b"] = base.r1b;
  const auto count = static_cast<std::int64_t>(base.a.size());
  const std::int64_t step = std::max<std::int64_t>(1, count / static_cast<std::int64_t>(std::max<std::size_t>(a.max_rows, 1)));
  PlotSeries shear{{"n", "a_n"}, {}};
  for (std::int64_t n = 0; n < count; n += step)
    shear.rows.push_back({static_cast<double>(n), base.a[static_cast<std::size_t>(n)]});
  o.plots.emplace_back("shear.csv", std::move(shear));
  o.plots.emplace_back("r1prime_windows.csv", window_series(base.report));
  if (!base.report.pass) {
    set_failure(o, base.report, "heis-shear R1'");
    return;
  }

  const skew::SpecialFlowPoint sp{p, a.s};
  const skew::SpecialFlowPoint sq{q, a.s + a.ds};
  const auto lift = skew::lift_strong_r(ss, f, sp, sq, a.epsilon, base, cfg);
  o.result["lift"] = to_json(lift);
  o.plots.emplace_back("windows.csv", window_series(lift));
  o.pass = lift.pass;
  set_failure(o, lift, "heis-shear lift");
}

// cf

struct CfArgs {
  std::string alpha = "golden";
  std::size_t depth = 30;
  std::uint64_t C = 0;
};

std::string real_text(const cf::Real& x) {
  std::ostringstream s;
  s << std::setprecision(40) << x;
  return s.str();
}

void run_cf(const CfArgs& a, const Common&, Outcome& o) {
  const auto alpha = cf::parse_alpha(a.alpha);
  const auto r = cf::continued_fraction(alpha, a.depth);
  o.result = {{"alpha", real_text(alpha)},
              {"partial_quotients", r.partial_quotients},
              {"q", r.q},
              {"terminated", r.terminated},
              {"max_quotient", r.max_quotient()}};
  if (a.C) o.result["bounded_type"] = r.bounded_type(a.C);
  o.pass = !r.terminated && (a.C == 0 || r.bounded_type(a.C));
  if (r.terminated) o.failure = "cf: expansion terminated, alpha is rational at working precision";
  else if (!o.pass) o.failure = "cf: a partial quotient exceeds C";
}

// witness

struct WitnessArgs {
  std::string report;
};

void collect_reports(const json& j, const std::string& where, std::vector<std::pair<std::string, const json*>>& out) {
  if (j.is_object()) {
    if (j.contains("windows") && j.contains("terminal_ok") && j.contains("epsilon")) out.emplace_back(where, &j);
    for (auto it = j.begin(); it != j.end(); ++it) collect_reports(*it, where + "/" + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_reports(j[i], where + "/" + std::to_string(i), out);
  }
}

void run_witness(const WitnessArgs& a, const Common&, Outcome& o) {
  std::ifstream in(a.report);
  if (!in) throw ConfigError("cannot open report " + a.report);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("report " + a.report + ": " + e.what());
  }
  if (doc.value("schema", 0) != kReportSchema) throw ConfigError("report schema is not " + std::to_string(kReportSchema));
  std::vector<std::pair<std::string, const json*>> found;
  collect_reports(doc, "", found);
  if (found.empty()) throw ConfigError("report contains no witness transcript");

  bool all_pass = true;
  bool consistent = true;
  json checked = json::array();
  for (const auto& [where, r] : found) {
    const double eps = r->at("epsilon").get<double>();
    bool ok = r->at("terminal_ok").get<bool>();
    for (const auto& w : r->at("windows")) ok = ok && w.at("fraction").get<double>() >= 1.0 - eps;
    const bool recorded = r->value("pass", false);
    // a recorded pass may be stricter than the window rule, never looser
    const bool agrees = !recorded || ok;
    consistent = consistent && agrees;
    all_pass = all_pass && ok && recorded;
    checked.push_back({{"path", where.empty() ? "/" : where}, {"recomputed_pass", ok}, {"recorded_pass", recorded}});
  }
  o.result = {{"checked", checked}, {"consistent", consistent}};
  o.pass = consistent && all_pass;
  if (!consistent) o.failure = "witness: recorded pass disagrees with the window transcript";
  else if (!all_pass) o.failure = "witness: a replayed transcript does not pass";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"parashear: shearing and witness experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  auto* config_opt = app.set_config("--config", "", "INI file, one [section] per subcommand; flags override it");

  Common common;
  app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for randomized inputs")->capture_default_str();
  app.add_option("--samples", common.samples, "Samples per window (0 keeps the subcommand default)");
  app.add_flag("--paper-literal", common.paper_literal, "Use the unscaled constants");

  std::map<std::string, std::function<void(Outcome&)>> handlers;

  AlgebraArgs cb_args;
  auto* cb = app.add_subcommand("chain-basis", "Chain basis of ad_W as JSON");
  cb->add_option("--algebra", cb_args.algebra, "sl2, sl3, sl2sl2, sl2+0 or file:<json>")->required();
  cb->add_option("--conjugate", cb_args.conjugate, "Radius of a random conjugation (uses --seed)");
  handlers["chain-basis"] = [&](Outcome& o) { run_chain_basis(cb_args, common, o); };

  AlgebraArgs gr_args;
  auto* gr = app.add_subcommand("gr", "GR invariant of the generator");
  gr->add_option("--algebra", gr_args.algebra, "sl2, sl3, sl2sl2, sl2+0 or file:<json>")->required();
  gr->add_option("--conjugate", gr_args.conjugate, "Radius of a random conjugation (uses --seed)");
  handlers["gr"] = [&](Outcome& o) { run_gr(gr_args, common, o); };

  CqArgs cq_args;
  auto* cq = app.add_subcommand("cq-verify", "Centralizer-direction window replay");
  cq->add_option("--algebra", cq_args.algebra)->capture_default_str();
  cq->add_option("--epsilon", cq_args.epsilon)->required();
  cq->add_option("--N", cq_args.N)->capture_default_str();
  cq->add_option("--L-grid", cq_args.L_grid, "Number of log-spaced L values")->capture_default_str();
  handlers["cq-verify"] = [&](Outcome& o) { run_cq(cq_args, common, o); };

  HoroArgs h_args;
  auto* horo = app.add_subcommand("horo-shear", "Horocycle shear witness and divergence series");
  horo->add_option("--a", h_args.a)->capture_default_str();
  horo->add_option("--b", h_args.b)->capture_default_str();
  horo->add_option("--c", h_args.c)->capture_default_str();
  horo->add_option("--epsilon", h_args.epsilon)->required();
  horo->add_option("--t-max", h_args.t_max, "Divergence horizon (0 means M)");
  horo->add_option("--N-eps", h_args.N_eps)->capture_default_str();
  horo->add_option("--delta-prime", h_args.delta_prime)->capture_default_str();
  horo->add_option("--c0", h_args.c0, "0 derives it");
  horo->add_option("--grid", h_args.grid)->capture_default_str();
  handlers["horo-shear"] = [&](Outcome& o) { run_horo(h_args, common, o); };

  SigmaArgs s_args;
  auto* sig = app.add_subcommand("sigma-model", "Synthetic shear function axioms and witness");
  sig->add_option("--a", s_args.a)->capture_default_str();
  sig->add_option("--b", s_args.b)->capture_default_str();
  sig->add_option("--c", s_args.c)->capture_default_str();
  sig->add_option("--epsilon", s_args.epsilon)->required();
  sig->add_option("--model", s_args.model)->capture_default_str();
  sig->add_option("--delta-prime", s_args.delta_prime)->capture_default_str();
  sig->add_option("--kappa", s_args.kappa, "0 derives it");
  sig->add_option("--axis-points", s_args.axis_points)->capture_default_str();
  sig->add_option("--grid", s_args.grid)->capture_default_str();
  handlers["sigma-model"] = [&](Outcome& o) { run_sigma(s_args, common, o); };

  HeisArgs he_args;
  auto* heis = app.add_subcommand("heis-shear", "Skew-shift special flow witness and lift");
  heis->add_option("--roof", he_args.roof, "default, constant:<v> or rows")->capture_default_str();
  heis->add_option("--roof-rows", he_args.roof_rows, "'m n re im; ...'");
  heis->add_option("--alpha", he_args.alpha)->capture_default_str();
  heis->add_option("--beta", he_args.beta)->capture_default_str();
  heis->add_option("--x", he_args.x)->capture_default_str();
  heis->add_option("--y", he_args.y)->capture_default_str();
  heis->add_option("--dx", he_args.dx)->capture_default_str();
  heis->add_option("--dy", he_args.dy)->capture_default_str();
  heis->add_option("--s", he_args.s, "Height of the first point")->capture_default_str();
  heis->add_option("--ds", he_args.ds, "Height offset of the second point")->capture_default_str();
  heis->add_option("--epsilon", he_args.epsilon)->required();
  heis->add_option("--kappa", he_args.kappa, "0 derives it");
  heis->add_option("--delta", he_args.delta, "0 derives it");
  heis->add_option("--D0", he_args.D0)->capture_default_str();
  heis->add_option("--D-max", he_args.D_max)->capture_default_str();
  heis->add_option("--max-iterations", he_args.max_iterations)->capture_default_str();
  heis->add_option("--grid", he_args.grid)->capture_default_str();
  heis->add_option("--max-rows", he_args.max_rows, "Row cap for shear.csv")->capture_default_str();
  handlers["heis-shear"] = [&](Outcome& o) { run_heis(he_args, common, o); };

  CfArgs cf_args;
  auto* cfc = app.add_subcommand("cf", "Continued fraction expansion");
  cfc->add_option("--alpha", cf_args.alpha)->capture_default_str();
  cfc->add_option("--depth", cf_args.depth)->capture_default_str();
  cfc->add_option("--C", cf_args.C, "Bounded-type constant (0 skips the check)");
  handlers["cf"] = [&](Outcome& o) { run_cf(cf_args, common, o); };

  WitnessArgs w_args;
  auto* wit = app.add_subcommand("witness", "Replay the window transcripts of a report");
  wit->add_option("--report", w_args.report)->required();
  handlers["witness"] = [&](Outcome& o) { run_witness(w_args, common, o); };

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  json config;
  config["args"] = args;
  config["seed"] = common.seed;
  config["file"] = config_opt->count() ? json(slurp(config_opt->as<std::string>())) : json(nullptr);

  Outcome o;
  json error = nullptr;
  try {
    handlers.at(name)(o);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n" << sub->help();
    return 2;
  } catch (const Error& e) {
    o.pass = false;
    o.failure = name + ": " + error_kind(e) + ": " + e.what();
    error = {{"type", error_kind(e)}, {"message", e.what()}};
    if (const auto* nf = dynamic_cast<const NotFound*>(&e)) error["max_reached"] = nf->max_reached();
    if (const auto* wf = dynamic_cast<const WindowFail*>(&e)) {
      error["L"] = wf->L();
      error["fraction"] = wf->fraction();
    }
  }

  try {
    const std::filesystem::path dir(common.out_dir);
    std::filesystem::create_directories(dir);
    json artifacts = json::object();
    for (const auto& [file, series] : o.plots) {
      emit_plot_data(series, dir / file);
      artifacts[file] = series.columns;
    }
    json body = {{"experiment", name}, {"config", config}, {"result", o.result},
                 {"artifacts", artifacts}, {"pass", o.pass}, {"error", error}};
    if (!o.failure.empty()) body["failure"] = o.failure;
    std::ofstream rep(dir / "report.json");
    rep << dump_report(body);
    if (!rep) throw Error("write failed for report.json");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (o.pass) {
    out << name << ": PASS\n";
    return 0;
  }
  out << name << ": FAIL\n";
  err << (o.failure.empty() ? name + ": failed" : o.failure) << "\n";
  return 1;
}

}  // namespace parashear::cli
