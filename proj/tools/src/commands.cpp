#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "satmdp/agents.hpp"
#include "satmdp/cnf.hpp"
#include "satmdp/epsnet.hpp"
#include "satmdp/errors.hpp"
#include "satmdp/gapsat.hpp"
#include "satmdp/generators.hpp"
#include "satmdp/horizon_split.hpp"
#include "satmdp/mdp.hpp"
#include "satmdp/oracle.hpp"
#include "satmdp/reward.hpp"
#include "satmdp/toy_mdp.hpp"

namespace fs = std::filesystem;

namespace satmdp::cli {

namespace {

constexpr std::size_t kExactNodeBudget = 2'000'000;

ParseMode parse_mode(bool lenient) { return lenient ? ParseMode::Lenient : ParseMode::Strict; }

std::uint64_t resolve_seed(const CommonOptions& common, const json& cfg) {
  if (common.seed) return *common.seed;
  return cfg.at("seed").get<std::uint64_t>();
}

json params_json(const RewardParams& p) {
  return {{"p", p.p}, {"q", p.q}, {"alpha", p.alpha}, {"v", p.v}, {"h", p.h},
          {"H", p.H}, {"eps", p.epsilon}, {"b", p.b}};
}

json nullable(const std::optional<Assignment>& a) { return a ? json(a->to_string()) : json(nullptr); }

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() || it->is_null() ? fallback : it->get<T>();
}

// ---------------------------------------------------------------- gen

int run_gen(const CommonOptions& common, const GenArgs& args) {
  const json defaults = {{"p", 2},    {"q", 4},       {"alpha", 1.0 / 16.0}, {"rounds", nullptr},
                         {"eps", 0.25}, {"b", nullptr}, {"start", nullptr}};
  const json cfg = load_config(defaults, common.config_path);
  if (common.out.empty()) throw CliError("gen needs --out DIR");

  const Formula f = read_dimacs_file(args.cnf, parse_mode(args.lenient));
  const int v = f.num_vars();
  const int b_achieved = occurrence_bound(f);
  const int b = get_or(cfg, "b", std::max(3, b_achieved));
  const double eps = cfg.at("eps").get<double>();
  const auto rounds = get_or<std::int64_t>(cfg, "rounds", 0);
  const RewardParams params =
      rounds > 0 ? RewardParams::with_rounds(v, rounds, cfg.at("p"), cfg.at("q"), eps, b)
                 : RewardParams::make(v, cfg.at("p"), cfg.at("q"), cfg.at("alpha"), eps, b);
  params.validate();

  std::optional<Assignment> start;
  if (const auto s = get_or<std::string>(cfg, "start", ""); !s.empty()) {
    start = Assignment::from_string(s);
    if (start->size() != v) throw CliError("start has " + std::to_string(start->size()) + " bits, need " +
                                           std::to_string(v));
  }

  const auto wstar = brute_force_sat(f);
  const auto maxsat = wstar ? MaxSatResult{f.num_clauses(), *wstar} : brute_force_max_sat(f);
  const auto promise = check_gap_promise(f, eps);

  MdpInstance::Options opts;
  opts.wstar = wstar;
  opts.start = start;
  const MdpInstance inst = MdpInstance::build(f, params, opts);

  json instance = {{"schema", "satmdp.instance/1"},
                   {"kind", "sat"},
                   {"formula_file", "formula.cnf"},
                   {"v", v},
                   {"m", f.num_clauses()},
                   {"b_achieved", b_achieved},
                   {"occurrence_within_bound", b_achieved <= b},
                   {"params", params_json(params)},
                   {"d", inst.dimension()},
                   {"satisfiable", wstar.has_value()},
                   {"wstar", nullable(wstar)},
                   {"maxsat", {{"count", maxsat.count}, {"witness", maxsat.witness.to_string()}}},
                   {"promise", to_string(promise.kind)},
                   {"threshold", inst.gap_threshold()},
                   {"start", inst.start().to_string()},
                   {"reward_mode", wstar ? "full" : "zero_reward"}};

  const fs::path dir(common.out);
  fs::create_directories(dir);
  write_text_file(dir / "formula.cnf", to_dimacs(f));
  write_text_file(dir / "instance.json", instance.dump(2) + "\n");

  Report report("gen", common, cfg, 0);
  report.outcome() = instance;
  report.outcome()["bundle"] = dir.string();
  report.emit("");
  return kOk;
}

// ---------------------------------------------------------------- verify-claims

json range_section(const json& cfg, int jobs) {
  json out = {{"configurations", json::array()}};
  bool pass = true;
  for (int v : cfg.at("v").get<std::vector<int>>()) {
    for (const auto& c : cfg.at("configs")) {
      if (!c.is_object() || !c.contains("p") || !c.contains("q")) throw CliError("range.configs entries need p and q");
      const int p = c.at("p").is_string() && c.at("p") == "log" ? log_degree(v) : c.at("p").get<int>();
      const auto params = RewardParams::make(v, p, c.at("q"), cfg.at("alpha"), cfg.at("eps"), cfg.at("b"));
      const auto rep = verify_claim_range(params, jobs);
      json r = {{"params", params_json(params)},
                {"evaluations", rep.evaluations},
                {"violations", rep.violations},
                {"bounds_hold_through", rep.bounds_hold_through},
                {"pass", rep.pass},
                {"counterexample", nullptr}};
      if (rep.counterexample) {
        const auto& ce = *rep.counterexample;
        r["counterexample"] = {{"kind", ce.kind}, {"i", ce.i}, {"x", ce.x}, {"value", ce.value}, {"bound", ce.bound}};
      }
      pass = pass && rep.pass;
      out["configurations"].push_back(std::move(r));
    }
  }
  out["pass"] = pass;
  return out;
}

json step_section(const json& cfg, int jobs) {
  const auto rep = find_v_min(cfg.at("p"), cfg.at("q"), cfg.at("alpha"), cfg.at("eps"), cfg.at("b"),
                              cfg.at("v_max"), jobs);
  json runs = json::array();
  for (const auto& r : rep.runs) {
    json j = {{"v", r.params.v},
              {"h", r.params.h},
              {"comparisons", r.comparisons},
              {"violations", r.violations},
              {"pass", r.pass},
              {"counterexample", nullptr}};
    if (r.counterexample) {
      const auto& ce = *r.counterexample;
      j["counterexample"] = {{"i", ce.i}, {"c", ce.c}, {"d", ce.d}, {"x", ce.x}, {"lhs", ce.lhs}, {"rhs", ce.rhs}};
    }
    runs.push_back(std::move(j));
  }
  return {{"runs", runs}, {"v_min", rep.v_min ? json(*rep.v_min) : json(nullptr)}, {"pass", rep.v_min.has_value()}};
}

// <psi(s), theta(w*)> against the greedy value, and the greedy value against
// exhaustive DP, over every reachable state of planted instances.
json linearity_section(const json& cfg, std::uint64_t seed) {
  const int n = cfg.at("formulas");
  const int v_lo = cfg.at("v_min"), v_hi = cfg.at("v_max");
  const auto rounds = cfg.at("rounds").get<std::vector<std::int64_t>>();
  const double eps = cfg.at("eps"), tol = cfg.at("tolerance"), pf = cfg.at("positive_fraction");
  const int b = cfg.at("b"), p = cfg.at("p"), q = cfg.at("q");
  if (n < 1 || v_lo < 1 || v_hi < v_lo || rounds.empty()) throw CliError("bad linearity section");
  const int nv = v_hi - v_lo + 1;

  double lin_err = 0, opt_gap = 0;
  std::size_t states = 0;
  for (int k = 0; k < n; ++k) {
    const int v = v_lo + k % nv;
    const auto h = rounds[static_cast<std::size_t>(k / nv) % rounds.size()];
    const auto pl = gen::planted_formula_retry(v, v + 1, b, eps, seed + static_cast<std::uint64_t>(k), pf);
    const auto inst = MdpInstance::build(pl.formula, RewardParams::with_rounds(v, h, p, q, eps, b));
    SatMdpModel model(inst);
    const auto theta = theta_vector(*inst.wstar(), inst.feature_index());
    PolicyEvaluator greedy(model, greedy_policy(inst, *inst.wstar()));
    ExactDp dp(model);
    for (const auto& s : reachable_states(model)) {
      const MdpState st = decode_state(inst, s);
      const double val = st.terminal() ? 0.0 : greedy.value(s);
      lin_err = std::max(lin_err, std::abs(inner_product(features_state(inst, st), theta) - val));
      if (!st.terminal()) opt_gap = std::max(opt_gap, std::abs(dp.value(s) - val));
      ++states;
    }
  }
  return {{"formulas", n},
          {"states", states},
          {"max_linearity_error", lin_err},
          {"max_optimality_gap", opt_gap},
          {"pass", lin_err <= tol && opt_gap <= tol}};
}

int run_verify_claims(const CommonOptions& common) {
  const json defaults = {
      {"seed", 1000},
      {"range",
       {{"enabled", true},
        {"v", {10, 100, 1000}},
        {"configs", json::array({{{"p", 2}, {"q", 4}}, {{"p", "log"}, {"q", 2}}})},
        {"alpha", 1.0 / 16.0},
        {"eps", 0.25},
        {"b", 6}}},
      {"step",
       {{"enabled", true}, {"p", 2}, {"q", 4}, {"alpha", 1.0 / 16.0}, {"eps", 0.25}, {"b", 6}, {"v_max", 64}}},
      {"linearity",
       {{"enabled", true},
        {"formulas", 50},
        {"v_min", 4},
        {"v_max", 7},
        {"rounds", {2, 3}},
        {"p", 2},
        {"q", 4},
        {"eps", 0.1},
        {"b", 6},
        {"positive_fraction", 0.6},
        {"tolerance", 1e-8}}}};
  const json cfg = load_config(defaults, common.config_path);
  const std::uint64_t seed = resolve_seed(common, cfg);
  Report report("verify-claims", common, cfg, seed);
  bool pass = true;
  auto section = [&](const char* name, auto&& fn) {
    if (!cfg.at(name).at("enabled").get<bool>()) return;
    json s = fn(cfg.at(name));
    pass = pass && s.at("pass").get<bool>();
    report.outcome()[name] = std::move(s);
  };
  section("range", [&](const json& c) { return range_section(c, common.jobs); });
  section("step", [&](const json& c) { return step_section(c, common.jobs); });
  section("linearity", [&](const json& c) { return linearity_section(c, seed); });
  report.set_pass(pass);
  report.emit(common.out);
  return pass ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- run

// Model described by an instance file, plus what is known about its optimum.
struct LoadedInstance {
  std::optional<MdpInstance> sat;
  std::optional<Assignment> greedy_target;
  std::unique_ptr<TreeModel> model;
  json summary;
};

ToyTreeMdp::RewardShape parse_shape(const std::string& s) {
  if (s == "terminal_only") return ToyTreeMdp::RewardShape::TerminalOnly;
  if (s == "per_step") return ToyTreeMdp::RewardShape::PerStep;
  throw CliError("unknown toy shape " + s);
}

LoadedInstance load_instance(const std::string& path, const std::string& mode) {
  const json j = read_json_file(path);
  const std::string kind = j.value("kind", "");
  LoadedInstance out;
  if (kind == "toy") {
    if (!mode.empty()) throw CliError("--mode applies to SAT instances only");
    ToyTreeMdp::Config c;
    c.d = j.at("d");
    c.H = j.at("H");
    c.k = j.value("k", 3);
    c.shape = parse_shape(j.value("shape", "terminal_only"));
    c.deterministic = j.value("deterministic", false);
    c.noise = j.value("noise", 1.0);
    c.seed = j.value("seed", std::uint64_t{1});
    out.model = std::make_unique<ToyTreeMdp>(c);
    out.summary = {{"kind", "toy"}, {"d", c.d}, {"H", c.H}, {"k", c.k}};
    return out;
  }
  if (kind != "sat") throw CliError(path + ": kind must be \"sat\" or \"toy\"");
  const Formula f = read_dimacs_file(fs::path(path).parent_path() / j.at("formula_file").get<std::string>(),
                                     ParseMode::Lenient);
  const json& p = j.at("params");
  const auto params = RewardParams::with_rounds(f.num_vars(), p.at("h"), p.at("p"), p.at("q"), p.at("eps"), p.at("b"));
  MdpInstance::Options opts;
  if (!j.at("wstar").is_null()) opts.wstar = Assignment::from_string(j.at("wstar").get<std::string>());
  opts.start = Assignment::from_string(j.at("start").get<std::string>());
  if (mode.empty() || mode == "full")
    opts.mode = Mode::Full;
  else if (mode == "simulator")
    opts.mode = Mode::Simulator;
  else
    throw CliError("--mode must be full or simulator");
  opts.exhaustive_limit = 0;  // never search; the bundle already says whether w* exists
  out.greedy_target =
      opts.wstar ? opts.wstar : std::optional(Assignment::from_string(j.at("maxsat").at("witness").get<std::string>()));
  out.sat = MdpInstance::build(f, params, opts);
  out.model = std::make_unique<SatMdpModel>(*out.sat);
  out.summary = {{"kind", "sat"},
                 {"v", f.num_vars()},
                 {"m", f.num_clauses()},
                 {"H", params.H},
                 {"d", out.sat->dimension()},
                 {"mode", to_string(out.sat->mode())}};
  return out;
}

std::optional<double> try_value(const std::function<double()>& fn) {
  try {
    return fn();
  } catch (const RefusalError&) {
    return std::nullopt;
  }
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void write_trajectory(std::ofstream* out, int episode, const OracleTrajectory& t) {
  if (!out) return;
  for (std::size_t k = 0; k < t.actions.size(); ++k) {
    const json line = {{"episode", episode},
                       {"t", k},
                       {"state", hex_encode(t.states[k])},
                       {"action", t.actions[k]},
                       {"reward", t.rewards[k]},
                       {"next_state", hex_encode(t.states[k + 1])}};
    *out << line.dump() << '\n';
  }
}

int run_run(const CommonOptions& common, const RunArgs& args) {
  const json defaults = {{"algorithm", "greedy"}, {"eps", 0.1},     {"delta", 0.1},       {"seed", 1},
                         {"budget", 0},           {"episodes", 1},  {"sample_scale", 1.0}};
  json cfg = load_config(defaults, common.config_path);
  const std::uint64_t seed = resolve_seed(common, cfg);
  cfg["seed"] = seed;
  if (args.budget) cfg["budget"] = *args.budget;
  const std::string algo = cfg.at("algorithm");
  const double eps = cfg.at("eps"), delta = cfg.at("delta");
  const int episodes = cfg.at("episodes");
  if (episodes < 1) throw CliError("episodes must be positive");

  LoadedInstance li = load_instance(args.instance, args.mode);
  const TreeModel& model = *li.model;
  SimulatedOracle oracle(model, seed);
  if (const auto b = cfg.at("budget").get<std::uint64_t>()) oracle.set_query_budget(b);

  std::unique_ptr<std::ofstream> traj;
  if (!args.trajectories.empty()) {
    traj = std::make_unique<std::ofstream>(args.trajectories, std::ios::binary);
    if (!*traj) throw CliError("cannot write " + args.trajectories);
  }

  Report report("run", common, cfg, seed);
  json& out = report.outcome();
  out["instance"] = li.summary;
  out["algorithm"] = algo;
  const StateHandle root = model.initial_state();
  const auto optimal = try_value([&] { return ExactDp(model, kExactNodeBudget).value(root); });
  std::optional<double> policy_value;
  double estimate = 0;

  try {
    if (algo == "greedy" || algo == "random") {
      PolicyFn policy;
      CounterRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      if (algo == "greedy") {
        if (!li.sat) throw CliError("greedy needs a SAT instance");
        const MdpInstance& inst = *li.sat;
        const Assignment target = *li.greedy_target;
        policy = [&inst, target](const StateHandle& h) {
          return greedy_action_lenient(inst, decode_state(inst, h), target);
        };
        policy_value = try_value([&] { return PolicyEvaluator(model, policy, kExactNodeBudget).value(root); });
      } else {
        const int k = model.num_actions();
        policy = [&rng, k](const StateHandle&) { return static_cast<int>(rng.below(static_cast<std::uint64_t>(k))); };
      }
      double total = 0;
      for (int e = 0; e < episodes; ++e) {
        const auto t = rollout(oracle, policy);
        for (double r : t.rewards) total += r;
        write_trajectory(traj.get(), e, t);
      }
      estimate = total / episodes;
    } else if (algo == "eps_net") {
      EpsNetOptions o;
      o.eps = eps;
      o.delta = delta;
      const auto res = epsilon_net_search(oracle, o);
      estimate = res.value_estimate;
      policy_value = path_value(model, root, res.actions);
      out["actions"] = res.actions;
      out["cover_size"] = res.cover_size;
      out["distinct_policies"] = res.distinct_policies;
      out["samples_per_policy"] = res.samples_per_policy;
    } else if (algo == "horizon_split") {
      HorizonSplitOptions o;
      o.sample_scale = cfg.at("sample_scale");
      const auto res = horizon_split_policy(oracle, eps, delta, o);
      estimate = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < model.num_actions(); ++a) estimate = std::max(estimate, res.q.at({root, a}));
      policy_value = path_value(model, root, res.actions);
      out["actions"] = res.actions;
      out["reward_samples"] = res.reward_samples;
      std::size_t basis = 0;
      for (const auto& l : res.levels) basis = std::max(basis, l.basis_size);
      out["max_basis_size"] = basis;
    } else {
      throw CliError("unknown algorithm " + algo);
    }
  } catch (const RefusalError& e) {
    out["refused"] = e.what();
    out["queries"] = counters_json(oracle.counters());
    report.set_pass(false);
    report.emit(common.out);
    return kRefused;
  }

  out["value_estimate"] = estimate;
  out["policy_value"] = opt_json(policy_value);
  out["optimal_value"] = opt_json(optimal);
  out["queries"] = counters_json(oracle.counters());
  // Planning algorithms promise eps-optimality; check it when both values are known.
  bool pass = true;
  if ((algo == "eps_net" || algo == "horizon_split") && policy_value && optimal) {
    out["suboptimality"] = *optimal - *policy_value;
    pass = *optimal - *policy_value <= eps;
  }
  report.set_pass(pass);
  report.emit(common.out);
  return pass ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- reduce

int run_reduce(const CommonOptions& common, const ReduceArgs& args) {
  const json defaults = {{"algorithm", "greedy"}, {"episodes", 5}, {"rounds", 2}, {"p", 2},      {"q", 4},
                         {"eps", 0.25},           {"b", nullptr},  {"seed", 1},   {"budget", 0}};
  json cfg = load_config(defaults, common.config_path);
  const std::uint64_t seed = resolve_seed(common, cfg);
  cfg["seed"] = seed;
  if (args.budget) cfg["budget"] = *args.budget;

  const Formula f = read_dimacs_file(args.cnf, parse_mode(args.lenient));
  const int b = get_or(cfg, "b", std::max(3, occurrence_bound(f)));
  const auto params = RewardParams::with_rounds(f.num_vars(), cfg.at("rounds"), cfg.at("p"), cfg.at("q"),
                                                cfg.at("eps"), b);
  const std::string algo = cfg.at("algorithm");
  RlAlgorithm learner;
  if (algo == "greedy") {
    // Stand-in learner steered by an exhaustively found target.
    const auto sat = brute_force_sat(f);
    learner = greedy_learner(sat ? *sat : brute_force_max_sat(f).witness);
  } else if (algo == "random") {
    learner = random_learner(seed, cfg.at("episodes"));
  } else {
    throw CliError("reduce supports greedy and random learners");
  }

  const auto res = a_sat(f, params, learner, cfg.at("budget"), seed);
  Report report("reduce", common, cfg, seed);
  json& out = report.outcome();
  out["answer"] = to_string(res.answer);
  out["witness"] = nullable(res.witness);
  out["witness_satisfied"] = res.witness ? json(satisfied_count(f, *res.witness)) : json(nullptr);
  out["threshold"] = gap_threshold(params.epsilon, f.num_clauses());
  out["params"] = params_json(params);
  out["queries"] = counters_json(res.queries);
  out["budget_exhausted"] = res.budget_exhausted;
  out["states_seen"] = res.states_seen;
  report.emit(common.out);
  return kOk;
}

// ---------------------------------------------------------------- transform

std::optional<int> try_count(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const RefusalError&) {
    return std::nullopt;
  }
}

int run_transform(const CommonOptions& common, const TransformArgs& args) {
  json cfg = load_config({{"b", 6}}, common.config_path);
  if (args.b) cfg["b"] = *args.b;
  if (common.out.empty()) throw CliError("transform needs --out FILE");
  const int b = cfg.at("b");

  const Formula f = read_dimacs_file(args.cnf, parse_mode(args.lenient));
  const auto t = bounded_occurrence_transform_full(f, b);
  write_text_file(common.out, to_dimacs(t.formula));

  const int m_in = f.num_clauses(), m_out = t.formula.num_clauses();
  const auto max_in = try_count([&] { return brute_force_max_sat(f).count; });
  const auto max_out = try_count([&] { return transformed_max_sat(t).count; });
  const double ratio = static_cast<double>(m_out) / m_in;
  const auto padding = std::count(t.origin.begin(), t.origin.end(), -1);

  Report report("transform", common, cfg, 0);
  json& out = report.outcome();
  out["b"] = b;
  out["b_achieved"] = occurrence_bound(t.formula);
  out["input"] = {{"v", f.num_vars()}, {"m", m_in}};
  out["output"] = {{"v", t.formula.num_vars()}, {"m", m_out}, {"padding_vars", padding}, {"file", common.out}};
  out["split_vars"] = t.split_vars;
  out["size_ratio"] = ratio;
  out["maxsat_in"] = max_in ? json(*max_in) : json(nullptr);
  out["maxsat_out"] = max_out ? json(*max_out) : json(nullptr);

  json checks = {{"occurrence_bound", occurrence_bound(t.formula) <= b},
                 {"size_ratio", ratio <= kTransformSizeConstant},
                 {"satisfiability_preserved", nullptr},
                 {"maxsat_deficit", nullptr}};
  if (max_in && max_out) {
    checks["satisfiability_preserved"] = (*max_in == m_in) == (*max_out == m_out);
    // Unsatisfied clauses must not shrink: max(out) <= max(in) + |out| - |in|.
    checks["maxsat_deficit"] = *max_out <= *max_in + m_out - m_in;
  }
  bool pass = true;
  for (const auto& [k, v] : checks.items())
    if (v.is_boolean()) pass = pass && v.get<bool>();
  out["checks"] = checks;
  report.set_pass(pass);
  report.emit(args.report);
  return pass ? kOk : kVerifyFailed;
}

}  // namespace

int cmd_gen(const CommonOptions& c, const GenArgs& a) { return run_gen(c, a); }
int cmd_verify_claims(const CommonOptions& c) { return run_verify_claims(c); }
int cmd_run(const CommonOptions& c, const RunArgs& a) { return run_run(c, a); }
int cmd_reduce(const CommonOptions& c, const ReduceArgs& a) { return run_reduce(c, a); }
int cmd_transform(const CommonOptions& c, const TransformArgs& a) { return run_transform(c, a); }

}  // namespace satmdp::cli
