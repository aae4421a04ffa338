#include "satmdp/mdp.hpp"

#include <algorithm>
#include <cmath>

#include "satmdp/errors.hpp"

namespace satmdp {

const char* to_string(Mode m) { return m == Mode::Full ? "full" : "simulator"; }

const char* to_string(Stage s) {
  switch (s) {
    case Stage::One: return "one";
    case Stage::Two: return "two";
    case Stage::Terminal: return "terminal";
  }
  return "?";
}

const char* to_string(TerminalKind k) {
  switch (k) {
    case TerminalKind::None: return "none";
    case TerminalKind::GapSatisfied: return "gap_satisfied";
    case TerminalKind::LastLevel: return "last_level";
  }
  return "?";
}

MdpInstance MdpInstance::build(Formula f, const RewardParams& params, Options opts) {
  params.validate();
  const int v = f.num_vars();
  if (!f.is_strict_3cnf())
    throw ParameterError("MDP construction needs every clause to have three distinct variables");
  if (f.num_clauses() < v)
    throw ParameterError("MDP construction needs at least as many clauses as variables (m >= v)");
  if (occurrence_bound(f) > params.b)
    throw ParameterError("occurrence bound " + std::to_string(occurrence_bound(f)) + " exceeds b = " +
                         std::to_string(params.b));
  if (params.v != v) throw ParameterError("parameter v does not match the formula");

  MdpInstance inst;
  inst.params_ = params;
  inst.mode_ = opts.mode;
  inst.threshold_ = satmdp::gap_threshold(params.epsilon, f.num_clauses());
  inst.start_ = opts.start ? *opts.start : Assignment(v, -1);
  if (inst.start_.size() != v) throw ParameterError("start assignment length does not match the formula");
  if (opts.wstar) {
    if (opts.wstar->size() != v) throw ParameterError("w* length does not match the formula");
    if (satisfied_count(f, *opts.wstar) != f.num_clauses())
      throw ParameterError("w* does not satisfy the formula");
    inst.wstar_ = opts.wstar;
  } else if (opts.mode == Mode::Full) {
    if (v > opts.exhaustive_limit)
      throw RefusalError("no w* given and v = " + std::to_string(v) +
                         " exceeds the exhaustive limit; rewards cannot be defined");
    inst.wstar_ = brute_force_sat(f, opts.exhaustive_limit);
  }
  inst.dimension_ = feature_dimension(v, 2 * params.p);
  inst.formula_ = std::make_shared<const Formula>(std::move(f));
  if (v <= 64 && inst.dimension_ <= (std::uint64_t{1} << 22))
    inst.index_ = std::make_shared<const FeatureIndex>(v, 2 * params.p);
  return inst;
}

const FeatureIndex& MdpInstance::feature_index() const {
  if (!index_) throw RefusalError("feature dimension " + std::to_string(dimension_) + " is too large");
  return *index_;
}

MdpInstance MdpInstance::with_mode(Mode m) const {
  MdpInstance out = *this;
  out.mode_ = m;
  return out;
}

MdpInstance MdpInstance::with_wstar(std::optional<Assignment> wstar) const {
  if (wstar && satisfied_count(*formula_, *wstar) != formula_->num_clauses())
    throw ParameterError("w* does not satisfy the formula");
  MdpInstance out = *this;
  out.wstar_ = std::move(wstar);
  return out;
}

namespace {

void put_u32(std::string& out, std::uint32_t x) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((x >> (8 * k)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t& pos) {
  if (pos + 4 > in.size()) throw ParameterError("truncated state encoding");
  std::uint32_t x = 0;
  for (int k = 0; k < 4; ++k) x |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos++])) << (8 * k);
  return x;
}

void put_bits(std::string& out, int n, auto&& bit) {
  for (int base = 0; base < n; base += 8) {
    unsigned char byte = 0;
    for (int k = 0; k < 8 && base + k < n; ++k)
      if (bit(base + k)) byte |= static_cast<unsigned char>(1U << k);
    out.push_back(static_cast<char>(byte));
  }
}

std::vector<bool> get_bits(const std::string& in, std::size_t& pos, int n) {
  std::vector<bool> bits(static_cast<std::size_t>(n));
  for (int base = 0; base < n; base += 8) {
    if (pos >= in.size()) throw ParameterError("truncated state encoding");
    const auto byte = static_cast<unsigned char>(in[pos++]);
    for (int k = 0; k < 8 && base + k < n; ++k) bits[static_cast<std::size_t>(base + k)] = (byte >> k) & 1U;
  }
  return bits;
}

int lit_true(const Literal& l, const Assignment& w) { return w.is_true(l.var) != l.negated; }

void count_satisfaction(const Formula& f, MdpState& s) {
  s.true_lits.assign(static_cast<std::size_t>(f.num_clauses()), 0);
  s.satisfied = 0;
  for (int j = 0; j < f.num_clauses(); ++j) {
    int t = 0;
    for (const auto& l : f.clause(j).literals) t += lit_true(l, s.w);
    s.true_lits[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(t);
    s.satisfied += t > 0;
  }
}

void flip_tracked(const Formula& f, MdpState& s, int var) {
  s.w.flip(var);
  for (int j : f.occurrences(var)) {
    auto& t = s.true_lits[static_cast<std::size_t>(j)];
    const int before = t;
    for (const auto& l : f.clause(j).literals)
      if (l.var == var) t = static_cast<std::uint8_t>(t + (lit_true(l, s.w) ? 1 : -1));
    s.satisfied += (t > 0) - (before > 0);
  }
}

bool eligible(const Formula& f, const MdpState& s, int j) {
  if (s.true_lits[static_cast<std::size_t>(j)] > 0) return false;
  for (const auto& l : f.clause(j).literals)
    if (!s.free.contains(l.var)) return false;
  return true;
}

// Sets stage and cursor for a non-terminal state; eligibility only shrinks
// within a round, so scanning resumes from `from`.
void assign_stage(const Formula& f, MdpState& s, int from) {
  if (s.stage != Stage::Two) {
    for (int j = std::max(0, from); j < f.num_clauses(); ++j)
      if (eligible(f, s, j)) {
        s.stage = Stage::One;
        s.cursor = j;
        return;
      }
  }
  s.stage = Stage::Two;
  s.cursor = s.free.lowest();
}

}  // namespace

std::string MdpState::encode() const {
  std::string out;
  out.reserve(16 + static_cast<std::size_t>(w.size()) * 3 / 8 + round_dists.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(n));
  out.push_back(static_cast<char>(static_cast<unsigned>(stage) | (static_cast<unsigned>(kind) << 4)));
  put_u32(out, static_cast<std::uint32_t>(cursor));
  const int v = w.size();
  put_bits(out, v, [&](int i) { return w.is_true(i); });
  put_bits(out, v, [&](int i) { return free.contains(i); });
  put_bits(out, v, [&](int i) { return w_round.is_true(i); });
  put_u32(out, static_cast<std::uint32_t>(round_dists.size()));
  for (int d : round_dists) put_u32(out, static_cast<std::uint32_t>(d));
  return out;
}

std::string hex_encode(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string MdpState::digest() const { return hex_encode(encode()); }

int MdpState::within_round_distance() const { return hamming_distance(w_round, w); }

MdpState initial_state(const MdpInstance& inst) {
  const auto& f = inst.formula();
  MdpState s;
  s.n = 1;
  s.w = inst.start();
  s.w_round = inst.start();
  s.free = VarSet(f.num_vars(), true);
  s.step = 0;
  count_satisfaction(f, s);
  if (s.satisfied > inst.gap_threshold()) {
    s.stage = Stage::Terminal;
    s.kind = TerminalKind::GapSatisfied;
    s.cursor = -1;
    return s;
  }
  s.stage = Stage::One;
  assign_stage(f, s, 0);
  return s;
}

MdpState decode_state(const MdpInstance& inst, const std::string& bytes) {
  const auto& f = inst.formula();
  const int v = f.num_vars();
  std::size_t pos = 0;
  MdpState s;
  s.n = get_u32(bytes, pos);
  if (pos >= bytes.size()) throw ParameterError("truncated state encoding");
  const auto tag = static_cast<unsigned char>(bytes[pos++]);
  s.stage = static_cast<Stage>(tag & 15);
  s.kind = static_cast<TerminalKind>(tag >> 4);
  s.cursor = static_cast<int>(get_u32(bytes, pos));
  auto wb = get_bits(bytes, pos, v);
  auto fb = get_bits(bytes, pos, v);
  auto rb = get_bits(bytes, pos, v);
  s.w = Assignment(v);
  s.w_round = Assignment(v);
  s.free = VarSet(v);
  for (int i = 0; i < v; ++i) {
    s.w.set(i, wb[static_cast<std::size_t>(i)]);
    s.w_round.set(i, rb[static_cast<std::size_t>(i)]);
    if (fb[static_cast<std::size_t>(i)]) s.free.insert(i);
  }
  const std::uint32_t k = get_u32(bytes, pos);
  if (k > static_cast<std::uint32_t>(inst.params().h)) throw ParameterError("corrupt state encoding");
  for (std::uint32_t t = 0; t < k; ++t) s.round_dists.push_back(static_cast<int>(get_u32(bytes, pos)));
  if (pos != bytes.size()) throw ParameterError("trailing bytes in state encoding");
  if (s.n < 1 || s.n > inst.params().h || static_cast<std::int64_t>(k) != s.n - 1)
    throw ParameterError("corrupt state encoding");
  s.step = (s.n - 1) * v + (v - s.free.size());
  count_satisfaction(f, s);
  return s;
}

std::vector<int> offered_variables(const MdpInstance& inst, const MdpState& s) {
  if (s.terminal()) throw UsageError("terminal state offers no variables");
  if (s.stage == Stage::One) return inst.formula().clause(s.cursor).variables();
  return {s.cursor, s.cursor, s.cursor};
}

MdpState transition(const MdpInstance& inst, const MdpState& s, int action) {
  if (s.terminal()) throw UsageError("transition from a terminal state");
  if (action < 0 || action >= kNumActions) throw UsageError("action outside {0, 1, 2}");
  const auto& f = inst.formula();
  const int v = f.num_vars();
  MdpState t = s;
  int var;
  if (s.stage == Stage::One) {
    var = f.clause(s.cursor).variables()[static_cast<std::size_t>(action)];
    flip_tracked(f, t, var);
  } else {
    var = s.cursor;
    if (action == 1) flip_tracked(f, t, var);
  }
  t.free.erase(var);
  t.step = s.step + 1;

  if (t.satisfied > inst.gap_threshold()) {
    t.stage = Stage::Terminal;
    t.kind = TerminalKind::GapSatisfied;
    t.cursor = -1;
    return t;
  }
  if (t.free.empty()) {
    if (t.n == inst.params().h) {
      t.stage = Stage::Terminal;
      t.kind = TerminalKind::LastLevel;
      t.cursor = -1;
      return t;
    }
    t.round_dists.push_back(hamming_distance(t.w_round, t.w));
    t.n += 1;
    t.w_round = t.w;
    t.free = VarSet(v, true);
    t.stage = Stage::One;
    assign_stage(f, t, 0);
    return t;
  }
  assign_stage(f, t, s.stage == Stage::One ? s.cursor : 0);
  return t;
}

ExtDistances ext_distances(const MdpState& s, const Assignment& wstar) {
  ExtDistances d;
  for (int i = 0; i < s.w.size(); ++i) {
    if (s.free.contains(i)) d.free += s.w[i] != wstar[i];
    else d.used += s.w[i] != wstar[i];
  }
  d.within = s.within_round_distance();
  return d;
}

namespace {

double terminal_value(const MdpInstance& inst, const MdpState& t) {
  const auto d = ext_distances(t, *inst.wstar());
  return expected_reward(t.round_dists, t.n, d.within, d.free, d.used, inst.params());
}

}  // namespace

double exact_expected_reward(const MdpInstance& inst, const MdpState& terminal) {
  if (!terminal.terminal()) throw UsageError("exact_expected_reward needs a terminal state");
  if (inst.mode() != Mode::Full) throw UsageError("exact_expected_reward is defined for Full mode only");
  if (!inst.wstar()) throw UsageError("exact_expected_reward needs w* (unsatisfiable instances have no reward)");
  return terminal_value(inst, terminal);
}

double reward_mean_on_entry(const MdpInstance& inst, const MdpState& next) {
  if (!next.terminal() || !inst.wstar()) return 0.0;
  if (inst.mode() == Mode::Simulator && next.kind == TerminalKind::LastLevel) return 0.0;
  return terminal_value(inst, next);
}

double reward_mean(const MdpInstance& inst, const MdpState& s, int action) {
  return reward_mean_on_entry(inst, transition(inst, s, action));
}

MultilinearPoly greedy_value_poly(const MdpInstance& inst, const MdpState& s) {
  return value_poly(inst.params(), s.round_dists, s.n, s.within_round_distance(), s.w, s.free);
}

FeatureVector features_state(const MdpInstance& inst, const MdpState& s) {
  const auto& index = inst.feature_index();
  if (s.terminal()) return FeatureVector(index.dimension(), 0.0);
  return to_feature_vector(greedy_value_poly(inst, s), index);
}

FeatureVector features_state_action(const MdpInstance& inst, const MdpState& s, int action) {
  const auto& index = inst.feature_index();
  return to_feature_vector(greedy_value_poly(inst, transition(inst, s, action)), index);
}

int stage_one_floor(const MdpInstance& inst, const Assignment& round_start) {
  const auto& f = inst.formula();
  if (satisfied_count(f, round_start) > inst.gap_threshold())
    throw UsageError("round start already exceeds the gap threshold; the MDP would have terminated");
  return static_cast<int>(std::ceil(inst.params().epsilon * f.num_clauses() / inst.params().b - 1e-9));
}

double Trajectory::total_reward() const {
  double s = 0;
  for (const auto& st : steps) s += st.reward;
  return s;
}

OracleSession::OracleSession(const MdpInstance& inst, std::uint64_t seed) : inst_(&inst), rng_(seed) {}

MdpState OracleSession::initial() { return initial_state(*inst_); }

MdpState OracleSession::transition(const MdpState& s, int action) {
  ++transitions_;
  return satmdp::transition(*inst_, s, action);
}

int OracleSession::sample_reward(const MdpState& s, int action) {
  ++rewards_;
  const double mean = reward_mean(*inst_, s, action);
  return mean > 0.0 && rng_.bernoulli(mean) ? 1 : 0;
}

FeatureVector OracleSession::features(const MdpState& s) {
  ++features_;
  return features_state(*inst_, s);
}

FeatureVector OracleSession::features(const MdpState& s, int action) {
  ++features_;
  return features_state_action(*inst_, s, action);
}

}  // namespace satmdp
