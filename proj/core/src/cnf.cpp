#include "satmdp/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "satmdp/errors.hpp"

namespace satmdp {

std::vector<int> Clause::variables() const {
  std::vector<int> vars;
  vars.reserve(literals.size());
  for (const auto& l : literals) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool Clause::has_distinct_vars() const { return variables().size() == literals.size(); }

Assignment::Assignment(int num_vars, std::int8_t fill) {
  if (num_vars < 0) throw ParameterError("assignment length must be non-negative");
  if (fill != 1 && fill != -1) throw ParameterError("assignment entries must be -1 or +1");
  bits_.assign(static_cast<std::size_t>(num_vars), fill);
}

Assignment::Assignment(std::vector<std::int8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b != 1 && b != -1) throw ParameterError("assignment entries must be -1 or +1");
}

Assignment Assignment::from_string(std::string_view bits) {
  std::vector<std::int8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c == '0' || c == 'F' || c == 'f') out.push_back(-1);
    else if (c == '1' || c == 'T' || c == 't') out.push_back(1);
    else throw ParameterError(std::string("bad assignment character '") + c + "'");
  }
  return Assignment(std::move(out));
}

std::string Assignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b > 0 ? '1' : '0');
  return s;
}

int hamming_distance(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw ParameterError("hamming_distance: length mismatch");
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

VarSet::VarSet(int universe, bool full)
    : universe_(universe), count_(0), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {
  if (universe < 0) throw ParameterError("VarSet universe must be non-negative");
  if (full)
    for (int i = 0; i < universe; ++i) insert(i);
}

void VarSet::insert(int i) {
  auto& w = words_[static_cast<std::size_t>(i) >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (!(w & bit)) {
    w |= bit;
    ++count_;
  }
}

void VarSet::erase(int i) {
  auto& w = words_[static_cast<std::size_t>(i) >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (w & bit) {
    w &= ~bit;
    --count_;
  }
}

int VarSet::lowest() const {
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k]) return static_cast<int>(k * 64) + __builtin_ctzll(words_[k]);
  return -1;
}

std::vector<int> VarSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (int i = 0; i < universe_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

Formula::Formula(int num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ < 1) throw ParameterError("formula needs at least one variable");
  if (clauses_.empty()) throw ParameterError("formula needs at least one clause");
  occ_.assign(static_cast<std::size_t>(num_vars_), {});
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    const auto& c = clauses_[j];
    if (c.literals.empty()) throw ParameterError("empty clause at index " + std::to_string(j));
    if (c.literals.size() > 3) throw ParameterError("clause longer than 3 at index " + std::to_string(j));
    for (const auto& l : c.literals)
      if (l.var < 0 || l.var >= num_vars_)
        throw ParameterError("variable out of range in clause " + std::to_string(j));
    for (int var : c.variables()) occ_[static_cast<std::size_t>(var)].push_back(static_cast<int>(j));
  }
}

bool Formula::is_strict_3cnf() const {
  return std::all_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.literals.size() == 3 && c.has_distinct_vars(); });
}

Formula parse_dimacs(std::istream& in, ParseMode mode) {
  std::string line;
  int lineno = 0;
  int v = -1;
  long declared = -1;
  std::vector<Clause> clauses;
  Clause cur;
  int cur_line = 0;
  bool done = false;

  auto finish_clause = [&](int at) {
    if (cur.literals.empty()) throw ParseError(at, "empty clause");
    if (mode == ParseMode::Strict && cur.literals.size() != 3)
      throw ParseError(at, "clause has " + std::to_string(cur.literals.size()) +
                               " literals; strict mode requires exactly 3");
    clauses.push_back(std::move(cur));
    cur = Clause{};
  };

  while (!done && std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    char c0 = line[first];
    if (c0 == 'c') continue;
    if (c0 == '%') break;
    if (c0 == 'p') {
      if (v >= 0) throw ParseError(lineno, "duplicate header");
      std::istringstream hs(line.substr(first));
      std::string p, fmt, extra;
      long hv = -1, hm = -1;
      if (!(hs >> p >> fmt >> hv >> hm) || p != "p" || fmt != "cnf" || (hs >> extra))
        throw ParseError(lineno, "malformed header, expected 'p cnf <v> <m>'");
      if (hv < 1 || hm < 1 || hv > (1 << 30) || hm > (1L << 40))
        throw ParseError(lineno, "malformed header: counts must be positive");
      v = static_cast<int>(hv);
      declared = hm;
      continue;
    }
    if (v < 0) throw ParseError(lineno, "clause before 'p cnf' header");
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      long lit;
      std::size_t used = 0;
      try {
        lit = std::stol(tok, &used);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad token '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError(lineno, "bad token '" + tok + "'");
      if (lit == 0) {
        finish_clause(cur_line ? cur_line : lineno);
        cur_line = 0;
        continue;
      }
      long var = lit < 0 ? -lit : lit;
      if (var > v) throw ParseError(lineno, "variable out of range: " + std::to_string(var));
      if (cur.literals.empty()) cur_line = lineno;
      if (cur.literals.size() == 3) throw ParseError(lineno, "clause longer than 3 literals");
      cur.literals.push_back(Literal{static_cast<int>(var - 1), lit < 0});
    }
  }
  if (v < 0) throw ParseError(0, "missing 'p cnf' header");
  if (!cur.literals.empty()) throw ParseError(cur_line, "clause not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared)
    throw ParseError(0, "header declares " + std::to_string(declared) + " clauses, found " +
                            std::to_string(clauses.size()));
  return Formula(v, std::move(clauses));
}

Formula parse_dimacs(std::string_view text, ParseMode mode) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, mode);
}

Formula read_dimacs_file(const std::filesystem::path& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_dimacs(in, mode);
}

std::string to_dimacs(const Formula& f, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "c " << comment << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const auto& c : f.clauses()) {
    for (const auto& l : c.literals) out << (l.negated ? -(l.var + 1) : l.var + 1) << ' ';
    out << "0\n";
  }
  return out.str();
}

bool literal_true(const Literal& lit, const Assignment& a) { return a.is_true(lit.var) != lit.negated; }

bool clause_satisfied(const Clause& c, const Assignment& a) {
  return std::any_of(c.literals.begin(), c.literals.end(),
                     [&](const Literal& l) { return literal_true(l, a); });
}

int satisfied_count(const Formula& f, const Assignment& a) {
  if (a.size() != f.num_vars()) throw ParameterError("assignment length does not match formula");
  int n = 0;
  for (const auto& c : f.clauses()) n += clause_satisfied(c, a);
  return n;
}

std::optional<int> first_eligible_clause(const Formula& f, const Assignment& a, const VarSet& free) {
  for (int j = 0; j < f.num_clauses(); ++j) {
    const auto& c = f.clause(j);
    if (clause_satisfied(c, a)) continue;
    if (std::all_of(c.literals.begin(), c.literals.end(),
                    [&](const Literal& l) { return free.contains(l.var); }))
      return j;
  }
  return std::nullopt;
}

int occurrence_bound(const Formula& f) {
  std::size_t best = 0;
  for (int x = 0; x < f.num_vars(); ++x) best = std::max(best, f.occurrences(x).size());
  return static_cast<int>(best);
}

int gap_threshold(double epsilon, int num_clauses) {
  return static_cast<int>(std::floor((1.0 - epsilon) * num_clauses + 1e-9));
}

namespace {

// Clause as bitmasks over the enumeration counter: variable i is bit v-1-i,
// so counting upward visits assignments in lexicographic order.
struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

std::vector<MaskClause> mask_clauses(const Formula& f, int limit) {
  if (f.num_vars() > limit)
    throw RefusalError("exhaustive search over " + std::to_string(f.num_vars()) +
                       " variables exceeds the limit of " + std::to_string(limit));
  if (f.num_vars() > 30) throw RefusalError("exhaustive search is capped at 30 variables");
  std::vector<MaskClause> out;
  out.reserve(f.clauses().size());
  const int v = f.num_vars();
  for (const auto& c : f.clauses()) {
    MaskClause mc;
    for (const auto& l : c.literals) (l.negated ? mc.neg : mc.pos) |= std::uint32_t{1} << (v - 1 - l.var);
    out.push_back(mc);
  }
  return out;
}

Assignment from_mask(std::uint32_t mask, int v) {
  Assignment a(v);
  for (int i = 0; i < v; ++i) a.set(i, (mask >> (v - 1 - i)) & 1U);
  return a;
}

}  // namespace

std::optional<Assignment> brute_force_sat(const Formula& f, int limit) {
  const auto cls = mask_clauses(f, limit);
  const std::uint32_t end = std::uint32_t{1} << f.num_vars();
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    bool ok = true;
    for (const auto& c : cls)
      if (!((mask & c.pos) | (~mask & c.neg))) {
        ok = false;
        break;
      }
    if (ok) return from_mask(mask, f.num_vars());
  }
  return std::nullopt;
}

MaxSatResult brute_force_max_sat(const Formula& f, int limit) {
  const auto cls = mask_clauses(f, limit);
  const int m = static_cast<int>(cls.size());
  const std::uint32_t end = std::uint32_t{1} << f.num_vars();
  int best = -1;
  std::uint32_t arg = 0;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    int n = 0;
    for (const auto& c : cls) n += ((mask & c.pos) | (~mask & c.neg)) != 0;
    if (n > best) {
      best = n;
      arg = mask;
      if (best == m) break;
    }
  }
  return {best, from_mask(arg, f.num_vars())};
}

}  // namespace satmdp
