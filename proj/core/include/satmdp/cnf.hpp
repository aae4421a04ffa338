#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace satmdp {

inline constexpr int kDefaultExhaustiveLimit = 24;

struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;

  // Distinct variables in ascending order.
  std::vector<int> variables() const;
  bool has_distinct_vars() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Truth assignment as a vector over {-1, +1}; -1 is false, +1 is true.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars, std::int8_t fill = -1);
  explicit Assignment(std::vector<std::int8_t> bits);

  // "01101" style; '1' is true.
  static Assignment from_string(std::string_view bits);
  std::string to_string() const;

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  std::int8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  bool is_true(int i) const { return bits_[static_cast<std::size_t>(i)] > 0; }
  void set(int i, bool value) { bits_[static_cast<std::size_t>(i)] = value ? 1 : -1; }
  void flip(int i) { bits_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-bits_[static_cast<std::size_t>(i)]); }
  const std::vector<std::int8_t>& bits() const noexcept { return bits_; }

  // Lexicographic with false < true, variable 0 most significant.
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> bits_;
};

int hamming_distance(const Assignment& a, const Assignment& b);

// Fixed-size set of variable indices.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(int universe, bool full = false);

  int universe() const noexcept { return universe_; }
  int size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool contains(int i) const { return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U; }
  void insert(int i);
  void erase(int i);
  // Smallest member, or -1 when empty.
  int lowest() const;
  std::vector<int> members() const;
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  int universe_ = 0;
  int count_ = 0;
  std::vector<std::uint64_t> words_;
};

class Formula {
 public:
  // Validates variable ranges, non-empty clauses of at most 3 literals, and
  // m >= 1; builds the occurrence index.
  Formula(int num_vars, std::vector<Clause> clauses);

  int num_vars() const noexcept { return num_vars_; }
  int num_clauses() const noexcept { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const Clause& clause(int j) const { return clauses_[static_cast<std::size_t>(j)]; }
  // Clause indices containing `var`, ascending, each clause listed once.
  std::span<const int> occurrences(int var) const { return occ_[static_cast<std::size_t>(var)]; }

  // Every clause has exactly three literals over three distinct variables.
  bool is_strict_3cnf() const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  int num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> occ_;
};

enum class ParseMode {
  Strict,   // exactly three literals per clause
  Lenient,  // one to three literals per clause
};

Formula parse_dimacs(std::istream& in, ParseMode mode = ParseMode::Strict);
Formula parse_dimacs(std::string_view text, ParseMode mode = ParseMode::Strict);
Formula read_dimacs_file(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
std::string to_dimacs(const Formula& f, std::string_view comment = {});

bool literal_true(const Literal& lit, const Assignment& a);
bool clause_satisfied(const Clause& c, const Assignment& a);
int satisfied_count(const Formula& f, const Assignment& a);

// Lowest-index clause that is unsatisfied under `a` and whose variables all
// lie in `free`.
std::optional<int> first_eligible_clause(const Formula& f, const Assignment& a, const VarSet& free);

int occurrence_bound(const Formula& f);

// Largest satisfied-clause count that still leaves at least an
// epsilon-fraction unsatisfied, i.e. floor((1 - epsilon) * m). "More than a
// (1 - epsilon)-fraction satisfied" is `count > gap_threshold(...)`.
int gap_threshold(double epsilon, int num_clauses);

// Lexicographically smallest satisfying assignment.
std::optional<Assignment> brute_force_sat(const Formula& f, int limit = kDefaultExhaustiveLimit);

struct MaxSatResult {
  int count = 0;
  Assignment witness;
};
// Maximum satisfied-clause count; the witness is the lexicographically
// smallest assignment attaining it.
MaxSatResult brute_force_max_sat(const Formula& f, int limit = kDefaultExhaustiveLimit);

}  // namespace satmdp
