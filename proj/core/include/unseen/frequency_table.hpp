#ifndef UNSEEN_FREQUENCY_TABLE_HPP
#define UNSEEN_FREQUENCY_TABLE_HPP

#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace unseen {

// Frequency-of-frequencies table: multiplicity k >= 1 mapped to the number of
// subjects observed exactly k times. The unseen class k = 0 is never stored;
// it is the quantity the estimators target.
//
// Counts are non-negative. They are integers for observed data but may be
// real-valued when the table holds expected counts N * p_k, so they are kept
// as doubles throughout. Entries with a zero count are legal in memory (they
// matter to diagnostics such as the heterogeneity sequence) and are dropped
// only on serialization.
class FrequencyTable {
public:
  FrequencyTable() = default;
  explicit FrequencyTable(std::map<int, double> entries);
  FrequencyTable(std::initializer_list<std::pair<const int, double>> entries);

  const std::map<int, double>& entries() const { return entries_; }

  // n_k; 0 for any multiplicity not stored.
  double count(int k) const;

  // True when no entry has a positive count.
  bool empty() const;

  // Largest stored multiplicity, 0 when no entries at all.
  int max_multiplicity() const;

  // N1 = sum n_k and n = sum k * n_k.
  double subjects() const;
  double events() const;

  // Every count is an integer (within 1e-9); required by the occupancy-based
  // total estimator.
  bool integral() const;

  bool operator==(const FrequencyTable&) const = default;

private:
  std::map<int, double> entries_;
};

struct TableTotals {
  double subjects = 0.0;  // N1
  double events = 0.0;    // n
};

TableTotals totals(const FrequencyTable& table);

// Applicability diagnostics: which estimators this table supports, reported
// without running them.
enum class Applicability { applicable, blocked, degenerate };

struct Diagnostic {
  std::string estimator;
  Applicability status = Applicability::applicable;
  std::string detail;  // blocker or degeneracy, empty when applicable
};

std::vector<Diagnostic> validate(const FrequencyTable& table);

// CSV form: header "k,count", one row per positive entry, ascending k,
// LF line endings. Counts in files are non-negative integers.
FrequencyTable read_counts_csv(std::istream& in);
FrequencyTable load_counts_csv(const std::string& path);
void write_counts_csv(const FrequencyTable& table, std::ostream& out);
std::string counts_csv(const FrequencyTable& table);

}  // namespace unseen

#endif
