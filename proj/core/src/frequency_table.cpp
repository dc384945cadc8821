#include "unseen/frequency_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "unseen/errors.hpp"

namespace unseen {

namespace {

bool nearly_integral(double x) { return std::abs(x - std::round(x)) <= 1e-9; }

// Shortest decimal that round-trips to the same double.
std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace

FrequencyTable::FrequencyTable(std::map<int, double> entries)
    : entries_(std::move(entries)) {
  for (const auto& [k, count] : entries_) {
    if (k < 1) throw DomainError("frequency table multiplicity must be >= 1, got " + std::to_string(k));
    if (!(count >= 0.0) || !std::isfinite(count))
      throw DomainError("frequency table count for k=" + std::to_string(k) + " must be finite and non-negative");
  }
}

FrequencyTable::FrequencyTable(std::initializer_list<std::pair<const int, double>> entries)
    : FrequencyTable(std::map<int, double>(entries)) {}

double FrequencyTable::count(int k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? 0.0 : it->second;
}

bool FrequencyTable::empty() const {
  for (const auto& [k, count] : entries_)
    if (count > 0.0) return false;
  return true;
}

int FrequencyTable::max_multiplicity() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

double FrequencyTable::subjects() const {
  double total = 0.0;
  for (const auto& [k, count] : entries_) total += count;
  return total;
}

double FrequencyTable::events() const {
  double total = 0.0;
  for (const auto& [k, count] : entries_) total += k * count;
  return total;
}

bool FrequencyTable::integral() const {
  for (const auto& [k, count] : entries_)
    if (!nearly_integral(count)) return false;
  return true;
}

TableTotals totals(const FrequencyTable& table) {
  return {table.subjects(), table.events()};
}

std::vector<Diagnostic> validate(const FrequencyTable& table) {
  const double n1 = table.count(1);
  const double n2 = table.count(2);
  const double n3 = table.count(3);
  const auto [subjects, events] = totals(table);

  std::vector<Diagnostic> out;
  auto add = [&out](std::string id, Applicability status, std::string detail) {
    out.push_back({std::move(id), status, std::move(detail)});
  };
  auto require = [&add](std::string id, bool ok, std::string blocker) {
    if (ok)
      add(std::move(id), Applicability::applicable, "");
    else
      add(std::move(id), Applicability::blocked, std::move(blocker));
  };

  require("ambartsumian-lower", n2 > 0, "n2 = 0");
  require("ambartsumian-upper", n2 > 0, "n2 = 0");
  require("ambartsumian-upper-total", n2 > 0, "n2 = 0");
  require("chao-total", n2 > 0 && subjects > 0, "n2 = 0");

  if (events <= 0)
    add("good-turing-p0", Applicability::blocked, "empty table");
  else if (n1 <= 0)
    add("good-turing-p0", Applicability::degenerate, "n1 = 0, unseen mass estimate is 0");
  else
    add("good-turing-p0", Applicability::applicable, "");

  // at least two ratios k*n_k/n_{k-1} need n_{k-1} > 0 at consecutive k
  int computable = 0;
  for (int k = 2; k <= table.max_multiplicity(); ++k)
    if (table.count(k - 1) > 0) ++computable;
  require("heterogeneity", computable >= 2, "fewer than two computable ratios");

  require("mean-rate", n1 > 0, "n1 = 0");

  const bool repeats = events > subjects && subjects > 0;
  for (const char* id : {"mle-rate", "mle-total"}) {
    if (subjects <= 0)
      add(id, Applicability::blocked, "empty table");
    else if (!repeats)
      add(id, Applicability::degenerate, "n = N1 (no repeated subjects), rate tends to 0");
    else
      add(id, Applicability::applicable, "");
  }

  const double plackett_denom = events - n1;  // sum_{k>=2} k n_k
  require("plackett-total", plackett_denom > 0, "n - n1 = 0");
  require("plackett-unseen", plackett_denom > 0, "n - n1 = 0");

  require("robust-1-2", n3 > 0, "n3 = 0");

  if (subjects <= 0)
    add("stirling-total", Applicability::blocked, "empty table");
  else if (!table.integral())
    add("stirling-total", Applicability::blocked, "requires integer counts");
  else if (!repeats)
    add("stirling-total", Applicability::degenerate,
        "n = N1 (no repeated subjects), S(n-1, N1) = 0");
  else
    add("stirling-total", Applicability::applicable, "");

  if (n1 <= 0)
    add("zelterman-total", Applicability::blocked, "n1 = 0");
  else if (n2 <= 0)
    add("zelterman-total", Applicability::degenerate, "mean rate 2*n2/n1 = 0, estimate diverges");
  else
    add("zelterman-total", Applicability::applicable, "");

  return out;
}

// --- CSV -------------------------------------------------------------------

FrequencyTable read_counts_csv(std::istream& in) {
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty counts file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,count") throw ParseError("expected header \"k,count\"", line_no);

  std::map<int, double> entries;
  int last_k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected \"k,count\"", line_no);

    int k = 0;
    auto [kp, kec] = std::from_chars(line.data(), line.data() + comma, k);
    if (kec != std::errc{} || kp != line.data() + comma)
      throw ParseError("bad multiplicity \"" + line.substr(0, comma) + "\"", line_no);
    if (k < 1) throw ParseError("multiplicity must be >= 1", line_no);
    if (k <= last_k) throw ParseError("multiplicities must be strictly ascending", line_no);

    long long count = 0;
    const char* cbeg = line.data() + comma + 1;
    const char* cend = line.data() + line.size();
    auto [cp, cec] = std::from_chars(cbeg, cend, count);
    if (cec != std::errc{} || cp != cend)
      throw ParseError("bad count \"" + line.substr(comma + 1) + "\"", line_no);
    if (count < 0) throw ParseError("count must be non-negative", line_no);

    entries[k] = static_cast<double>(count);
    last_k = k;
  }
  return FrequencyTable(std::move(entries));
}

FrequencyTable load_counts_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open counts file: " + path);
  return read_counts_csv(in);
}

void write_counts_csv(const FrequencyTable& table, std::ostream& out) {
  out << "k,count\n";
  for (const auto& [k, count] : table.entries()) {
    if (count == 0.0) continue;  // zero rows are implied
    out << k << ',' << format_double(count) << '\n';
  }
}

std::string counts_csv(const FrequencyTable& table) {
  std::ostringstream out;
  write_counts_csv(table, out);
  return out.str();
}

}  // namespace unseen
