#include "unseen/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "unseen/errors.hpp"

namespace unseen {

EventLog::EventLog(double horizon, Records records)
    : horizon_(horizon), records_(std::move(records)) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw DomainError("event log horizon must be positive and finite");
  for (auto& [id, times] : records_) {
    if (times.empty())
      throw DomainError("subject \"" + id + "\" has no events; unseen subjects are not stored");
    std::sort(times.begin(), times.end());
    if (times.front() < 0.0 || times.back() > horizon_ || !std::isfinite(times.back()))
      throw DomainError("subject \"" + id + "\" has an event outside [0, horizon]");
  }
}

std::size_t EventLog::event_count() const {
  std::size_t total = 0;
  for (const auto& [id, times] : records_) total += times.size();
  return total;
}

FrequencyTable from_events(const EventLog& log, double t) {
  if (!(t > 0.0)) throw DomainError("truncation time must be positive");
  if (t > log.horizon()) throw DomainError("truncation time exceeds the log horizon");

  std::map<int, double> entries;
  for (const auto& [id, times] : log.records()) {
    // times are sorted; events exactly at t are included
    const auto k = std::upper_bound(times.begin(), times.end(), t) - times.begin();
    if (k > 0) entries[static_cast<int>(k)] += 1.0;
  }
  return FrequencyTable(std::move(entries));
}

// --- CSV -------------------------------------------------------------------

namespace {

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace

EventLog read_events_csv(std::istream& in, std::optional<double> horizon) {
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty events file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,time") throw ParseError("expected header \"id,time\"", line_no);

  EventLog::Records records;
  double max_time = 0.0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      throw ParseError("expected \"id,time\"", line_no);

    double time = 0.0;
    const char* tbeg = line.data() + comma + 1;
    const char* tend = line.data() + line.size();
    auto [tp, tec] = std::from_chars(tbeg, tend, time);
    if (tec != std::errc{} || tp != tend)
      throw ParseError("bad time \"" + line.substr(comma + 1) + "\"", line_no);
    if (!(time >= 0.0) || !std::isfinite(time))
      throw ParseError("time must be non-negative and finite", line_no);

    records[line.substr(0, comma)].push_back(time);
    max_time = std::max(max_time, time);
    any = true;
  }

  double t_end;
  if (horizon) {
    t_end = *horizon;
  } else {
    if (!any) throw ParseError("events file has no rows and no horizon was supplied");
    t_end = max_time;
  }
  return EventLog(t_end, std::move(records));
}

EventLog load_events_csv(const std::string& path, std::optional<double> horizon) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open events file: " + path);
  return read_events_csv(in, horizon);
}

void write_events_csv(const EventLog& log, std::ostream& out) {
  out << "id,time\n";
  for (const auto& [id, times] : log.records())
    for (double t : times) out << id << ',' << format_double(t) << '\n';
}

}  // namespace unseen
