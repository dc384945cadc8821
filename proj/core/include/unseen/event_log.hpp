#ifndef UNSEEN_EVENT_LOG_HPP
#define UNSEEN_EVENT_LOG_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unseen/frequency_table.hpp"

namespace unseen {

// Per-subject event timestamps over an observation horizon [0, T].
// Subjects with no events are not stored: they are unseen by construction.
// Duplicate timestamps for one subject are allowed (two events in the same
// sampling bin count as two events).
class EventLog {
public:
  using Records = std::map<std::string, std::vector<double>>;

  // Sorts each subject's times and validates them against [0, horizon].
  EventLog(double horizon, Records records);

  double horizon() const { return horizon_; }
  const Records& records() const { return records_; }

  std::size_t subject_count() const { return records_.size(); }
  std::size_t event_count() const;

  bool operator==(const EventLog&) const = default;

private:
  double horizon_;
  Records records_;
};

// Number of subjects with exactly k events at times <= t (closed interval, so
// t == horizon covers the full log). Requires 0 < t <= horizon.
FrequencyTable from_events(const EventLog& log, double t);

// CSV form: header "id,time", one row per event. The horizon is not part of
// the file; pass it explicitly or let it default to the maximum observed time.
EventLog read_events_csv(std::istream& in, std::optional<double> horizon = std::nullopt);
EventLog load_events_csv(const std::string& path, std::optional<double> horizon = std::nullopt);
void write_events_csv(const EventLog& log, std::ostream& out);

}  // namespace unseen

#endif
