#pragma once

// Trip-planning and calendar-scheduling tasks stated in natural language,
// with exhaustive solvers, answer verifiers and unique-answer generators.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "planbench/rng.hpp"

namespace planbench {

// ---------------------------------------------------------------- trip

struct DayWindow {
    int first = 1;
    int last = 1;
    bool operator==(const DayWindow&) const = default;
};

struct TripCity {
    std::string name;
    int days = 2;                   // stay length, counting both flight days
    std::optional<DayWindow> event;  // must be in the city for the whole window
    int duration_phrase = 0;        // index into the duration sentence variants
    int event_phrase = 0;           // index into the event sentence variants
    bool operator==(const TripCity&) const = default;
};

struct TripTask {
    int total_days = 0;
    std::vector<TripCity> cities;  // in the order they are mentioned
    std::vector<std::pair<std::string, std::string>> flights;  // undirected, listing order
    bool operator==(const TripTask&) const = default;
};

struct Segment {
    std::string city;
    int first = 0;
    int last = 0;
    bool operator==(const Segment&) const = default;
};

using Itinerary = std::vector<Segment>;

inline constexpr int kTripDurationPhrases = 3;
inline constexpr int kTripEventPhrases = 5;

// Throws std::invalid_argument when the duration identity or window bounds fail.
void check_trip(const TripTask& task);
// Every itinerary visiting each city once with direct flights between
// consecutive cities, in lexicographic order of city sequence.
std::vector<Itinerary> solve_trip(const TripTask& task);
std::string trip_to_nl(const TripTask& task);
// Answer text in the worked-example format, without the "done." line.
std::string render_itinerary(const TripTask& task, const Itinerary& itinerary);
// Segments from "**Day X-Y:** ... Visit <City> for N days." lines; nullopt if none.
std::optional<Itinerary> extract_itinerary(std::string_view text);
bool verify_trip(const TripTask& task, std::string_view text);
// Throws std::runtime_error when no unique task is found within the retry budget.
TripTask gen_trip(int num_cities, int total_days, Rng& rng);

// ---------------------------------------------------------------- calendar

struct Interval {
    int start = 0;  // minutes since midnight
    int end = 0;
    bool operator==(const Interval&) const = default;
};

struct Attendee {
    std::string name;
    std::vector<Interval> busy;
    int phrase = 0;  // "has meetings" / "is busy" / "has blocked their calendar"
    bool operator==(const Attendee&) const = default;
};

enum class ConstraintKind { not_before, not_after };

struct CalendarConstraint {
    std::string attendee;
    ConstraintKind kind = ConstraintKind::not_before;
    int time = 0;  // minutes since midnight
    bool operator==(const CalendarConstraint&) const = default;
};

struct CalendarTask {
    std::vector<Attendee> attendees;
    int duration = 30;  // 30 or 60
    std::string day = "Monday";
    int work_start = 9 * 60;
    int work_end = 17 * 60;
    std::vector<CalendarConstraint> constraints;
    bool operator==(const CalendarTask&) const = default;
};

struct TimeSlot {
    std::string day;
    int start = 0;
    int end = 0;
    bool operator==(const TimeSlot&) const = default;
};

enum class BusyProfile { light, busy };

inline constexpr int kCalendarPhrases = 3;

std::string format_time(int minutes);         // 570 -> "9:30"
std::optional<int> parse_time(std::string_view text);

void check_calendar(const CalendarTask& task);
// All feasible slots on the 30-minute grid, ascending.
std::vector<TimeSlot> solve_calendar(const CalendarTask& task);
std::string calendar_to_nl(const CalendarTask& task);
// "Here is the proposed time: Monday, 16:00 - 16:30 " plus newline.
std::string render_slot(const TimeSlot& slot);
std::optional<TimeSlot> extract_slot(std::string_view text);
bool verify_calendar(const CalendarTask& task, std::string_view text);
CalendarTask gen_calendar(int attendees, int duration, BusyProfile profile, Rng& rng);

// ---------------------------------------------------------------- records

enum class NatKind { trip, calendar };

struct NatRecord {
    std::string id;
    NatKind kind = NatKind::trip;
    std::optional<TripTask> trip;
    std::optional<CalendarTask> calendar;
    std::string split = "unassigned";

    std::string prompt() const;  // task text
    std::string golden() const;  // answer text including the "done." line
    bool verify(std::string_view answer) const;
};

nlohmann::json to_json(const TripTask& task);
nlohmann::json to_json(const CalendarTask& task);
TripTask trip_from_json(const nlohmann::json& j);
CalendarTask calendar_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NatRecord& record);
NatRecord nat_record_from_json(const nlohmann::json& j);

std::vector<NatRecord> read_nat_records(const std::string& path);
void write_nat_records(const std::string& path, const std::vector<NatRecord>& records);

struct TripGenConfig {
    int num_cities = 6;
    int total_days = 13;
};
struct CalendarGenConfig {
    int attendees = 4;
    int duration = 30;
    BusyProfile profile = BusyProfile::light;
};

// `n` tasks with ids "<kind>-<seed>-<i>", one RNG stream per index.
std::vector<NatRecord> gen_trip_dataset(const TripGenConfig& config, std::size_t n, std::uint64_t seed);
std::vector<NatRecord> gen_calendar_dataset(const CalendarGenConfig& config, std::size_t n, std::uint64_t seed);

}  // namespace planbench
