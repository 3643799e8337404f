#include "planbench/natplan.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <regex>
#include <set>
#include <stdexcept>

namespace planbench {

using nlohmann::json;

namespace {

constexpr std::array<const char*, kTripDurationPhrases> kDurationPhrases{
    "You want to spend {d} days in {c}.",
    "You would like to visit {c} for {d} days.",
    "You plan to stay in {c} for {d} days.",
};

constexpr std::array<const char*, kTripEventPhrases> kEventPhrases{
    "You would like to meet your friends at {c} between day {a} and day {b} to tour together.",
    "You plan to visit relatives in {c} between day {a} and day {b}.",
    "You are going to attend a wedding in {c} between day {a} and day {b}.",
    "During day {a} and day {b}, you have to attend a conference in {c}.",
    "From day {a} to day {b}, there is a annual show you want to attend in {c}.",
};

constexpr std::array<const char*, kCalendarPhrases> kCalendarPhrasesText{
    "has meetings",
    "is busy",
    "has blocked their calendar",
};

const std::vector<std::string>& city_pool() {
    static const std::vector<std::string> kCities{
        "Amsterdam", "Athens",  "Barcelona", "Berlin",    "Brussels", "Bucharest", "Budapest", "Copenhagen",
        "Dublin",    "Edinburgh", "Florence", "Frankfurt", "Geneva",   "Hamburg",   "Helsinki", "Istanbul",
        "Krakow",    "Lisbon",  "London",    "Lyon",      "Madrid",   "Manchester", "Milan",   "Munich",
        "Naples",    "Nice",    "Oslo",      "Paris",     "Porto",    "Prague",    "Reykjavik", "Riga",
        "Rome",      "Seville", "Split",     "Stockholm", "Stuttgart", "Tallinn",  "Valencia", "Venice",
        "Vienna",    "Vilnius", "Warsaw",    "Zurich"};
    return kCities;
}

const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> kNames{
        "Samuel", "Evelyn", "Ruth",    "Amanda", "Walter",  "Jacob",   "Jennifer", "Joan",    "Christine",
        "Helen",  "Kevin",  "Nancy",   "Roger",  "Sharon",  "Patrick", "Diana",    "Gregory", "Olivia",
        "Ethan",  "Megan",  "Bruce",   "Laura",  "Stephen", "Angela",  "Victoria", "Henry",   "Judith",
        "Keith",  "Denise", "Charles", "Marie",  "Adam",    "Brenda",  "Dylan",    "Frances", "Lisa"};
    return kNames;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

std::string truncate_done(std::string_view text) {
    static const std::regex kDone(R"((^|\n)\s*done\.?\s*(\n|$))", std::regex::icase);
    std::string s(text);
    std::smatch m;
    if (std::regex_search(s, m, kDone)) s = s.substr(0, static_cast<std::size_t>(m.position(0)));
    return s;
}

const TripCity* find_city(const TripTask& task, const std::string& name) {
    for (const auto& c : task.cities)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

// ---------------------------------------------------------------- trip

void check_trip(const TripTask& task) {
    if (task.cities.empty()) throw std::invalid_argument("trip: no cities");
    int sum = 0;
    std::set<std::string> names;
    for (const auto& c : task.cities) {
        if (c.days < 1) throw std::invalid_argument("trip: city " + c.name + " has no days");
        if (!names.insert(c.name).second) throw std::invalid_argument("trip: duplicate city " + c.name);
        sum += c.days;
        if (c.event && (c.event->first < 1 || c.event->last > task.total_days || c.event->first > c.event->last))
            throw std::invalid_argument("trip: event window for " + c.name + " outside the trip");
    }
    if (sum - static_cast<int>(task.cities.size() - 1) != task.total_days)
        throw std::invalid_argument("trip: durations do not add up to the total days");
    for (const auto& [a, b] : task.flights)
        if (!names.count(a) || !names.count(b)) throw std::invalid_argument("trip: flight to unknown city");
}

std::vector<Itinerary> solve_trip(const TripTask& task) {
    check_trip(task);
    const std::size_t n = task.cities.size();
    // Cities in name order so the output order is independent of mention order.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return task.cities[a].name < task.cities[b].name; });
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : task.flights) {
        std::size_t ia = n;
        std::size_t ib = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (task.cities[i].name == a) ia = i;
            if (task.cities[i].name == b) ib = i;
        }
        adj[ia][ib] = adj[ib][ia] = true;
    }

    std::vector<Itinerary> out;
    Itinerary current;
    std::vector<bool> used(n, false);
    std::size_t prev = n;
    auto dfs = [&](auto&& self, int day) -> void {
        if (current.size() == n) {
            if (day == task.total_days) out.push_back(current);
            return;
        }
        for (std::size_t i : order) {
            if (used[i] || (prev != n && !adj[prev][i])) continue;
            const TripCity& c = task.cities[i];
            const int last = day + c.days - 1;
            if (last > task.total_days) continue;
            if (c.event && (c.event->first < day || c.event->last > last)) continue;
            used[i] = true;
            current.push_back({c.name, day, last});
            const std::size_t saved = prev;
            prev = i;
            self(self, last);
            prev = saved;
            current.pop_back();
            used[i] = false;
        }
    };
    dfs(dfs, 1);
    return out;
}

std::string trip_to_nl(const TripTask& task) {
    std::string out = "You plan to visit " + std::to_string(task.cities.size()) + " European cities for " +
                      std::to_string(task.total_days) +
                      " days in total. You only take direct flights to commute between cities.";
    for (const auto& c : task.cities) {
        std::string s = kDurationPhrases.at(static_cast<std::size_t>(c.duration_phrase));
        out += " " + replace_all(replace_all(s, "{c}", c.name), "{d}", std::to_string(c.days));
        if (c.event) {
            std::string e = kEventPhrases.at(static_cast<std::size_t>(c.event_phrase));
            e = replace_all(e, "{c}", c.name);
            e = replace_all(e, "{a}", std::to_string(c.event->first));
            e = replace_all(e, "{b}", std::to_string(c.event->last));
            out += " " + e;
        }
    }
    out += "\n\nHere are the cities that have direct flights:\n";
    for (std::size_t i = 0; i < task.flights.size(); ++i) {
        if (i) out += ", ";
        out += task.flights[i].first + " and " + task.flights[i].second;
    }
    out += ".\n\nFind a trip plan of visiting the cities for " + std::to_string(task.total_days) +
           " days by taking direct flights to commute between them.\n";
    return out;
}

std::string render_itinerary(const TripTask& task, const Itinerary& it) {
    auto range = [](const Segment& s) {
        return s.first == s.last ? std::to_string(s.first) : std::to_string(s.first) + "-" + std::to_string(s.last);
    };
    std::string out = "Here is the trip plan for visiting the " + std::to_string(task.cities.size()) +
                      " European cities for " + std::to_string(task.total_days) + " days:\n\n";
    for (std::size_t i = 0; i < it.size(); ++i) {
        const Segment& s = it[i];
        const int days = s.last - s.first + 1;
        if (i == 0) {
            out += "**Day " + range(s) + ":** Arriving in " + s.city + " and visit " + s.city + " for " +
                   std::to_string(days) + " days.\n";
        } else {
            out += "**Day " + std::to_string(s.first) + ":** Fly from " + it[i - 1].city + " to " + s.city + ".\n";
            out += "**Day " + range(s) + ":** Visit " + s.city + " for " + std::to_string(days) + " days.\n";
        }
    }
    return out;
}

std::optional<Itinerary> extract_itinerary(std::string_view text) {
    const std::string body = truncate_done(text);
    static const std::regex kLine(
        R"(Day\s+(\d+)\s*-\s*(\d+)\s*:?\**:?\s*(?:Arriving in .*? and )?visit\s+(.+?)\s+for\s+\d+\s+days?)",
        std::regex::icase);
    Itinerary out;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), kLine); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        std::string city = m[3].str();
        while (!city.empty() && (city.back() == '*' || city.back() == ' ')) city.pop_back();
        out.push_back({city, std::stoi(m[1].str()), std::stoi(m[2].str())});
    }
    if (out.empty()) return std::nullopt;
    return out;
}

bool verify_trip(const TripTask& task, std::string_view text) {
    const auto answer = extract_itinerary(text);
    if (!answer) return false;
    for (const auto& s : *answer)
        if (!find_city(task, s.city)) return false;
    const auto solutions = solve_trip(task);
    return std::find(solutions.begin(), solutions.end(), *answer) != solutions.end();
}

TripTask gen_trip(int num_cities, int total_days, Rng& rng) {
    if (num_cities < 1) throw std::invalid_argument("gen_trip: need at least one city");
    const int extra = total_days - num_cities - 1;  // days beyond the 2-day minimum per city
    if (num_cities == 1 ? total_days < 1 : extra < 0)
        throw std::invalid_argument("gen_trip: too few days for the number of cities");
    if (num_cities > static_cast<int>(city_pool().size())) throw std::invalid_argument("gen_trip: too many cities");

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::string> pool = city_pool();
        rng.shuffle(pool);
        std::vector<std::string> route(pool.begin(), pool.begin() + num_cities);

        // Stay lengths: 2 + a uniform composition of the spare days.
        std::vector<int> days(static_cast<std::size_t>(num_cities), 2);
        if (num_cities == 1) {
            days[0] = total_days;
        } else {
            std::vector<int> bars;
            for (int k = 0; k < num_cities - 1; ++k) bars.push_back(rng.uniform_int(0, extra));
            std::sort(bars.begin(), bars.end());
            int prev = 0;
            for (int k = 0; k < num_cities; ++k) {
                const int cut = k + 1 < num_cities ? bars[static_cast<std::size_t>(k)] : extra;
                days[static_cast<std::size_t>(k)] += cut - prev;
                prev = cut;
            }
        }
        std::vector<Segment> truth;
        int day = 1;
        for (int k = 0; k < num_cities; ++k) {
            const int last = day + days[static_cast<std::size_t>(k)] - 1;
            truth.push_back({route[static_cast<std::size_t>(k)], day, last});
            day = last;
        }

        TripTask task;
        task.total_days = total_days;
        std::vector<std::size_t> mention(static_cast<std::size_t>(num_cities));
        for (std::size_t i = 0; i < mention.size(); ++i) mention[i] = i;
        rng.shuffle(mention);
        for (std::size_t i : mention) {
            TripCity c;
            c.name = route[i];
            c.days = days[i];
            c.duration_phrase = rng.uniform_int(0, kTripDurationPhrases - 1);
            c.event_phrase = rng.uniform_int(0, kTripEventPhrases - 1);
            if (rng.bernoulli(0.4)) c.event = DayWindow{truth[i].first, truth[i].last};
            task.cities.push_back(c);
        }

        std::set<std::pair<std::string, std::string>> edges;
        auto add_edge = [&](std::string a, std::string b) {
            if (a > b) std::swap(a, b);
            edges.insert({a, b});
        };
        for (int k = 0; k + 1 < num_cities; ++k)
            add_edge(route[static_cast<std::size_t>(k)], route[static_cast<std::size_t>(k + 1)]);
        const int max_edges = num_cities * (num_cities - 1) / 2;
        const int decoys = num_cities > 2 ? rng.uniform_int(0, max_edges - (num_cities - 1)) : 0;
        for (int k = 0; k < decoys; ++k) {
            const std::size_t a = rng.index(route.size());
            const std::size_t b = rng.index(route.size());
            if (a != b) add_edge(route[a], route[b]);
        }
        for (const auto& [a, b] : edges) {
            if (rng.bernoulli(0.5))
                task.flights.emplace_back(a, b);
            else
                task.flights.emplace_back(b, a);
        }
        rng.shuffle(task.flights);

        // Pin further stays until the route is the only solution.
        for (;;) {
            const auto solutions = solve_trip(task);
            if (solutions.size() == 1) return task;
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < task.cities.size(); ++i)
                if (!task.cities[i].event) free.push_back(i);
            if (free.empty()) break;
            TripCity& c = task.cities[rng.pick(free)];
            for (const auto& s : truth)
                if (s.city == c.name) c.event = DayWindow{s.first, s.last};
        }
    }
    throw std::runtime_error("gen_trip: retry budget exhausted");
}

// ---------------------------------------------------------------- calendar

std::string format_time(int minutes) {
    const int m = minutes % 60;
    return std::to_string(minutes / 60) + ":" + (m < 10 ? "0" : "") + std::to_string(m);
}

std::optional<int> parse_time(std::string_view text) {
    static const std::regex kTime(R"(^\s*(\d{1,2}):(\d{2})\s*$)");
    const std::string s(text);
    std::smatch m;
    if (!std::regex_match(s, m, kTime)) return std::nullopt;
    const int h = std::stoi(m[1].str());
    const int min = std::stoi(m[2].str());
    if (h > 24 || min > 59) return std::nullopt;
    return h * 60 + min;
}

void check_calendar(const CalendarTask& task) {
    if (task.attendees.empty()) throw std::invalid_argument("calendar: no attendees");
    if (task.duration != 30 && task.duration != 60) throw std::invalid_argument("calendar: duration must be 30 or 60");
    for (const auto& a : task.attendees)
        for (const auto& iv : a.busy)
            if (iv.start >= iv.end) throw std::invalid_argument("calendar: empty busy interval for " + a.name);
    for (const auto& c : task.constraints) {
        bool known = false;
        for (const auto& a : task.attendees) known = known || a.name == c.attendee;
        if (!known) throw std::invalid_argument("calendar: constraint on unknown attendee " + c.attendee);
    }
}

std::vector<TimeSlot> solve_calendar(const CalendarTask& task) {
    check_calendar(task);
    std::vector<TimeSlot> out;
    for (int start = task.work_start; start + task.duration <= task.work_end; start += 30) {
        const int end = start + task.duration;
        bool ok = true;
        for (const auto& a : task.attendees)
            for (const auto& iv : a.busy)
                if (iv.start < end && start < iv.end) ok = false;
        for (const auto& c : task.constraints) {
            if (c.kind == ConstraintKind::not_before && start < c.time) ok = false;
            if (c.kind == ConstraintKind::not_after && end > c.time) ok = false;
        }
        if (ok) out.push_back({task.day, start, end});
    }
    return out;
}

std::string calendar_to_nl(const CalendarTask& task) {
    std::string names;
    for (std::size_t i = 0; i < task.attendees.size(); ++i) {
        if (i) names += i + 1 == task.attendees.size() ? " and " : ", ";
        names += task.attendees[i].name;
    }
    std::string out = "You need to schedule a meeting for " + names + " for " +
                      (task.duration == 30 ? "half an hour" : "one hour") + " between the work hours of " +
                      format_time(task.work_start) + " to " + format_time(task.work_end) + " on " + task.day +
                      ". \n\nHere are the existing schedules for everyone during the day: \n";
    for (const auto& a : task.attendees) {
        if (a.busy.empty()) {
            out += a.name + " is free the entire day.\n";
            continue;
        }
        out += a.name + " " + kCalendarPhrasesText.at(static_cast<std::size_t>(a.phrase)) + " on " + task.day +
               " during ";
        for (std::size_t i = 0; i < a.busy.size(); ++i) {
            if (i) out += ", ";
            out += format_time(a.busy[i].start) + " to " + format_time(a.busy[i].end);
        }
        out += "; \n";
    }
    out += "\n";
    for (const auto& c : task.constraints)
        out += c.attendee + " can not meet on " + task.day +
               (c.kind == ConstraintKind::not_before ? " before " : " after ") + format_time(c.time) + ". ";
    out += "Find a time that works for everyone's schedule and constraints. \n";
    return out;
}

std::string render_slot(const TimeSlot& slot) {
    return "Here is the proposed time: " + slot.day + ", " + format_time(slot.start) + " - " + format_time(slot.end) +
           " \n";
}

std::optional<TimeSlot> extract_slot(std::string_view text) {
    const std::string body = truncate_done(text);
    static const std::regex kSlot(
        R"((Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)\W*,?\s*(\d{1,2}:\d{2})\s*(?:-|–|to)\s*(\d{1,2}:\d{2}))",
        std::regex::icase);
    std::smatch m;
    if (!std::regex_search(body, m, kSlot)) return std::nullopt;
    std::string day = m[1].str();
    for (auto& ch : day) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    day[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(day[0])));
    const auto start = parse_time(m[2].str());
    const auto end = parse_time(m[3].str());
    if (!start || !end) return std::nullopt;
    return TimeSlot{day, *start, *end};
}

bool verify_calendar(const CalendarTask& task, std::string_view text) {
    const auto slot = extract_slot(text);
    if (!slot) return false;
    const auto feasible = solve_calendar(task);
    return std::find(feasible.begin(), feasible.end(), *slot) != feasible.end();
}

namespace {

int busy_minutes(const Attendee& a) {
    int total = 0;
    for (const auto& iv : a.busy) total += iv.end - iv.start;
    return total;
}

bool within_profile(const Attendee& a, BusyProfile profile) {
    const int m = busy_minutes(a);
    return profile == BusyProfile::light ? m < 240 : m >= 240;
}

// Merges a set of busy half-hour grid indices into intervals.
std::vector<Interval> to_intervals(const std::set<int>& cells, int work_start) {
    std::vector<Interval> out;
    for (int c : cells) {
        const int start = work_start + 30 * c;
        if (!out.empty() && out.back().end == start)
            out.back().end = start + 30;
        else
            out.push_back({start, start + 30});
    }
    return out;
}

}  // namespace

CalendarTask gen_calendar(int attendees, int duration, BusyProfile profile, Rng& rng) {
    if (attendees < 1 || attendees > 7) throw std::invalid_argument("gen_calendar: attendees must be in 1..7");
    if (duration != 30 && duration != 60) throw std::invalid_argument("gen_calendar: duration must be 30 or 60");
    constexpr int kCells = 16;  // half-hour cells between 9:00 and 17:00

    for (int attempt = 0; attempt < 1000; ++attempt) {
        CalendarTask task;
        task.duration = duration;
        std::vector<std::string> names = name_pool();
        rng.shuffle(names);
        std::vector<std::set<int>> cells(static_cast<std::size_t>(attendees));
        for (int i = 0; i < attendees; ++i) {
            Attendee a;
            a.name = names[static_cast<std::size_t>(i)];
            a.phrase = rng.uniform_int(0, kCalendarPhrases - 1);
            const int count = profile == BusyProfile::light ? rng.uniform_int(0, 7) : rng.uniform_int(8, 12);
            std::vector<int> all(kCells);
            for (int c = 0; c < kCells; ++c) all[static_cast<std::size_t>(c)] = c;
            rng.shuffle(all);
            cells[static_cast<std::size_t>(i)].insert(all.begin(), all.begin() + count);
            a.busy = to_intervals(cells[static_cast<std::size_t>(i)], task.work_start);
            task.attendees.push_back(a);
        }
        if (rng.bernoulli(0.5)) {
            CalendarConstraint c;
            c.attendee = rng.pick(task.attendees).name;
            c.kind = rng.bernoulli(0.5) ? ConstraintKind::not_before : ConstraintKind::not_after;
            c.time = task.work_start + 30 * rng.uniform_int(2, kCells - 2);
            task.constraints.push_back(c);
        }
        auto slots = solve_calendar(task);
        if (slots.empty()) continue;

        // Keep one feasible slot and block the others with extra meetings.
        const TimeSlot keep = rng.pick(slots);
        bool ok = true;
        for (const auto& s : slots) {
            if (s == keep) continue;
            if (solve_calendar(task).size() == 1) break;
            // Still feasible? A previous block may already cover it.
            const auto now = solve_calendar(task);
            if (std::find(now.begin(), now.end(), s) == now.end()) continue;
            std::vector<int> candidates;
            for (int c = (s.start - task.work_start) / 30; c < (s.end - task.work_start) / 30; ++c) {
                const int cs = task.work_start + 30 * c;
                if (cs < keep.end && keep.start < cs + 30) continue;  // would also block the kept slot
                candidates.push_back(c);
            }
            std::vector<int> people(static_cast<std::size_t>(attendees));
            for (int i = 0; i < attendees; ++i) people[static_cast<std::size_t>(i)] = i;
            rng.shuffle(people);
            bool blocked = false;
            for (int i : people) {
                for (int c : candidates) {
                    auto trial = cells[static_cast<std::size_t>(i)];
                    trial.insert(c);
                    Attendee a = task.attendees[static_cast<std::size_t>(i)];
                    a.busy = to_intervals(trial, task.work_start);
                    if (profile == BusyProfile::light && !within_profile(a, profile)) continue;
                    cells[static_cast<std::size_t>(i)] = trial;
                    task.attendees[static_cast<std::size_t>(i)] = a;
                    blocked = true;
                    break;
                }
                if (blocked) break;
            }
            if (!blocked) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        bool profile_ok = true;
        for (const auto& a : task.attendees) profile_ok = profile_ok && within_profile(a, profile);
        if (profile_ok && solve_calendar(task).size() == 1) return task;
    }
    throw std::runtime_error("gen_calendar: retry budget exhausted");
}

// ---------------------------------------------------------------- records

std::string NatRecord::prompt() const { return kind == NatKind::trip ? trip_to_nl(*trip) : calendar_to_nl(*calendar); }

std::string NatRecord::golden() const {
    if (kind == NatKind::trip) {
        const auto sol = solve_trip(*trip);
        if (sol.empty()) return "done.\n";
        return render_itinerary(*trip, sol.front()) + "done.\n";
    }
    const auto slots = solve_calendar(*calendar);
    if (slots.empty()) return "done.\n";
    return render_slot(slots.front()) + "done.\n";
}

bool NatRecord::verify(std::string_view answer) const {
    return kind == NatKind::trip ? verify_trip(*trip, answer) : verify_calendar(*calendar, answer);
}

json to_json(const TripTask& task) {
    json cities = json::array();
    for (const auto& c : task.cities) {
        json jc{{"name", c.name},
                {"days", c.days},
                {"duration_phrase", c.duration_phrase},
                {"event_phrase", c.event_phrase}};
        if (c.event) jc["event"] = {c.event->first, c.event->last};
        cities.push_back(jc);
    }
    json flights = json::array();
    for (const auto& [a, b] : task.flights) flights.push_back({a, b});
    return json{{"total_days", task.total_days}, {"cities", cities}, {"flights", flights}};
}

TripTask trip_from_json(const json& j) {
    TripTask t;
    t.total_days = j.at("total_days").get<int>();
    for (const auto& jc : j.at("cities")) {
        TripCity c;
        c.name = jc.at("name").get<std::string>();
        c.days = jc.at("days").get<int>();
        c.duration_phrase = jc.value("duration_phrase", 0);
        c.event_phrase = jc.value("event_phrase", 0);
        if (jc.contains("event")) c.event = DayWindow{jc["event"][0].get<int>(), jc["event"][1].get<int>()};
        t.cities.push_back(c);
    }
    for (const auto& f : j.at("flights")) t.flights.emplace_back(f[0].get<std::string>(), f[1].get<std::string>());
    return t;
}

json to_json(const CalendarTask& task) {
    json people = json::array();
    for (const auto& a : task.attendees) {
        json busy = json::array();
        for (const auto& iv : a.busy) busy.push_back({iv.start, iv.end});
        people.push_back({{"name", a.name}, {"busy", busy}, {"phrase", a.phrase}});
    }
    json constraints = json::array();
    for (const auto& c : task.constraints)
        constraints.push_back({{"attendee", c.attendee},
                               {"kind", c.kind == ConstraintKind::not_before ? "not_before" : "not_after"},
                               {"time", c.time}});
    return json{{"attendees", people},       {"duration", task.duration},   {"day", task.day},
                {"work_start", task.work_start}, {"work_end", task.work_end}, {"constraints", constraints}};
}

CalendarTask calendar_from_json(const json& j) {
    CalendarTask t;
    t.duration = j.at("duration").get<int>();
    t.day = j.value("day", std::string("Monday"));
    t.work_start = j.value("work_start", 9 * 60);
    t.work_end = j.value("work_end", 17 * 60);
    for (const auto& ja : j.at("attendees")) {
        Attendee a;
        a.name = ja.at("name").get<std::string>();
        a.phrase = ja.value("phrase", 0);
        for (const auto& iv : ja.at("busy")) a.busy.push_back({iv[0].get<int>(), iv[1].get<int>()});
        t.attendees.push_back(a);
    }
    for (const auto& jc : j.value("constraints", json::array())) {
        CalendarConstraint c;
        c.attendee = jc.at("attendee").get<std::string>();
        c.kind = jc.at("kind").get<std::string>() == "not_after" ? ConstraintKind::not_after : ConstraintKind::not_before;
        c.time = jc.at("time").get<int>();
        t.constraints.push_back(c);
    }
    return t;
}

json to_json(const NatRecord& r) {
    return json{{"id", r.id},
                {"kind", r.kind == NatKind::trip ? "trip" : "calendar"},
                {"nl_prompt", r.prompt()},
                {"task", r.kind == NatKind::trip ? to_json(*r.trip) : to_json(*r.calendar)},
                {"golden", r.golden()},
                {"split", r.split}};
}

NatRecord nat_record_from_json(const json& j) {
    NatRecord r;
    r.id = j.at("id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trip") {
        r.kind = NatKind::trip;
        r.trip = trip_from_json(j.at("task"));
    } else if (kind == "calendar") {
        r.kind = NatKind::calendar;
        r.calendar = calendar_from_json(j.at("task"));
    } else {
        throw std::invalid_argument("natplan record " + r.id + ": unknown kind " + kind);
    }
    r.split = j.value("split", std::string("unassigned"));
    return r;
}

std::vector<NatRecord> read_nat_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<NatRecord> out;
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(nat_record_from_json(json::parse(line)));
    return out;
}

void write_nat_records(const std::string& path, const std::vector<NatRecord>& records) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (const auto& r : records) out << to_json(r).dump() << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot finalize " + path);
}

std::vector<NatRecord> gen_trip_dataset(const TripGenConfig& config, std::size_t n, std::uint64_t seed) {
    std::vector<NatRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::stream(seed, i);
        NatRecord r;
        r.id = "trip-" + std::to_string(seed) + "-" + std::to_string(i);
        r.kind = NatKind::trip;
        r.trip = gen_trip(config.num_cities, config.total_days, rng);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<NatRecord> gen_calendar_dataset(const CalendarGenConfig& config, std::size_t n, std::uint64_t seed) {
    std::vector<NatRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::stream(seed, i);
        NatRecord r;
        r.id = "calendar-" + std::to_string(seed) + "-" + std::to_string(i);
        r.kind = NatKind::calendar;
        r.calendar = gen_calendar(config.attendees, config.duration, config.profile, rng);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace planbench
