#pragma once

// Worked examples reconstructed as library objects, plus golden-file access.

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "planbench/instance_gen.hpp"
#include "planbench/natplan.hpp"
#include "planbench/prompts.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::string golden(const std::string& name) { return read_file(std::string(PLANBENCH_GOLDEN_DIR) + "/" + name); }

// ---------------------------------------------------------------- blocks example

inline const char* const kSussmanProblem = R"((define (problem BW-rand-3)
(:domain blocksworld-4ops)
(:objects A B C)
  (:init 
  (handempty)
  (ontable C) (clear C)  
  (on A B) (clear A))
(:goal (and (on C B) (on A C))))
)";

inline const char* const kSussmanPlan = "(unstack A B) (put-down A)\n(pick-up C) (stack C B)\n(pick-up A) (stack A C)\n";

inline const char* const kSussmanNlProblem =
    "The initial state:\nThe hand is empty.\nC is on the table. C is clear.\nA is on B. A is clear.\n"
    "The goal is: C is on B. A is on C.\n";

inline const char* const kSussmanNlPlan =
    "Unstack A from B. Putdown A on the table. \nPickup C from the table. Stack C on B.\n"
    "Pickup A from the table. Stack A on C.";

// ---------------------------------------------------------------- 1-shot prompt files

// The two problem statements and the shot answer of a 1-shot prompt.
struct OneShot {
    std::string shot_problem;
    std::string shot_answer;  // includes "done."
    std::string test_problem;
};

inline const char* const kHeader = "Please solve the problem:\n";
inline const char* const kCue = "Your plan as plain text without formatting:\n";

// PDDL prompts: header, problem, blank lines, cue, answer, blank lines, header, problem, blank line, cue.
inline OneShot split_pddl_prompt(const std::string& text) {
    const std::string header = kHeader, cue = kCue;
    const auto second = text.find(header, header.size());
    const std::string first = text.substr(header.size(), second - header.size());
    const auto cue_pos = first.find(cue);
    OneShot out;
    out.shot_problem = first.substr(0, cue_pos);
    out.shot_answer = first.substr(cue_pos + cue.size());
    const std::string rest = text.substr(second + header.size());
    out.test_problem = rest.substr(0, rest.find(cue));
    auto trim_tail = [](std::string& s) {
        while (s.size() >= 2 && s[s.size() - 1] == '\n' && s[s.size() - 2] == '\n') s.pop_back();
    };
    trim_tail(out.shot_problem);
    trim_tail(out.shot_answer);
    trim_tail(out.test_problem);
    return out;
}

inline planbench::InstanceRecord pddl_record(const std::string& id, planbench::DomainId domain,
                                             const std::string& problem_text, const std::string& plan_text) {
    planbench::InstanceRecord r;
    r.id = id;
    r.domain = domain;
    r.problem = planbench::parse_problem(problem_text);
    r.pddl = problem_text;
    r.plan = planbench::parse_plan(plan_text);
    r.meta.plan_length = r.plan.size();
    return r;
}

// ---------------------------------------------------------------- trip

inline planbench::TripCity city(std::string name, int days, int duration_phrase,
                                std::optional<planbench::DayWindow> event = std::nullopt, int event_phrase = 0) {
    return {std::move(name), days, event, duration_phrase, event_phrase};
}

inline planbench::TripTask trip_shot() {
    planbench::TripTask t;
    t.total_days = 13;
    t.cities = {city("Dublin", 3, 0, planbench::DayWindow{7, 9}, 0),
                city("Madrid", 2, 1, planbench::DayWindow{2, 3}, 1),
                city("Oslo", 3, 2),
                city("London", 2, 1),
                city("Vilnius", 3, 0),
                city("Berlin", 5, 2, planbench::DayWindow{3, 7}, 2)};
    t.flights = {{"London", "Madrid"}, {"Oslo", "Vilnius"},  {"Berlin", "Vilnius"}, {"Madrid", "Oslo"},
                 {"Madrid", "Dublin"}, {"London", "Oslo"},   {"Madrid", "Berlin"},  {"Berlin", "Oslo"},
                 {"Dublin", "Oslo"},   {"London", "Dublin"}, {"London", "Berlin"},  {"Berlin", "Dublin"}};
    return t;
}

inline planbench::Itinerary trip_shot_answer() {
    return {{"London", 1, 2}, {"Madrid", 2, 3}, {"Berlin", 3, 7}, {"Dublin", 7, 9}, {"Oslo", 9, 11}, {"Vilnius", 11, 13}};
}

inline planbench::TripTask trip_test() {
    planbench::TripTask t;
    t.total_days = 17;
    t.cities = {city("Manchester", 4, 0),
                city("Florence", 5, 2),
                city("Geneva", 3, 0, planbench::DayWindow{1, 3}, 2),
                city("Seville", 3, 0, planbench::DayWindow{7, 9}, 3),
                city("Prague", 2, 1),
                city("Valencia", 5, 2, planbench::DayWindow{3, 7}, 4)};
    t.flights = {{"Manchester", "Prague"}, {"Seville", "Manchester"}, {"Geneva", "Manchester"},
                 {"Valencia", "Seville"},  {"Geneva", "Valencia"},    {"Valencia", "Prague"},
                 {"Prague", "Florence"},   {"Geneva", "Prague"}};
    return t;
}

// ---------------------------------------------------------------- calendar

inline planbench::Interval hm(int h1, int m1, int h2, int m2) { return {h1 * 60 + m1, h2 * 60 + m2}; }

inline planbench::CalendarTask calendar_shot() {
    planbench::CalendarTask t;
    t.duration = 30;
    t.attendees = {{"Samuel", {}, 0},
                   {"Evelyn", {hm(9, 0, 10, 0), hm(11, 0, 12, 0), hm(12, 30, 13, 0), hm(15, 30, 16, 0)}, 0},
                   {"Ruth",
                    {hm(9, 30, 11, 0), hm(11, 30, 12, 30), hm(13, 0, 13, 30), hm(14, 0, 14, 30), hm(15, 0, 16, 0),
                     hm(16, 30, 17, 0)},
                    0},
                   {"Amanda",
                    {hm(10, 0, 10, 30), hm(11, 0, 12, 30), hm(13, 0, 13, 30), hm(14, 0, 15, 0), hm(15, 30, 16, 0)},
                    0}};
    t.constraints = {{"Amanda", planbench::ConstraintKind::not_before, 16 * 60}};
    return t;
}

inline planbench::CalendarTask calendar_test() {
    planbench::CalendarTask t;
    t.duration = 60;
    t.attendees = {{"Walter", {hm(9, 30, 10, 0), hm(13, 0, 13, 30)}, 1},
                   {"Jacob", {hm(11, 0, 11, 30), hm(13, 0, 13, 30)}, 0},
                   {"Jennifer", {hm(9, 30, 10, 30), hm(11, 30, 12, 0), hm(12, 30, 15, 0)}, 1},
                   {"Joan",
                    {hm(9, 30, 10, 0), hm(10, 30, 11, 30), hm(12, 0, 12, 30), hm(13, 0, 14, 0), hm(14, 30, 15, 30)},
                    2}};
    return t;
}

inline planbench::NatRecord nat_trip(const std::string& id, planbench::TripTask t) {
    planbench::NatRecord r;
    r.id = id;
    r.kind = planbench::NatKind::trip;
    r.trip = std::move(t);
    return r;
}

inline planbench::NatRecord nat_calendar(const std::string& id, planbench::CalendarTask t) {
    planbench::NatRecord r;
    r.id = id;
    r.kind = planbench::NatKind::calendar;
    r.calendar = std::move(t);
    return r;
}

}  // namespace fixtures
