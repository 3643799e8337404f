#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "planbench/natplan.hpp"

using namespace planbench;

namespace {

// Text between the first header and the first blank-line-preceded answer.
std::string first_problem(const std::string& prompt) {
    const std::string header = fixtures::kHeader;
    const auto start = header.size();
    return prompt.substr(start, prompt.find("\n\n\n", start) + 1 - start);
}

}  // namespace

TEST_CASE("the worked trip reads as published") {
    const std::string golden = fixtures::golden("trip_1shot.txt");
    CHECK(first_problem(golden) == trip_to_nl(fixtures::trip_shot()));
    CHECK(golden.find(render_itinerary(fixtures::trip_shot(), fixtures::trip_shot_answer())) != std::string::npos);
}

TEST_CASE("the worked trip has exactly the published itinerary") {
    const auto sols = solve_trip(fixtures::trip_shot());
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == fixtures::trip_shot_answer());
    CHECK(oracle::trip_solutions(fixtures::trip_shot()) == sols);
    CHECK(oracle::trip_solutions(fixtures::trip_test()) == solve_trip(fixtures::trip_test()));
}

TEST_CASE("itineraries are extracted and verified") {
    const TripTask t = fixtures::trip_shot();
    const std::string answer = render_itinerary(t, fixtures::trip_shot_answer());
    CHECK(extract_itinerary(answer) == fixtures::trip_shot_answer());
    CHECK(verify_trip(t, answer + "done.\n"));
    Itinerary wrong = fixtures::trip_shot_answer();
    std::swap(wrong[4], wrong[5]);
    CHECK_FALSE(verify_trip(t, render_itinerary(t, wrong)));
    CHECK_FALSE(verify_trip(t, "I would go to London first."));
    CHECK_FALSE(extract_itinerary("nothing here"));
    CHECK_THROWS_AS(check_trip(TripTask{20, {fixtures::city("Rome", 3, 0)}, {}}), std::invalid_argument);
}

TEST_CASE("the worked calendar reads as published") {
    const std::string golden = fixtures::golden("calendar_1shot.txt");
    CHECK(first_problem(golden) == calendar_to_nl(fixtures::calendar_shot()));
    CHECK(golden.find(render_slot({"Monday", 16 * 60, 16 * 60 + 30})) != std::string::npos);
    CHECK(golden.substr(golden.rfind(fixtures::kHeader) + std::string(fixtures::kHeader).size()) ==
          calendar_to_nl(fixtures::calendar_test()));
}

TEST_CASE("calendar solutions agree with a minute-level scan") {
    for (const CalendarTask& t : {fixtures::calendar_shot(), fixtures::calendar_test()}) {
        const auto slots = solve_calendar(t);
        std::vector<std::pair<int, int>> on_grid;
        for (const auto& [s, e] : oracle::calendar_slots(t))
            if (s % 30 == 0) on_grid.emplace_back(s, e);
        REQUIRE(slots.size() == on_grid.size());
        for (std::size_t i = 0; i < slots.size(); ++i) {
            CHECK(slots[i].start == on_grid[i].first);
            CHECK(slots[i].end == on_grid[i].second);
        }
    }
    const auto shot = solve_calendar(fixtures::calendar_shot());
    REQUIRE(shot.size() == 1);
    CHECK(shot[0] == TimeSlot{"Monday", 960, 990});
    CHECK(solve_calendar(fixtures::calendar_test()).front() == TimeSlot{"Monday", 930, 990});
}

TEST_CASE("slots are extracted and verified") {
    const CalendarTask t = fixtures::calendar_shot();
    CHECK(render_slot({"Monday", 960, 990}) == "Here is the proposed time: Monday, 16:00 - 16:30 \n");
    CHECK(extract_slot("Here is the proposed time: Monday, 16:00 - 16:30 \ndone.") == TimeSlot{"Monday", 960, 990});
    CHECK(verify_calendar(t, "**Monday, 16:00 - 16:30**"));
    CHECK_FALSE(verify_calendar(t, "Here is the proposed time: Monday, 9:00 - 9:30"));
    CHECK_FALSE(verify_calendar(t, "no idea"));
}

TEST_CASE("clock formatting") {
    CHECK(format_time(570) == "9:30");
    CHECK(format_time(1020) == "17:00");
    CHECK(parse_time("9:30") == 570);
    CHECK(parse_time("16:05") == 965);
    CHECK_FALSE(parse_time("25:00"));
    CHECK_FALSE(parse_time("noon"));
}

TEST_CASE("generated tasks have exactly one answer") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = Rng::stream(77, i);
        const TripTask trip = gen_trip(5, 12, rng);
        CHECK(oracle::trip_solutions(trip).size() == 1);
        const CalendarTask cal = gen_calendar(3, i % 2 ? 60 : 30, BusyProfile::light, rng);
        CHECK(solve_calendar(cal).size() == 1);
    }
}

TEST_CASE("task datasets are deterministic and serialisable") {
    const auto a = gen_trip_dataset({4, 10}, 5, 3);
    const auto b = gen_trip_dataset({4, 10}, 5, 3);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(to_json(a[i]) == to_json(b[i]));
        const NatRecord back = nat_record_from_json(to_json(a[i]));
        CHECK(back.trip == a[i].trip);
        CHECK(back.verify(a[i].golden()));
    }
    CHECK(a[0].id == "trip-3-0");
    const auto c = gen_calendar_dataset({3, 30, BusyProfile::busy}, 4, 8);
    for (const auto& r : c) {
        CHECK(nat_record_from_json(to_json(r)).calendar == r.calendar);
        CHECK(r.verify(r.golden()));
        CHECK(r.golden().ends_with("done.\n"));
    }
}
