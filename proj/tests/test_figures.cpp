#include <doctest.h>

#include <cmath>

#include "masmc/figures.hpp"

using namespace masmc;

TEST_CASE("closed forms: spot values") {
    CHECK(eq_p_fragment(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq_p_fragment(4) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(eq_p_fragment(20) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(eq_p_dm(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq_p_dm(5) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(eq_p_dm(10) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(eq_p_wrong_agent(1, 7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq_p_wrong_agent(2, 2) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(eq_p_wrong_agent(2, 4) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("closed forms: zero arguments rejected") {
    CHECK_THROWS_AS(eq_p_fragment(0), DomainError);
    CHECK_THROWS_AS(eq_p_dm(0), DomainError);
    CHECK_THROWS_AS(eq_p_wrong_agent(0, 1), DomainError);
    CHECK_THROWS_AS(eq_p_wrong_agent(1, 0), DomainError);
}

TEST_CASE("wrong-agent probability equals its inclusion-exclusion form") {
    for (uint32_t m = 1; m <= 20; ++m) {
        for (uint32_t p = 1; p <= 20; ++p) {
            const double direct = eq_p_wrong_agent(m, p);
            const double union_form = 1.0 - (1.0 - 1.0 / m) * (1.0 - 1.0 / p);
            CHECK(std::abs(direct - union_form) <= 1e-12);
        }
    }
}

TEST_CASE("monotonicity and bounds") {
    for (uint32_t x = 1; x < 50; ++x) {
        CHECK(eq_p_fragment(x) > eq_p_fragment(x + 1));
        CHECK(eq_p_dm(x) > eq_p_dm(x + 1));
        CHECK(eq_p_fragment(x) > 0.0);
        CHECK(eq_p_fragment(x) <= 1.0);
    }
    for (uint32_t m = 2; m < 20; ++m) {
        CHECK(eq_p_wrong_agent(m, 5) > eq_p_wrong_agent(m + 1, 5));
        CHECK(eq_p_wrong_agent(5, m) > eq_p_wrong_agent(5, m + 1));
    }
    // degenerate: with one decision maker the probability is pinned at 1
    for (uint32_t p = 1; p < 20; ++p) {
        CHECK(eq_p_wrong_agent(1, p) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("emit_series: single-point sweep") {
    const auto series = emit_series(FigureKind::fragment_capture_vs_r, 1, 1, 10, 7);
    REQUIRE(series.size() == 1);
    CHECK(series[0].x == 1);
    CHECK(series[0].p_closed == 1.0);
    CHECK(series[0].p_mc == 1.0); // only one channel to tap
}

TEST_CASE("emit_series: closed-form column is exactly 1/x and decreasing") {
    const auto series = emit_series(FigureKind::fragment_capture_vs_r, 1, 20, 100, 7);
    REQUIRE(series.size() == 20);
    for (uint32_t i = 0; i < 20; ++i) {
        CHECK(series[i].x == i + 1);
        CHECK(series[i].p_closed == doctest::Approx(1.0 / (i + 1)).epsilon(1e-12));
        if (i > 0) {
            CHECK(series[i].p_closed < series[i - 1].p_closed);
        }
    }
}

TEST_CASE("emit_series: monte carlo column tracks the closed form") {
    for (FigureKind kind :
         {FigureKind::fragment_capture_vs_r, FigureKind::corrupt_dm_vs_m}) {
        const auto series = emit_series(kind, 1, 20, 100000, 7);
        for (const SeriesPoint& point : series) {
            INFO("x = ", point.x);
            CHECK(std::abs(point.p_mc - point.p_closed) <= 3.0 * point.stderr_);
        }
    }
}

TEST_CASE("emit_wrong_agent_series sweeps m at fixed p") {
    const auto series = emit_wrong_agent_series(2, 10, 10, 100000, 7);
    REQUIRE(series.size() == 9);
    for (const SeriesPoint& point : series) {
        CHECK(point.p_closed == doctest::Approx(eq_p_wrong_agent(point.x, 10)).epsilon(1e-12));
        CHECK(std::abs(point.p_mc - point.p_closed) <= 3.0 * point.stderr_);
    }
}

TEST_CASE("emit_series rejects bad ranges") {
    CHECK_THROWS_AS(emit_series(FigureKind::fragment_capture_vs_r, 0, 5, 10, 7),
                    DomainError);
    CHECK_THROWS_AS(emit_series(FigureKind::fragment_capture_vs_r, 5, 4, 10, 7),
                    DomainError);
    CHECK_THROWS_AS(emit_wrong_agent_series(1, 5, 0, 10, 7), DomainError);
}

TEST_CASE("csv round-trips exactly") {
    const auto series = emit_series(FigureKind::corrupt_dm_vs_m, 1, 20, 5000, 3);
    const std::string csv = series_to_csv(series);
    CHECK(parse_series_csv(csv) == series);

    CHECK(csv.starts_with("x,p_closed,p_mc,stderr\n"));
    CHECK(csv.ends_with("\n"));
    CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("csv probabilities carry at least 12 significant digits") {
    const std::vector<SeriesPoint> series = {{3, 1.0 / 3.0, 0.3333, 0.0003}};
    const std::string csv = series_to_csv(series);
    // 1/3 printed to 17 significant digits
    CHECK(csv.find("3.3333333333333331e-01") != std::string::npos);
}

TEST_CASE("csv parser rejects malformed input") {
    CHECK_THROWS_AS(parse_series_csv("nonsense\n"), ParseError);
    CHECK_THROWS_AS(parse_series_csv("x,p_closed,p_mc,stderr\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_series_csv("x,p_closed,p_mc,stderr\n1,a,b,c\n"), ParseError);
    CHECK_THROWS_AS(parse_series_csv("x,p_closed,p_mc,stderr\n1,0.5,0.5,0.1"), ParseError);
}
