#include <random>

#include "attnet/stitch.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace attnet;

namespace {

// w1 covers day 0..4, w2 day 4..8; the overlap is day 4.
std::pair<TrendsWindow, TrendsWindow> windows(int ref1, int ref2) {
    TrendsWindow a, b;
    a.source = b.source = CountryCode("DZ");
    a.start_date = parse_date("2016-03-07");
    a.end_date = a.start_date + std::chrono::days(4);
    b.start_date = a.end_date;
    b.end_date = b.start_date + std::chrono::days(4);
    a.values[CountryCode("US")] = {10, 20, 30, 5, ref1};
    b.values[CountryCode("US")] = {ref2, 60, 70, 0, 99};
    a.values[CountryCode("KR")] = {0, 1, 2, 3, 19};
    b.values[CountryCode("KR")] = {39, 1, 2, 3, 4};
    return {a, b};
}

const Series& find(const std::vector<Series>& s, const char* target) {
    for (const auto& x : s) {
        if (x.target == CountryCode(target)) return x;
    }
    FAIL("missing series");
    return s.front();
}

}  // namespace

TEST_CASE("reference scaling from raw 39 and 79") {
    const auto [a, b] = windows(39, 79);
    const auto sc = stitch_scales(a, b);
    CHECK(sc.first == 2.5);
    CHECK(sc.second == 1.25);
    const auto out = stitch_windows(a, b);
    const auto& us = find(out, "US");
    REQUIRE(us.values.size() == 9);
    CHECK(us.values[4] == 100.0);
    for (int i = 0; i < 4; ++i) CHECK(us.values[static_cast<std::size_t>(i)] == (a.values.at(CountryCode("US"))[static_cast<std::size_t>(i)] + 1) * 2.5);
    for (int i = 0; i < 5; ++i) CHECK(us.values[static_cast<std::size_t>(4 + i)] == (b.values.at(CountryCode("US"))[static_cast<std::size_t>(i)] + 1) * 1.25);
    const auto& kr = find(out, "KR");
    CHECK(kr.values[4] == 50.0);
    CHECK(kr.seam_discrepancy == 0.0);
    CHECK_FALSE(kr.gap);
    CHECK(kr.period().first == a.start_date);
    CHECK(kr.period().last == b.end_date);
}

TEST_CASE("identity scaling when both reference values are 99") {
    const auto [a, b] = windows(99, 99);
    const auto sc = stitch_scales(a, b);
    CHECK(sc.first == 1.0);
    CHECK(sc.second == 1.0);
    for (const auto& s : stitch_windows(a, b)) {
        const auto& va = a.values.at(s.target);
        const auto& vb = b.values.at(s.target);
        for (std::size_t i = 0; i < 4; ++i) CHECK(s.values[i] == va[i] + 1);
        for (std::size_t i = 0; i < 5; ++i) CHECK(s.values[4 + i] == vb[i] + 1);
    }
}

TEST_CASE("stitch errors and gaps") {
    auto [a, b] = windows(39, 79);
    SUBCASE("no shared day") {
        b.start_date += std::chrono::days(1);
        CHECK_THROWS_AS(stitch_windows(a, b), Error);
    }
    SUBCASE("missing reference") {
        b.values.erase(CountryCode("US"));
        try {
            stitch_windows(a, b);
            FAIL("expected MissingReference");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MissingReference);
        }
    }
    SUBCASE("target in one window only") {
        a.values[CountryCode("FR")] = {1, 2, 3, 4, 5};
        const auto out = stitch_windows(a, b);
        const auto& fr = find(out, "FR");
        CHECK(fr.gap);
        CHECK(fr.values.size() == 9);
        CHECK(fr.values[8] == 0.0);
        StitchConfig strict;
        strict.strict_targets = true;
        try {
            stitch_windows(a, b, strict);
            FAIL("expected TargetSetMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::TargetSetMismatch);
        }
    }
    SUBCASE("stitch_all needs exactly two windows per source") {
        CHECK(stitch_all({a, b}).size() == 2);
        CHECK(stitch_all({b, a}).size() == 2);
        CHECK_THROWS_AS(stitch_all({a}), Error);
    }
}

TEST_CASE("seam discrepancy and monotonicity (property)") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto [a, b] = windows(static_cast<int>(rng() % 101), static_cast<int>(rng() % 101));
        for (auto* w : {&a, &b}) {
            for (auto& [t, v] : w->values) {
                for (int& x : v) x = static_cast<int>(rng() % 101);
            }
        }
        const auto sc = stitch_scales(a, b);
        for (const auto& s : stitch_windows(a, b)) {
            const auto& va = a.values.at(s.target);
            const auto& vb = b.values.at(s.target);
            const double expected = std::abs(sc.first * (va[4] + 1) - sc.second * (vb[0] + 1));
            CHECK(s.seam_discrepancy == doctest::Approx(expected).epsilon(1e-12));
            for (std::size_t i = 0; i + 1 < 4; ++i) {
                for (std::size_t j = i + 1; j < 4; ++j) {
                    if (va[i] < va[j]) CHECK(s.values[i] < s.values[j]);
                }
            }
            if (s.target == CountryCode("US")) CHECK(s.values[4] == 100.0);
        }
    }
}

TEST_CASE("differencing") {
    CHECK(difference({1, 3, 6, 10}, 1) == std::vector<double>{2, 3, 4});
    CHECK(difference({1, 3, 6, 10}, 2) == std::vector<double>{1, 1});
    CHECK(difference({1, 3, 6, 10}, 0) == std::vector<double>{1, 3, 6, 10});
    CHECK(difference({4, 4, 4}, 1) == std::vector<double>{0, 0});
    CHECK_THROWS_AS(difference({1}, 1), Error);
    CHECK_THROWS_AS(difference({1, 2, 3}, 3), Error);

    Series s;
    s.values = {1, 3, 6, 10};
    s.start_date = parse_date("2016-03-07");
    const auto d = make_stationary(s, 1);
    CHECK(d.values == std::vector<double>{2, 3, 4});

    std::mt19937_64 rng(9);
    std::normal_distribution<double> z(0, 50);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(30);
        for (double& x : v) x = z(rng);
        const auto dv = difference(v, 1);
        double acc = v[0];
        for (std::size_t i = 0; i < dv.size(); ++i) {
            acc += dv[i];
            CHECK(std::abs(acc - v[i + 1]) < 1e-9);
        }
    }
}

TEST_CASE("series CSV") {
    const auto [a, b] = windows(39, 79);
    std::ostringstream out;
    write_series_csv(out, stitch_windows(a, b));
    const std::string text = out.str();
    CHECK(text.rfind("source,target,date,value\n", 0) == 0);
    CHECK(text.find("DZ,US,2016-03-11,100\n") != std::string::npos);
}
