#include <set>

#include "attnet/core.hpp"
#include "attnet/rng.hpp"
#include "doctest.h"

using namespace attnet;

TEST_CASE("country codes") {
    CHECK(CountryCode("FR").str() == "FR");
    CHECK(CountryCode("AA").index() == 0);
    CHECK(CountryCode("ZZ").index() == 675);
    CHECK(CountryCode::from_index(CountryCode("KR").index()) == CountryCode("KR"));
    CHECK(CountryCode("BR") < CountryCode("US"));
    CHECK_FALSE(CountryCode::valid("fr"));
    CHECK_FALSE(CountryCode::valid("FRA"));
    CHECK_THROWS_AS(CountryCode("F1"), Error);
    CHECK_THROWS_AS(CountryCode::from_index(676), Error);
}

TEST_CASE("dates and the default period") {
    const Date d = parse_date("2016-06-23");
    CHECK(format_date(d) == "2016-06-23");
    CHECK_THROWS_AS(parse_date("2016-02-30"), Error);
    CHECK_THROWS_AS(parse_date("23/06/2016"), Error);
    const Period p = Period::collection_default();
    CHECK(format_date(p.first) == "2016-03-07");
    CHECK(format_date(p.last) == "2017-04-14");
    CHECK(p.days() == 404);
    CHECK(p.contains(d));
    CHECK_FALSE(p.contains(parse_date("2017-04-15")));
    CHECK(day_offset(parse_date("2016-03-07"), parse_date("2016-10-07")) + 1 == 215);
}

TEST_CASE("error codes carry their name") {
    try {
        throw Error(Errc::NoOverlap, "x");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoOverlap);
        CHECK(std::string(e.what()).rfind("NoOverlap", 0) == 0);
    }
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(42), b(42), c(derive_seed(42, 1));
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(derive_seed(7, s));
    CHECK(seeds.size() == 1000);

    Rng r(3);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01).scale(1));
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
    for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
}
