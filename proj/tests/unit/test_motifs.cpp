#include <random>
#include <sstream>

#include "attnet/motifs.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace attnet;

namespace {

std::uint64_t count(const TriadCensus& c, const std::string& name) {
    for (int i = 0; i < kTriadClasses; ++i) {
        if (triad_name(static_cast<TriadClass>(i)) == name) return c.counts[static_cast<std::size_t>(i)];
    }
    FAIL("unknown class");
    return 0;
}

std::uint64_t total(const TriadCensus& c) {
    std::uint64_t t = 0;
    for (auto x : c.counts) t += x;
    return t;
}

std::vector<std::pair<int, int>> degrees(const Digraph& g) {
    std::vector<std::pair<int, int>> d;
    for (int i = 0; i < g.size(); ++i) {
        d.emplace_back(static_cast<int>(g.out[static_cast<std::size_t>(i)].size()),
                       static_cast<int>(g.in[static_cast<std::size_t>(i)].size()));
    }
    return d;
}

}  // namespace

TEST_CASE("canonical class order") {
    const char* names[] = {"021D", "021U", "021C", "111D", "111U", "030T", "030C",
                           "201",  "120D", "120U", "120C", "210",  "300"};
    for (int i = 0; i < kTriadClasses; ++i) CHECK(triad_name(static_cast<TriadClass>(i)) == names[i]);
}

TEST_CASE("single triads") {
    const auto cyc = triad_census(support::from_arcs({{"AA", "BB"}, {"BB", "CC"}, {"CC", "AA"}}));
    CHECK(count(cyc, "030C") == 1);
    CHECK(total(cyc) == 1);
    const auto ffl = triad_census(support::from_arcs({{"AA", "BB"}, {"AA", "CC"}, {"BB", "CC"}}));
    CHECK(count(ffl, "030T") == 1);
    CHECK(total(ffl) == 1);
    const auto full = triad_census(
        support::from_arcs({{"AA", "BB"}, {"BB", "AA"}, {"BB", "CC"}, {"CC", "BB"}, {"AA", "CC"}, {"CC", "AA"}}));
    CHECK(count(full, "300") == 1);
    CHECK(total(full) == 1);
}

TEST_CASE("classifier agrees with the isomorphism table on all 64 triads") {
    for (int code = 0; code < 64; ++code) {
        oracle::Adj a(3, std::vector<bool>(3, false));
        // v=0, u=1, w=2 in the table's bit layout.
        a[0][1] = code & 1;
        a[1][0] = code & 2;
        a[0][2] = code & 4;
        a[2][0] = code & 8;
        a[1][2] = code & 16;
        a[2][1] = code & 32;
        const std::string want = oracle::triad_type(a, 0, 1, 2);
        const auto got = classify_triad(a[0][1], a[1][0], a[0][2], a[2][0], a[1][2], a[2][1]);
        if (want == "003" || want == "012" || want == "102") {
            CHECK_FALSE(got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(triad_name(*got) == want);
        }
    }
}

TEST_CASE("census matches the cubic scan on random digraphs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        const auto adj = support::random_adj(rng, n, 0.05 + 0.5 * static_cast<double>(rng() % 100) / 100.0);
        const auto want = oracle::triad_census(adj);
        const auto got = triad_census(support::to_network(adj));
        std::uint64_t disconnected = want.at("003") + want.at("012") + want.at("102");
        for (int i = 0; i < kTriadClasses; ++i) {
            const std::string name(triad_name(static_cast<TriadClass>(i)));
            CHECK(got.counts[static_cast<std::size_t>(i)] == want.at(name));
        }
        CHECK(total(got) + disconnected == static_cast<std::uint64_t>(n * (n - 1) * (n - 2) / 6));
    }
}

TEST_CASE("degree-preserving randomization") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto adj = support::random_adj(rng, 15, 0.2);
        const auto g = Digraph::from(support::to_network(adj));
        if (g.arc_count() < 2) continue;
        const auto r = randomize_degree_preserving(g, 10, 1234 + static_cast<std::uint64_t>(trial));
        CHECK(degrees(r) == degrees(g));
        CHECK(r.arc_count() == g.arc_count());
        for (int i = 0; i < r.size(); ++i) {
            std::set<int> seen;
            for (const auto& a : r.out[static_cast<std::size_t>(i)]) {
                CHECK(a.node != i);
                CHECK(seen.insert(a.node).second);
            }
        }
        const auto again = randomize_degree_preserving(g, 10, 1234 + static_cast<std::uint64_t>(trial));
        CHECK(again.to_network(Layer::Media).edges == r.to_network(Layer::Media).edges);
    }
    // A two-arc path admits no valid swap.
    const auto path = support::from_arcs({{"AA", "BB"}, {"BB", "CC"}});
    CHECK(randomize_degree_preserving(path, 50, 3).edges == path.edges);
    CHECK_THROWS_AS(randomize_degree_preserving(support::from_arcs({{"AA", "BB"}}), 5, 1), Error);
}

TEST_CASE("z-scores") {
    SUBCASE("frozen graph gives z = 0 everywhere") {
        const auto path = support::from_arcs({{"AA", "BB"}, {"BB", "CC"}});
        const auto z = motif_zscores(path, {50, 10, 9, 1});
        for (const auto& v : z.z) {
            REQUIRE(v.has_value());
            CHECK(*v == 0.0);
        }
    }
    SUBCASE("deterministic and independent of worker count") {
        std::mt19937_64 rng(2);
        const auto net = support::to_network(support::random_adj(rng, 14, 0.2));
        const auto a = motif_zscores(net, {60, 10, 77, 1});
        const auto b = motif_zscores(net, {60, 10, 77, 4});
        const auto c = motif_zscores(net, {60, 10, 77, 3});
        CHECK(a.mean == b.mean);
        CHECK(a.stddev == b.stddev);
        CHECK(a.z == b.z);
        CHECK(a.z == c.z);
        const auto d = motif_zscores(net, {60, 10, 78, 1});
        CHECK(d.mean != a.mean);
        CHECK_THROWS_AS(motif_zscores(net, {1, 10, 77, 1}), Error);
    }
    SUBCASE("layered DAG over-represents feed-forward loops") {
        // 30 nodes in 5 layers of 6; each node links to 3 random nodes in each later layer.
        std::mt19937_64 rng(3);
        oracle::Adj a(30, std::vector<bool>(30, false));
        for (int i = 0; i < 30; ++i)
            for (int layer = i / 6 + 1; layer < 5; ++layer)
                for (int k = 0; k < 3; ++k) a[i][layer * 6 + static_cast<int>(rng() % 6)] = true;
        const auto z = motif_zscores(support::to_network(a), {200, 10, 5, 2});
        const auto t = z.z[static_cast<std::size_t>(TriadClass::T030T)];
        REQUIRE(t.has_value());
        CHECK(*t > 0);
    }
}

TEST_CASE("motif CSV") {
    const auto z = motif_zscores(support::from_arcs({{"AA", "BB"}, {"BB", "CC"}}), {10, 5, 1, 1});
    std::ostringstream out;
    write_motif_csv(out, z);
    const std::string text = out.str();
    CHECK(text.rfind("class,count_real,mean_rand,std_rand,z\n021D,", 0) == 0);
    CHECK(text.find("021C,1,1,0,0\n") != std::string::npos);
}
