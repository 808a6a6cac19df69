#include <random>
#include <sstream>

#include "attnet/regions.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace attnet;

namespace {
RegionMap regions(std::initializer_list<std::pair<const char*, Region>> items) {
    RegionMap rm;
    for (const auto& [c, r] : items) rm.emplace(CountryCode(c), r);
    return rm;
}
}  // namespace

TEST_CASE("two-region flow") {
    // Europe sends 6 to Europe and 2 to Asia.
    AttentionNetwork n;
    for (const char* c : {"FR", "GB", "KR", "JP"}) n.nodes.insert(CountryCode(c));
    n.add_weight(CountryCode("FR"), CountryCode("GB"), 4);
    n.add_weight(CountryCode("GB"), CountryCode("FR"), 2);
    n.add_weight(CountryCode("FR"), CountryCode("KR"), 2);
    const auto rm = regions({{"FR", Region::Europe}, {"GB", Region::Europe}, {"KR", Region::Asia}, {"JP", Region::Asia}});
    const auto f = region_flow_matrix(n, rm);
    REQUIRE(f.regions == std::vector<Region>{Region::Asia, Region::Europe});
    CHECK(f.matrix[1][1] == 0.75);
    CHECK(f.matrix[1][0] == 0.25);
    CHECK(f.zero_row[0]);
    CHECK(f.matrix[0][0] == 0.0);
    CHECK(f.matrix[0][1] == 0.0);

    std::ostringstream out;
    write_region_matrix_csv(out, f);
    CHECK(out.str() == "source,Asia,Europe\nAsia,0,0\nEurope,0.25,0.75\n");

    // Doubling weights leaves the matrix unchanged.
    AttentionNetwork d = n;
    for (auto& [k, w] : d.edges) w *= 2;
    CHECK(region_flow_matrix(d, rm).matrix == f.matrix);
}

TEST_CASE("single region and unmapped countries") {
    const auto n = support::from_arcs({{"FR", "GB"}, {"GB", "FR"}});
    const auto f = region_flow_matrix(n, regions({{"FR", Region::Europe}, {"GB", Region::Europe}}));
    CHECK(f.matrix == std::vector<std::vector<double>>{{1.0}});
    try {
        region_flow_matrix(n, regions({{"FR", Region::Europe}}));
        FAIL("expected UnmappedCountry");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnmappedCountry);
        CHECK(std::string(e.what()).find("GB") != std::string::npos);
    }
}

TEST_CASE("relabelling countries within a region") {
    std::mt19937_64 rng(3);
    const auto w = support::random_weights(rng, 12, 0.5);
    const auto net = support::to_network(w);
    RegionMap rm;
    for (int i = 0; i < 12; ++i) rm.emplace(support::code(i), kAllRegions[static_cast<std::size_t>(i % 5)]);
    // Swap the codes of nodes 0 and 5 (both Africa).
    AttentionNetwork swapped;
    auto sw = [](CountryCode c) {
        if (c == support::code(0)) return support::code(5);
        if (c == support::code(5)) return support::code(0);
        return c;
    };
    for (auto c : net.nodes) swapped.nodes.insert(sw(c));
    for (const auto& [k, x] : net.edges) swapped.add_weight(sw(k.first), sw(k.second), x);
    const auto a = region_flow_matrix(net, rm), b = region_flow_matrix(swapped, rm);
    for (std::size_t i = 0; i < a.matrix.size(); ++i)
        for (std::size_t j = 0; j < a.matrix.size(); ++j) CHECK(a.matrix[i][j] == doctest::Approx(b.matrix[i][j]).epsilon(1e-12));
}

TEST_CASE("region gini comparison") {
    // Ten countries, two per region; every country links to one country in each region.
    RegionMap rm;
    for (int i = 0; i < 10; ++i) rm.emplace(support::code(i), kAllRegions[static_cast<std::size_t>(i / 2)]);
    AttentionNetwork uniform, skewed;
    for (int i = 0; i < 10; ++i) {
        uniform.nodes.insert(support::code(i));
        skewed.nodes.insert(support::code(i));
        for (int r = 0; r < 5; ++r) {
            const int j = 2 * r + (i % 2 == 0 ? 1 : 0);
            if (j == i) continue;
            uniform.add_weight(support::code(i), support::code(j), 1.0);
        }
        // Skewed: all outflow to the region after one's own.
        skewed.add_weight(support::code(i), support::code((2 * (i / 2) + 2 + (i % 2)) % 10), 1.0);
    }
    SUBCASE("identical layers") {
        const auto cmp = region_gini_compare(uniform, uniform, rm);
        CHECK(cmp.test.statistic == 12.5);
        CHECK(cmp.test.p == doctest::Approx(1.0));
    }
    SUBCASE("maximally skewed versus uniform") {
        const auto cmp = region_gini_compare(skewed, uniform, rm);
        CHECK(cmp.test.statistic == 0.0);
        CHECK(cmp.test.p == doctest::Approx(oracle::mann_whitney_exact(cmp.media_gini, cmp.public_gini)).epsilon(1e-12));
        CHECK(cmp.test.p == doctest::Approx(2.0 / 252.0).epsilon(1e-12));
        for (double g : cmp.media_gini) CHECK(g == doctest::Approx(0.8));
    }
    SUBCASE("composition of gini and mann-whitney") {
        const auto cmp = region_gini_compare(skewed, uniform, rm);
        const auto fm = region_flow_matrix(skewed, rm), fp = region_flow_matrix(uniform, rm);
        std::vector<double> gm, gp;
        for (const auto& row : fm.matrix) gm.push_back(oracle::gini_mad(row));
        for (const auto& row : fp.matrix) gp.push_back(oracle::gini_mad(row));
        for (std::size_t i = 0; i < gm.size(); ++i) {
            CHECK(cmp.media_gini[i] == doctest::Approx(gm[i]).epsilon(1e-12));
            CHECK(cmp.public_gini[i] == doctest::Approx(gp[i]).epsilon(1e-12));
        }
    }
}
