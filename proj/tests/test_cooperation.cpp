#include <doctest.h>

#include "fractalcomp/cooperation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace fractalcomp;

namespace {

Link mk(double distance, double rx_power) {
    Link l;
    l.distance = distance;
    l.fading = 1.0;
    l.alpha = 4.0;
    l.rx_power = rx_power;
    return l;
}

std::vector<Link> four_links() {
    return {mk(10.0, 8.0), mk(20.0, 4.0), mk(30.0, 2.0), mk(40.0, 1.0)};
}

}  // namespace

TEST_CASE("select_distance takes the k nearest") {
    auto links = four_links();

    Partition p = select_distance(links, 2);
    REQUIRE(p.coop.size() == 2);
    REQUIRE(p.interf.size() == 2);
    CHECK(p.coop[0].distance == 10.0);
    CHECK(p.coop[1].distance == 20.0);
    CHECK(p.interf[0].distance == 30.0);
    CHECK(p.interf[1].distance == 40.0);

    SUBCASE("k exceeding the population takes everything") {
        Partition all = select_distance(links, 9);
        CHECK(all.coop.size() == 4);
        CHECK(all.interf.empty());
    }
    SUBCASE("no links at all") {
        Partition none = select_distance({}, 3);
        CHECK(none.coop.empty());
        CHECK(none.interf.empty());
    }
    SUBCASE("k must be positive") {
        CHECK_THROWS_AS(select_distance(links, 0), std::invalid_argument);
        CHECK_THROWS_AS(select_distance(links, -1), std::invalid_argument);
    }
}

TEST_CASE("select_power splits on instantaneous received power") {
    auto links = four_links();

    Partition p = select_power(links, 3.0);
    REQUIRE(p.coop.size() == 2);
    CHECK(p.coop[0].rx_power == 8.0);
    CHECK(p.coop[1].rx_power == 4.0);
    REQUIRE(p.interf.size() == 2);
    CHECK(p.interf[0].rx_power == 2.0);

    SUBCASE("threshold at a link's exact power includes it") {
        Partition q = select_power(links, 4.0);
        CHECK(q.coop.size() == 2);
    }
    SUBCASE("threshold above every link") {
        Partition q = select_power(links, 100.0);
        CHECK(q.coop.empty());
        CHECK(q.interf.size() == 4);
    }
    SUBCASE("threshold below every link") {
        Partition q = select_power(links, 0.5);
        CHECK(q.coop.size() == 4);
        CHECK(q.interf.empty());
    }
    SUBCASE("threshold must be positive") {
        CHECK_THROWS_AS(select_power(links, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(select_power(links, -2.0), std::invalid_argument);
    }
}

TEST_CASE("sinr hand cases") {
    SUBCASE("signal over interference plus noise") {
        Partition p;
        p.coop = {mk(1, 3.0), mk(2, 1.0)};       // sum 4
        p.interf = {mk(3, 1.0), mk(4, 1.0)};     // sum 2
        CHECK(sinr(p, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(sinr(p, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("empty cooperative set is an outage regardless of interference") {
        Partition p;
        p.interf = {mk(3, 5.0)};
        CHECK(sinr(p, 1.0) == 0.0);
        CHECK(sinr(Partition{}, 0.0) == 0.0);
    }
    SUBCASE("noiseless and interference-free is infinite") {
        Partition p;
        p.coop = {mk(1, 2.0)};
        CHECK(sinr(p, 0.0) == std::numeric_limits<double>::infinity());
    }
    SUBCASE("common power scale cancels") {
        Partition p;
        p.coop = {mk(1, 3.0), mk(2, 1.0)};
        p.interf = {mk(3, 0.5)};
        double base = sinr(p, 0.25);
        for (Link& l : p.coop) l.rx_power *= 1e9;
        for (Link& l : p.interf) l.rx_power *= 1e9;
        CHECK(sinr(p, 0.25e9) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("inst_rate is the weighted log of one plus sinr") {
    NetworkConfig config = NetworkConfig::defaults();
    config.sigma2 = 1.0;
    config.w = 1.0;
    Partition p;
    p.coop = {mk(1, 1.0)};
    CHECK(inst_rate(p, config) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    config.w = 2.5;
    CHECK(inst_rate(p, config) == doctest::Approx(2.5 * std::log(2.0)).epsilon(1e-15));

    Partition outage;
    outage.interf = {mk(2, 7.0)};
    CHECK(inst_rate(outage, config) == 0.0);
}

TEST_CASE("coop_count") {
    auto links = four_links();
    CHECK(coop_count(select_distance(links, 3)) == 3);
    CHECK(coop_count(select_power(links, 100.0)) == 0);
    CHECK(coop_count(Partition{}) == 0);
}
