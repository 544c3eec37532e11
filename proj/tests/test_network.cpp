#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "credinet/network.hpp"
#include "credinet/rng.hpp"

using namespace credinet;

namespace {

void check_conservation(const CreditNetwork& net) {
    long sum_ell = 0, sum_b = 0;
    for (int i = 0; i < net.n_agents(); ++i) {
        const auto& s = net.sheet(i);
        REQUIRE(s.ell >= 0);
        REQUIRE(s.b >= 0);
        sum_ell += s.ell;
        sum_b += s.b;
    }
    CHECK(sum_ell == net.link_count());
    CHECK(sum_b == net.link_count());
}

}  // namespace

TEST_CASE("new network starts empty") {
    CreditNetwork net(3);
    CHECK(net.n_agents() == 3);
    CHECK(net.link_count() == 0);
    for (int i = 0; i < 3; ++i) {
        CHECK(net.sheet(i).ell == 0);
        CHECK(net.sheet(i).b == 0);
    }

    CreditNetwork big(1000);
    CHECK(big.link_count() == 0);

    CHECK_THROWS_AS(CreditNetwork(1), std::invalid_argument);
}

TEST_CASE("add_loan bookkeeping") {
    CreditNetwork net(2);
    net.add_loan(0, 1);
    CHECK(net.sheet(1).ell == 1);
    CHECK(net.sheet(1).b == 0);
    CHECK(net.sheet(0).ell == 0);
    CHECK(net.sheet(0).b == 1);

    // parallel links are a multigraph feature, not an error
    net.add_loan(0, 1);
    CHECK(net.link_count() == 2);
    CHECK(net.sheet(1).ell == 2);
    CHECK(net.sheet(0).b == 2);

    CHECK_THROWS_AS(net.add_loan(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(net.add_loan(0, 7), std::out_of_range);
}

TEST_CASE("mature_loan removes exactly one link") {
    CreditNetwork net(2);
    LinkId a = net.add_loan(0, 1);
    SUBCASE("only link -> empty network") {
        net.mature_loan(a);
        CHECK(net.link_count() == 0);
        CHECK(net.sheet(0).b == 0);
        CHECK(net.sheet(1).ell == 0);
    }
    SUBCASE("one of two parallel links") {
        LinkId b = net.add_loan(0, 1);
        net.mature_loan(a);
        CHECK(net.link_count() == 1);
        CHECK(net.contains(b));
        CHECK(!net.contains(a));
    }
    SUBCASE("unknown id rejected") {
        net.mature_loan(a);
        CHECK_THROWS_AS(net.mature_loan(a), std::out_of_range);
        CHECK_THROWS_AS(net.mature_loan(12345), std::out_of_range);
    }
}

TEST_CASE("default_agent strips both orientations") {
    SUBCASE("isolated agent") {
        CreditNetwork net(3);
        auto res = net.default_agent(2);
        CHECK(res.removed_assets == 0);
        CHECK(res.removed_liabilities == 0);
        CHECK(net.link_count() == 0);
    }
    SUBCASE("star lender") {
        CreditNetwork net(4);
        net.add_loan(0, 1);
        net.add_loan(0, 2);
        net.add_loan(0, 3);
        auto res = net.default_agent(0);
        CHECK(res.removed_assets == 3);
        CHECK(res.removed_liabilities == 0);
        for (int i = 0; i < 4; ++i) {
            CHECK(net.sheet(i).ell == 0);
            CHECK(net.sheet(i).b == 0);
        }
    }
    SUBCASE("chain middle") {
        CreditNetwork net(3);
        net.add_loan(0, 1);  // 0 lends to 1
        net.add_loan(1, 2);  // 1 lends to 2
        auto res = net.default_agent(1);
        CHECK(res.removed_assets == 1);
        CHECK(res.removed_liabilities == 1);
        CHECK(net.sheet(0).b == 0);
        CHECK(net.sheet(2).ell == 0);
        CHECK(net.link_count() == 0);
    }
}

TEST_CASE("add then mature is the identity on sheets") {
    CreditNetwork net(5);
    net.add_loan(3, 4);
    net.add_loan(1, 2);
    const auto before0 = net.sheet(0);
    const auto before1 = net.sheet(1);
    LinkId l = net.add_loan(0, 1);
    net.mature_loan(l);
    CHECK(net.sheet(0).b == before0.b);
    CHECK(net.sheet(0).ell == before0.ell);
    CHECK(net.sheet(1).ell == before1.ell);
    check_conservation(net);
}

TEST_CASE("conservation holds under random operation sequences") {
    Rng rng(20240815);
    CreditNetwork net(12);
    std::vector<LinkId> live;
    for (int op = 0; op < 4000; ++op) {
        const double pick = rng.uniform();
        if (pick < 0.5 || live.empty()) {
            const int borrower = static_cast<int>(rng.uniform_index(12));
            int lender = static_cast<int>(rng.uniform_index(11));
            if (lender >= borrower) ++lender;
            live.push_back(net.add_loan(lender, borrower));
        } else if (pick < 0.85) {
            const std::size_t k = rng.uniform_index(live.size());
            net.mature_loan(live[k]);
            live[k] = live.back();
            live.pop_back();
        } else {
            const int agent = static_cast<int>(rng.uniform_index(12));
            const auto sheet = net.sheet(agent);
            const auto res = net.default_agent(agent);
            CHECK(res.removed_liabilities == sheet.ell);
            CHECK(res.removed_assets == sheet.b);
            std::erase_if(live, [&](LinkId id) { return !net.contains(id); });
        }
        if (op % 257 == 0) check_conservation(net);
    }
    check_conservation(net);
}

TEST_CASE("default reduces counterparties by exactly the shared multiplicity") {
    CreditNetwork net(4);
    net.add_loan(0, 1);
    net.add_loan(0, 1);
    net.add_loan(1, 0);
    net.add_loan(2, 0);
    net.add_loan(0, 3);
    const int before1 = net.sheet(1).ell + net.sheet(1).b;  // multiplicity 3 with agent 0
    const int before2 = net.sheet(2).ell + net.sheet(2).b;
    net.default_agent(0);
    CHECK(before1 - (net.sheet(1).ell + net.sheet(1).b) == 3);
    CHECK(before2 - (net.sheet(2).ell + net.sheet(2).b) == 1);
    check_conservation(net);
}
