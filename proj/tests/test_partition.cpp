#include <doctest.h>

#include <stdexcept>

#include "parmot/partition.hpp"

using namespace parmot;

TEST_CASE("conjugation") {
    CHECK(Partition({2, 1}).conjugate() == Partition({2, 1}));
    CHECK(Partition({3}).conjugate() == Partition({1, 1, 1}));
    CHECK(Partition().conjugate() == Partition());
    for (int n = 0; n <= 8; ++n)
        for (auto& mu : partitions_of(n)) CHECK(mu.conjugate().conjugate() == mu);
}

TEST_CASE("cell statistics on (2,1)") {
    Partition mu({2, 1});
    CHECK(mu.arm(0, 0) == 1);
    CHECK(mu.leg(0, 0) == 1);
    CHECK(mu.arm(0, 1) == 0);
    CHECK(mu.leg(0, 1) == 0);
    CHECK(mu.arm(1, 0) == 0);
    CHECK(mu.leg(1, 0) == 0);
    CHECK(mu.n_stat() == 1);
    CHECK(Partition::pairing(mu, mu) == 5);
    CHECK(mu.sum_two_leg_plus_one() == 5);
}

TEST_CASE("empty partition statistics vanish") {
    Partition mu;
    CHECK(mu.size() == 0);
    CHECK(mu.n_stat() == 0);
    CHECK(Partition::pairing(mu, mu) == 0);
    CHECK(mu.sum_two_leg_plus_one() == 0);
}

TEST_CASE("enumeration counts") {
    CHECK(enumerate_partitions(0).size() == 1);
    CHECK(enumerate_partitions(3).size() == 7);
    int expect[] = {1, 1, 2, 3, 5, 7};
    for (int n = 0; n <= 5; ++n) CHECK(partitions_of(n).size() == (size_t)expect[n]);
}

TEST_CASE("pairing identities for |mu| <= 8") {
    for (int n = 0; n <= 8; ++n) {
        for (auto& mu : partitions_of(n)) {
            long p = Partition::pairing(mu, mu);
            CHECK(p == 2 * mu.n_stat() + mu.size());
            CHECK(p == mu.sum_two_leg_plus_one());
            CHECK((mu.size() - p) % 2 == 0);  // parity convention

            // n(mu') = sum of arms
            long arms = 0;
            for (int i = 0; i < mu.length(); ++i)
                for (int j = 0; j < mu.parts()[i]; ++j) arms += mu.arm(i, j);
            CHECK(mu.conjugate().n_stat() == arms);

            // arm of mu = leg of mu' under transposition
            Partition mc = mu.conjugate();
            for (int i = 0; i < mu.length(); ++i)
                for (int j = 0; j < mu.parts()[i]; ++j)
                    CHECK(mu.arm(i, j) == mc.leg(j, i));

            for (auto& nu : partitions_of(std::min(n, 5)))
                CHECK(Partition::pairing(mu, nu) == Partition::pairing(nu, mu));
        }
    }
}

TEST_CASE("invalid part lists are rejected") {
    CHECK_THROWS_AS(Partition({0}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({2, -1}), std::invalid_argument);
}
