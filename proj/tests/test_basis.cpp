#include <doctest.h>

#include "weyl/basis.hpp"

using namespace weyl;

TEST_CASE("truncation validity") {
    CHECK(valid(BasisTruncation{1, 16}));
    CHECK(valid(BasisTruncation{2, 3}));
    CHECK_FALSE(valid(BasisTruncation{0, 4}));
    CHECK_FALSE(valid(BasisTruncation{3, 4}));
    CHECK_FALSE(valid(BasisTruncation{1, 0}));
}

TEST_CASE("size is N^n") {
    CHECK(BasisTruncation{1, 16}.size() == 16);
    CHECK(BasisTruncation{2, 16}.size() == 256);
}

TEST_CASE("graded enumeration for n=2, N=3") {
    std::vector<std::vector<int>> want = {
        {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {1, 2}, {2, 1}, {2, 2}};
    CHECK(graded_indices(BasisTruncation{2, 3}) == want);
}

TEST_CASE("graded enumeration for n=1 is 0..N-1") {
    auto idx = graded_indices(BasisTruncation{1, 5});
    REQUIRE(idx.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(idx[k].size() == 1);
        CHECK(idx[k][0] == k);
    }
}

TEST_CASE("invalid truncations are rejected") {
    CHECK_THROWS_AS(graded_indices(BasisTruncation{3, 2}), ConfigError);
    CHECK_THROWS_AS(graded_indices(BasisTruncation{1, -1}), ConfigError);
}
