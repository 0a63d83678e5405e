#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "suprec/combinations.hpp"

using namespace suprec;

TEST_CASE("revolving door visits every subset once with single swaps") {
  for (int n = 1; n <= 11; ++n) {
    for (int t = 1; t <= n; ++t) {
      CAPTURE(n);
      CAPTURE(t);
      RevolvingDoor door(n, t);
      std::set<std::vector<int>> seen;
      std::vector<int> prev(door.current().begin(), door.current().end());
      seen.insert(prev);
      int removed = -1;
      int added = -1;
      while (door.next(removed, added)) {
        std::vector<int> cur(door.current().begin(), door.current().end());
        REQUIRE(std::is_sorted(cur.begin(), cur.end()));
        REQUIRE(std::adjacent_find(cur.begin(), cur.end()) == cur.end());
        REQUIRE(cur.front() >= 0);
        REQUIRE(cur.back() < n);
        // cur = prev - {removed} + {added}
        std::vector<int> expect = prev;
        REQUIRE(std::count(expect.begin(), expect.end(), removed) == 1);
        REQUIRE(std::count(expect.begin(), expect.end(), added) == 0);
        std::replace(expect.begin(), expect.end(), removed, added);
        std::sort(expect.begin(), expect.end());
        REQUIRE(expect == cur);
        REQUIRE(seen.insert(cur).second);
        prev = cur;
      }
      CHECK(seen.size() == oracle::binomial(n, t));
      CHECK_FALSE(door.next(removed, added));  // stays exhausted
    }
  }
}

TEST_CASE("binomial_exact agrees with Pascal's rule and reports overflow") {
  for (int m = 0; m <= 60; ++m) {
    for (int k = 0; k <= m; ++k) CHECK(binomial_exact(m, k) == static_cast<std::int64_t>(oracle::binomial(m, k)));
  }
  CHECK(binomial_exact(5, 6) == 0);
  CHECK(binomial_exact(200, 100) == -1);
  CHECK(binomial_double(40, 12) == doctest::Approx(5586853480.0));
}
