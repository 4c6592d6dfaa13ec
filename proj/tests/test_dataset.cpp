// Copyright 2026 The lexirec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "lexirec/dataset.hpp"
#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"
#include "support.hpp"

using namespace lexirec;
using lexirec::testing::ia;
using lexirec::testing::make_dataset;

namespace {

bool same_interaction(const Interaction& a, const Interaction& b) {
    return a.user_id == b.user_id && a.item_id == b.item_id && a.rating == b.rating &&
           a.timestamp == b.timestamp;
}

bool same_interactions(const std::vector<Interaction>& a, const std::vector<Interaction>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_interaction(a[i], b[i])) return false;
    }
    return true;
}

// Random corpus with unique (user, item) pairs and integer ratings in scale.
Dataset random_dataset(std::uint64_t seed, int num_users, int num_items, int count) {
    Rng rng(seed);
    std::set<std::pair<int, int>> used;
    std::vector<Interaction> out;
    while (static_cast<int>(out.size()) < count) {
        const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_users)));
        const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_items)));
        if (!used.insert({u, i}).second) continue;
        const double rating = 1.0 + static_cast<double>(rng.next_below(5));
        out.push_back(ia(u, i, rating, static_cast<std::int64_t>(out.size())));
    }
    return make_dataset(std::move(out));
}

}  // namespace

TEST_CASE("parsing a colon-separated line yields one interaction with index maps") {
    std::istringstream in("1::1193::5::978300760\n");
    const Dataset data = parse_ratings(in, RatingsFormat::kMl1m);
    REQUIRE(data.size() == 1);
    CHECK(data.interactions()[0].user_id == 1);
    CHECK(data.interactions()[0].item_id == 1193);
    CHECK(data.interactions()[0].rating == 5.0);
    CHECK(data.interactions()[0].timestamp == 978300760);
    CHECK(data.user_index(1) == 0);
    CHECK(data.item_index(1193) == 0);
    CHECK(data.num_users() == 1);
    CHECK(data.num_items() == 1);
}

TEST_CASE("parsing a tab-separated line yields one interaction") {
    std::istringstream in("196\t242\t3\t881250949\n");
    const Dataset data = parse_ratings(in, RatingsFormat::kMl100k);
    REQUIRE(data.size() == 1);
    CHECK(data.interactions()[0].user_id == 196);
    CHECK(data.interactions()[0].item_id == 242);
    CHECK(data.interactions()[0].rating == 3.0);
}

TEST_CASE("index maps are assigned in first-appearance order") {
    std::istringstream in("7\t30\t4\t0\n3\t30\t2\t1\n7\t10\t5\t2\n");
    const Dataset data = parse_ratings(in, RatingsFormat::kMl100k);
    CHECK(data.user_index(7) == 0);
    CHECK(data.user_index(3) == 1);
    CHECK(data.item_index(30) == 0);
    CHECK(data.item_index(10) == 1);
    CHECK(data.user_id(0) == 7);
    CHECK(data.item_id(1) == 10);
}

TEST_CASE("out-of-scale rating is rejected with its line number") {
    std::istringstream in("1::1193::9::978300760\n");
    CHECK_THROWS_WITH_AS(parse_ratings(in, RatingsFormat::kMl1m),
                         doctest::Contains("line 1"), ValidationError);
}

TEST_CASE("malformed lines raise parse errors carrying the line number") {
    SUBCASE("wrong field count") {
        std::istringstream in("1::1193::5\n");
        try {
            parse_ratings(in, RatingsFormat::kMl1m);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("non-numeric rating on a later line") {
        std::istringstream in("1\t2\t3\t4\n1\t3\tx\t4\n");
        try {
            parse_ratings(in, RatingsFormat::kMl100k);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("wrong separator for the declared format") {
        std::istringstream in("1::1193::5::978300760\n");
        CHECK_THROWS_AS(parse_ratings(in, RatingsFormat::kMl100k), ParseError);
    }
}

TEST_CASE("duplicate (user, item) pairs are rejected") {
    std::istringstream in("1\t2\t3\t0\n1\t2\t4\t1\n");
    CHECK_THROWS_AS(parse_ratings(in, RatingsFormat::kMl100k), ValidationError);
}

TEST_CASE("writing and reparsing preserves the semantic content") {
    const Dataset data = random_dataset(5, 8, 12, 40);
    for (RatingsFormat format : {RatingsFormat::kMl100k, RatingsFormat::kMl1m}) {
        std::ostringstream out;
        write_ratings(data, format, out);
        std::istringstream in(out.str());
        const Dataset back = parse_ratings(in, format);
        CHECK(same_interactions(back.interactions(), data.interactions()));
        CHECK(back.num_users() == data.num_users());
        CHECK(back.num_items() == data.num_items());
    }
}

TEST_CASE("a 10-interaction split at 0.7 gives disjoint 7/3 halves") {
    const Dataset data = random_dataset(11, 5, 6, 10);
    const Split halves = split(data, 0.7, 42);
    CHECK(halves.train.size() == 7);
    CHECK(halves.test.size() == 3);

    std::set<std::pair<std::int64_t, std::int64_t>> train_pairs, test_pairs;
    for (const Interaction& it : halves.train.interactions()) {
        train_pairs.insert({it.user_id, it.item_id});
    }
    for (const Interaction& it : halves.test.interactions()) {
        test_pairs.insert({it.user_id, it.item_id});
    }
    for (const auto& pair : test_pairs) CHECK(train_pairs.count(pair) == 0);
    CHECK(train_pairs.size() + test_pairs.size() == data.size());
}

TEST_CASE("splitting twice with the same seed is bit-identical") {
    const Dataset data = random_dataset(12, 5, 6, 10);
    const Split a = split(data, 0.7, 42);
    const Split b = split(data, 0.7, 42);
    CHECK(same_interactions(a.train.interactions(), b.train.interactions()));
    CHECK(same_interactions(a.test.interactions(), b.test.interactions()));
}

TEST_CASE("different seeds keep the same half sizes") {
    const Dataset data = random_dataset(13, 5, 6, 10);
    const Split a = split(data, 0.7, 1);
    const Split b = split(data, 0.7, 2);
    CHECK(a.train.size() == 7);
    CHECK(b.train.size() == 7);
    CHECK(a.test.size() == 3);
    CHECK(b.test.size() == 3);
}

TEST_CASE("both split halves reuse the source index maps") {
    const Dataset data = random_dataset(14, 6, 9, 30);
    const Split halves = split(data, 0.7, 3);
    CHECK(halves.train.num_users() == data.num_users());
    CHECK(halves.train.num_items() == data.num_items());
    CHECK(halves.test.num_users() == data.num_users());
    for (int u = 0; u < data.num_users(); ++u) {
        CHECK(halves.train.user_id(u) == data.user_id(u));
    }
    for (int i = 0; i < data.num_items(); ++i) {
        CHECK(halves.test.item_id(i) == data.item_id(i));
    }
}

TEST_CASE("splits partition the corpus across fractions and seeds") {
    const Dataset data = random_dataset(15, 7, 9, 45);
    for (double fraction : {0.2, 0.5, 0.7, 0.9}) {
        for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
            const Split halves = split(data, fraction, seed);
            CHECK(halves.train.size() + halves.test.size() == data.size());
            CHECK(halves.train.size() ==
                  static_cast<std::size_t>(fraction * static_cast<double>(data.size())));
            std::set<std::pair<std::int64_t, std::int64_t>> seen;
            for (const Interaction& it : halves.train.interactions()) {
                seen.insert({it.user_id, it.item_id});
            }
            for (const Interaction& it : halves.test.interactions()) {
                CHECK(seen.insert({it.user_id, it.item_id}).second);
            }
            CHECK(seen.size() == data.size());
        }
    }
}

TEST_CASE("per-user split keeps every user's fraction independently") {
    std::vector<Interaction> rows;
    for (int u = 0; u < 4; ++u) {
        for (int i = 0; i < 10; ++i) rows.push_back(ia(u, i, 3.0, u * 10 + i));
    }
    const Dataset data = make_dataset(rows);
    const Split halves = split_per_user(data, 0.7, 9);
    for (int u = 0; u < 4; ++u) {
        CHECK(user_history(halves.train, u).size() == 7);
        CHECK(user_history(halves.test, u).size() == 3);
    }
}

TEST_CASE("empty datasets cannot be split") {
    const Dataset data;
    CHECK_THROWS_AS(split(data, 0.7, 0), Error);
}

TEST_CASE("out-of-range fractions are rejected") {
    const Dataset data = random_dataset(16, 4, 4, 8);
    CHECK_THROWS_AS(split(data, 0.0, 0), Error);
    CHECK_THROWS_AS(split(data, 1.0, 0), Error);
}

TEST_CASE("user history returns that user's interactions") {
    const Dataset data = make_dataset({ia(0, 3, 5.0), ia(1, 3, 1.0), ia(0, 7, 2.0)});
    const auto history = user_history(data, 0);
    REQUIRE(history.size() == 2);
    CHECK(history[0] == std::pair<int, double>{data.item_index(3), 5.0});
    CHECK(history[1] == std::pair<int, double>{data.item_index(7), 2.0});
}

TEST_CASE("a user present in the indices but absent from a half has empty history") {
    const Dataset source = make_dataset({ia(0, 0, 4.0), ia(1, 1, 3.0)});
    const Dataset train_only =
        Dataset::with_indices_of(source, {ia(0, 0, 4.0)});
    CHECK(train_only.num_users() == 2);
    CHECK(user_history(train_only, 1).empty());
}

TEST_CASE("user history rejects out-of-range indices") {
    const Dataset data = make_dataset({ia(0, 0, 4.0)});
    CHECK_THROWS(user_history(data, data.num_users()));
    CHECK_THROWS(user_history(data, -1));
}

TEST_CASE("candidate pool is the complement of the user's items") {
    std::vector<Interaction> rows = {ia(0, 0, 4.0), ia(0, 2, 2.0)};
    for (int i = 0; i < 5; ++i) rows.push_back(ia(1, i, 3.0));
    const Dataset data = make_dataset(rows);
    REQUIRE(data.num_items() == 5);

    SUBCASE("user rated two of five") {
        const auto pool = candidate_pool(data, 0);
        CHECK(pool == std::vector<int>{data.item_index(1), data.item_index(3),
                                       data.item_index(4)});
    }
    SUBCASE("user rated everything") {
        CHECK(candidate_pool(data, 1).empty());
    }
    SUBCASE("user rated nothing") {
        const Dataset half = Dataset::with_indices_of(data, {ia(1, 0, 3.0)});
        CHECK(candidate_pool(half, 0).size() == 5);
    }
}

TEST_CASE("candidate pools never overlap histories") {
    const Dataset data = random_dataset(17, 9, 14, 60);
    for (int u = 0; u < data.num_users(); ++u) {
        std::set<int> rated;
        for (const auto& [item, rating] : user_history(data, u)) rated.insert(item);
        for (int item : candidate_pool(data, u)) CHECK(rated.count(item) == 0);
        CHECK(rated.size() + candidate_pool(data, u).size() ==
              static_cast<std::size_t>(data.num_items()));
    }
}

TEST_CASE("with_indices_of rejects ids unknown to the source") {
    const Dataset source = make_dataset({ia(0, 0, 4.0)});
    CHECK_THROWS_AS(Dataset::with_indices_of(source, {ia(5, 0, 4.0)}), ValidationError);
}
