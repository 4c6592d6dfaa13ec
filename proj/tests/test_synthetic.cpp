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
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lexirec/clustering.hpp"
#include "lexirec/error.hpp"
#include "lexirec/model.hpp"
#include "lexirec/synthetic.hpp"
#include "support.hpp"

using namespace lexirec;
using lexirec::testing::best_permutation_agreement;

TEST_CASE("noiseless groups rate in-group items exactly five and others exactly two") {
    SyntheticConfig config;
    config.num_users = 6;
    config.num_items = 8;
    config.num_groups = 2;
    config.noise = 0.0;
    config.density = 1.0;
    const std::vector<Interaction> interactions = synthetic_interactions(config);
    REQUIRE(interactions.size() == 48);
    for (const Interaction& it : interactions) {
        const int user_group = synthetic_group(static_cast<int>(it.user_id) - 1, 2);
        const int item_group = synthetic_group(static_cast<int>(it.item_id) - 1, 2);
        if (user_group == item_group) {
            CHECK(it.rating == 5.0);
        } else {
            CHECK(it.rating == 2.0);
        }
    }
}

TEST_CASE("generation is deterministic per configuration") {
    SyntheticConfig config;
    config.num_users = 12;
    config.num_items = 9;
    config.num_groups = 3;
    config.noise = 0.8;
    config.density = 0.6;
    config.seed = 21;
    const std::vector<Interaction> a = synthetic_interactions(config);
    const std::vector<Interaction> b = synthetic_interactions(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].user_id == b[i].user_id);
        CHECK(a[i].item_id == b[i].item_id);
        CHECK(a[i].rating == b[i].rating);
        CHECK(a[i].timestamp == b[i].timestamp);
    }
    const std::vector<Interaction> c = synthetic_interactions([&] {
        SyntheticConfig other = config;
        other.seed = 22;
        return other;
    }());
    bool any_difference = c.size() != a.size();
    for (std::size_t i = 0; !any_difference && i < a.size(); ++i) {
        any_difference = a[i].rating != c[i].rating || a[i].item_id != c[i].item_id;
    }
    CHECK(any_difference);
}

TEST_CASE("large noise still yields ratings inside the scale") {
    SyntheticConfig config;
    config.num_users = 10;
    config.num_items = 10;
    config.num_groups = 2;
    config.noise = 3.0;
    config.density = 1.0;
    for (const Interaction& it : synthetic_interactions(config)) {
        CHECK(it.rating >= 1.0);
        CHECK(it.rating <= 5.0);
    }
}

TEST_CASE("density controls the expected interaction count") {
    SyntheticConfig config;
    config.num_users = 40;
    config.num_items = 40;
    config.num_groups = 4;
    config.density = 0.5;
    config.seed = 9;
    const std::size_t count = synthetic_interactions(config).size();
    // 1600 coin flips at p = 0.5; allow a five-sigma band.
    CHECK(count > 700);
    CHECK(count < 900);
}

TEST_CASE("in-group bias raises matching-group density and leaves the rest alone") {
    SyntheticConfig config;
    config.num_users = 40;
    config.num_items = 40;
    config.num_groups = 4;
    config.density = 0.2;
    config.seed = 17;

    SyntheticConfig biased = config;
    biased.in_group_bias = 4.0;

    auto split_counts = [](const std::vector<Interaction>& interactions) {
        std::pair<int, int> counts{0, 0};
        for (const Interaction& it : interactions) {
            const bool matched = synthetic_group(static_cast<int>(it.user_id) - 1, 4) ==
                                 synthetic_group(static_cast<int>(it.item_id) - 1, 4);
            (matched ? counts.first : counts.second) += 1;
        }
        return counts;
    };

    // 400 in-group pairs at p = 0.8 against 1200 out-group pairs at p = 0.2.
    const auto [in_biased, out_biased] = split_counts(synthetic_interactions(biased));
    CHECK(in_biased > 280);
    CHECK(out_biased > 140);
    CHECK(out_biased < 340);
    CHECK(double(in_biased) / 400.0 > 2.0 * double(out_biased) / 1200.0);

    // The default multiplier of one reproduces the unbiased stream bit for bit.
    SyntheticConfig unit = config;
    unit.in_group_bias = 1.0;
    const std::vector<Interaction> plain = synthetic_interactions(config);
    const std::vector<Interaction> same = synthetic_interactions(unit);
    REQUIRE(plain.size() == same.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].item_id == same[i].item_id);
        CHECK(plain[i].rating == same[i].rating);
    }

    // The cap keeps the biased probability at one rather than overflowing.
    SyntheticConfig capped = config;
    capped.density = 1.0;
    capped.in_group_bias = 50.0;
    const auto [in_capped, out_capped] = split_counts(synthetic_interactions(capped));
    CHECK(in_capped == 400);
    CHECK(out_capped == 1200);
}

TEST_CASE("popularity skew concentrates ratings on high-score items") {
    SyntheticConfig config;
    config.num_users = 60;
    config.num_items = 100;
    config.num_groups = 1;
    config.density = 0.2;
    config.popularity_skew = 3.0;
    config.seed = 31;

    const std::vector<double> scores = synthetic_popularity(config);
    REQUIRE(scores.size() == 100);
    for (double s : scores) {
        CHECK(s >= 0.0);
        CHECK(s < 1.0);
    }
    const std::vector<double> again = synthetic_popularity(config);
    CHECK(scores == again);

    std::vector<int> counts(100, 0);
    for (const Interaction& it : synthetic_interactions(config)) {
        counts[static_cast<std::size_t>(it.item_id) - 1] += 1;
    }
    int top = 0, top_n = 0, bottom = 0, bottom_n = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        if (scores[i] > 0.75) {
            top += counts[i];
            top_n += 1;
        } else if (scores[i] < 0.25) {
            bottom += counts[i];
            bottom_n += 1;
        }
    }
    REQUIRE(top_n > 0);
    REQUIRE(bottom_n > 0);
    // exp(3 * 0.25) ~ 2.1 separates the quartile means by well over 2x.
    CHECK(double(top) / top_n > 2.0 * double(bottom) / bottom_n);
}

TEST_CASE("quality range lifts ratings of popular items and respects the scale") {
    SyntheticConfig config;
    config.num_users = 30;
    config.num_items = 80;
    config.num_groups = 1;
    config.density = 1.0;
    config.noise = 0.0;
    config.quality_range = 2.0;
    config.seed = 7;

    const std::vector<double> scores = synthetic_popularity(config);
    for (const Interaction& it : synthetic_interactions(config)) {
        const double score = scores[static_cast<std::size_t>(it.item_id) - 1];
        const double expected = std::clamp(5.0 + 2.0 * (score - 0.5), 1.0, 5.0);
        CHECK(it.rating == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("quality range shifts ratings without changing which pairs are rated") {
    SyntheticConfig config;
    config.num_users = 20;
    config.num_items = 30;
    config.num_groups = 5;
    config.density = 0.4;
    config.noise = 0.8;
    config.seed = 77;
    const std::vector<Interaction> plain = synthetic_interactions(config);

    SyntheticConfig shifted = config;
    shifted.quality_range = 1.0;
    const std::vector<Interaction> lifted = synthetic_interactions(shifted);
    REQUIRE(plain.size() == lifted.size());
    const std::vector<double> scores = synthetic_popularity(config);
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].user_id == lifted[i].user_id);
        CHECK(plain[i].item_id == lifted[i].item_id);
        const double score = scores[static_cast<std::size_t>(plain[i].item_id) - 1];
        const double expected = std::clamp(plain[i].rating + (score - 0.5), 1.0, 5.0);
        CHECK(lifted[i].rating == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("the dataset form indexes every generated interaction") {
    SyntheticConfig config;
    config.num_users = 8;
    config.num_items = 6;
    config.num_groups = 2;
    config.density = 1.0;
    const Dataset data = synthetic_dataset(config);
    CHECK(data.num_users() == 8);
    CHECK(data.num_items() == 6);
    CHECK(data.size() == 48);
}

TEST_CASE("invalid generator parameters are rejected") {
    SyntheticConfig config;
    config.num_users = 5;
    config.num_items = 5;

    SyntheticConfig bad = config;
    bad.num_groups = 0;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.num_groups = 6;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.density = 0.0;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.density = 1.5;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.noise = -0.1;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.num_users = 0;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.in_group_bias = 0.5;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.popularity_skew = -1.0;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
    bad = config;
    bad.quality_range = -0.5;
    CHECK_THROWS_AS(synthetic_interactions(bad), ValidationError);
}

TEST_CASE("planted groups are recoverable from trained item embeddings") {
    SyntheticConfig config;
    config.num_users = 60;
    config.num_items = 20;
    config.num_groups = 4;
    config.noise = 0.5;
    config.density = 1.0;
    config.seed = 3;
    const Dataset data = synthetic_dataset(config);

    TrainConfig train_config;
    train_config.dim = 8;
    train_config.learning_rate = 0.05;
    train_config.epochs = 40;
    train_config.l2_penalty = 1e-4;
    train_config.seed = 5;
    const GmfModel model = train(data, train_config);

    ClusterConfig cluster_config;
    cluster_config.k_items = 4;
    const ClusterModel clusters =
        build_cluster_model(model.item_embeddings(), model.num_items(), model.dim(), 11,
                            cluster_config);

    std::vector<int> planted(static_cast<std::size_t>(data.num_items()));
    for (int i = 0; i < data.num_items(); ++i) {
        planted[static_cast<std::size_t>(i)] =
            synthetic_group(static_cast<int>(data.item_id(i)) - 1, 4);
    }
    CHECK(best_permutation_agreement(clusters.assignments, planted, 4) >= 0.90);
}
