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

#ifndef LEXIREC_DATASET_HPP
#define LEXIREC_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexirec {

// One explicit rating event. Timestamps are carried through untouched; none
// of the algorithms consume them.
struct Interaction {
    std::int64_t user_id = 0;
    std::int64_t item_id = 0;
    double rating = 0.0;
    std::int64_t timestamp = 0;
};

enum class RatingsFormat {
    kMl1m,    // "UserID::MovieID::Rating::Timestamp"
    kMl100k,  // "user\titem\trating\ttimestamp"
};

struct RatingScale {
    double min = 1.0;
    double max = 5.0;
};

/**
 * An immutable interaction corpus plus the id -> contiguous index maps shared
 * by every downstream stage. Indices cover 0..num_users-1 / 0..num_items-1
 * with no gaps, assigned in first-appearance order.
 */
class Dataset {
public:
    Dataset() = default;

    // Builds index maps from the interactions themselves. Rejects ratings
    // outside the scale and duplicate (user, item) pairs.
    static Dataset from_interactions(std::vector<Interaction> interactions,
                                     RatingScale scale);

    // Reuses the index maps of `source` (used by train/test halves so both
    // sides speak the same indices). Every id must exist in `source`.
    static Dataset with_indices_of(const Dataset& source,
                                   std::vector<Interaction> interactions);

    const std::vector<Interaction>& interactions() const { return interactions_; }
    RatingScale rating_scale() const { return scale_; }

    int num_users() const { return static_cast<int>(user_ids_.size()); }
    int num_items() const { return static_cast<int>(item_ids_.size()); }
    std::size_t size() const { return interactions_.size(); }
    bool empty() const { return interactions_.empty(); }

    int user_index(std::int64_t user_id) const;
    int item_index(std::int64_t item_id) const;
    bool has_user_id(std::int64_t user_id) const { return user_to_index_.count(user_id) != 0; }
    bool has_item_id(std::int64_t item_id) const { return item_to_index_.count(item_id) != 0; }
    std::int64_t user_id(int user) const;
    std::int64_t item_id(int item) const;

private:
    void build_per_user();

    std::vector<Interaction> interactions_;
    std::unordered_map<std::int64_t, int> user_to_index_;
    std::unordered_map<std::int64_t, int> item_to_index_;
    std::vector<std::int64_t> user_ids_;  // index -> id
    std::vector<std::int64_t> item_ids_;
    std::vector<std::vector<std::pair<int, double>>> by_user_;  // (item index, rating)
    RatingScale scale_;

    friend std::vector<std::pair<int, double>> user_history(const Dataset&, int);
    friend std::vector<int> candidate_pool(const Dataset&, int);
};

struct Split {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

// Parses a MovieLens-format ratings stream. Throws ParseError (with line
// number) on malformed lines and ValidationError on out-of-scale ratings or
// duplicate (user, item) pairs.
Dataset parse_ratings(std::istream& source, RatingsFormat format);
Dataset parse_ratings_file(const std::string& path, RatingsFormat format);

// Writes interactions back out in the given format, one line each, in corpus
// order. Non-integral ratings are printed with enough digits to round-trip.
void write_ratings(const Dataset& data, RatingsFormat format, std::ostream& out);

// Global random split: a seeded permutation of the interactions, first
// floor(train_fraction * N) to train. Both halves share the source indices.
Split split(const Dataset& data, double train_fraction, std::uint64_t seed);

// Stratified variant: each user's interactions are split independently at
// the same fraction (seeded per user).
Split split_per_user(const Dataset& data, double train_fraction, std::uint64_t seed);

// All interactions of `user`, in corpus order. Empty if the user has none.
std::vector<std::pair<int, double>> user_history(const Dataset& data, int user);

// All item indices `user` has not interacted with, ascending.
std::vector<int> candidate_pool(const Dataset& data, int user);

}  // namespace lexirec

#endif  // LEXIREC_DATASET_HPP
