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

#include "lexirec/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"

namespace lexirec {

namespace {

// Pairs (user, item) hashed together for the duplicate check.
struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
        std::uint64_t s = static_cast<std::uint64_t>(p.first) * 0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(s ^ (static_cast<std::uint64_t>(p.second) + (s << 13)));
    }
};

template <typename T>
bool parse_number(std::string_view text, T& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line, std::string_view sep) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
    return fields;
}

}  // namespace

Dataset Dataset::from_interactions(std::vector<Interaction> interactions, RatingScale scale) {
    Dataset data;
    data.scale_ = scale;
    data.interactions_ = std::move(interactions);
    std::unordered_set<std::pair<std::int64_t, std::int64_t>, PairHash> seen;
    seen.reserve(data.interactions_.size());
    for (const Interaction& it : data.interactions_) {
        if (it.rating < scale.min || it.rating > scale.max || !std::isfinite(it.rating)) {
            throw ValidationError("rating " + std::to_string(it.rating) +
                                  " outside scale [" + std::to_string(scale.min) + ", " +
                                  std::to_string(scale.max) + "]");
        }
        if (!seen.insert({it.user_id, it.item_id}).second) {
            throw ValidationError("duplicate (user, item) pair (" + std::to_string(it.user_id) +
                                  ", " + std::to_string(it.item_id) + ")");
        }
        if (data.user_to_index_.emplace(it.user_id, data.num_users()).second) {
            data.user_ids_.push_back(it.user_id);
        }
        if (data.item_to_index_.emplace(it.item_id, data.num_items()).second) {
            data.item_ids_.push_back(it.item_id);
        }
    }
    data.build_per_user();
    return data;
}

Dataset Dataset::with_indices_of(const Dataset& source, std::vector<Interaction> interactions) {
    Dataset data;
    data.scale_ = source.scale_;
    data.user_to_index_ = source.user_to_index_;
    data.item_to_index_ = source.item_to_index_;
    data.user_ids_ = source.user_ids_;
    data.item_ids_ = source.item_ids_;
    data.interactions_ = std::move(interactions);
    for (const Interaction& it : data.interactions_) {
        if (!data.has_user_id(it.user_id) || !data.has_item_id(it.item_id)) {
            throw ValidationError("interaction references an id absent from the source indices");
        }
    }
    data.build_per_user();
    return data;
}

void Dataset::build_per_user() {
    by_user_.assign(user_ids_.size(), {});
    for (const Interaction& it : interactions_) {
        by_user_[static_cast<std::size_t>(user_to_index_.at(it.user_id))]
            .emplace_back(item_to_index_.at(it.item_id), it.rating);
    }
}

int Dataset::user_index(std::int64_t user_id) const {
    auto found = user_to_index_.find(user_id);
    if (found == user_to_index_.end()) {
        throw ValidationError("unknown user id " + std::to_string(user_id));
    }
    return found->second;
}

int Dataset::item_index(std::int64_t item_id) const {
    auto found = item_to_index_.find(item_id);
    if (found == item_to_index_.end()) {
        throw ValidationError("unknown item id " + std::to_string(item_id));
    }
    return found->second;
}

std::int64_t Dataset::user_id(int user) const {
    if (user < 0 || user >= num_users()) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
    return user_ids_[static_cast<std::size_t>(user)];
}

std::int64_t Dataset::item_id(int item) const {
    if (item < 0 || item >= num_items()) {
        throw std::out_of_range("item index " + std::to_string(item) + " out of range");
    }
    return item_ids_[static_cast<std::size_t>(item)];
}

Dataset parse_ratings(std::istream& source, RatingsFormat format) {
    const std::string_view sep = format == RatingsFormat::kMl1m ? "::" : "\t";
    const RatingScale scale;  // both MovieLens formats use 1..5
    std::vector<Interaction> interactions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            throw ParseError("empty line", line_no);
        }
        const auto fields = split_fields(line, sep);
        if (fields.size() != 4) {
            throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
        }
        Interaction it;
        if (!parse_number(fields[0], it.user_id)) throw ParseError("bad user id", line_no);
        if (!parse_number(fields[1], it.item_id)) throw ParseError("bad item id", line_no);
        if (!parse_number(fields[2], it.rating)) throw ParseError("bad rating", line_no);
        if (!parse_number(fields[3], it.timestamp)) throw ParseError("bad timestamp", line_no);
        if (it.rating < scale.min || it.rating > scale.max || !std::isfinite(it.rating)) {
            throw ValidationError("line " + std::to_string(line_no) + ": rating " +
                                  std::to_string(it.rating) + " outside scale");
        }
        interactions.push_back(it);
    }
    return Dataset::from_interactions(std::move(interactions), scale);
}

Dataset parse_ratings_file(const std::string& path, RatingsFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open ratings file: " + path);
    }
    return parse_ratings(in, format);
}

void write_ratings(const Dataset& data, RatingsFormat format, std::ostream& out) {
    const char* sep = format == RatingsFormat::kMl1m ? "::" : "\t";
    char rating_buf[40];
    for (const Interaction& it : data.interactions()) {
        double integral = 0.0;
        if (std::modf(it.rating, &integral) == 0.0) {
            std::snprintf(rating_buf, sizeof(rating_buf), "%lld",
                          static_cast<long long>(integral));
        } else {
            std::snprintf(rating_buf, sizeof(rating_buf), "%.17g", it.rating);
        }
        out << it.user_id << sep << it.item_id << sep << rating_buf << sep << it.timestamp
            << '\n';
    }
}

namespace {

Split make_split(const Dataset& data, std::vector<Interaction> train_rows,
                 std::vector<Interaction> test_rows, double train_fraction,
                 std::uint64_t seed) {
    Split out;
    out.train = Dataset::with_indices_of(data, std::move(train_rows));
    out.test = Dataset::with_indices_of(data, std::move(test_rows));
    out.seed = seed;
    out.train_fraction = train_fraction;
    return out;
}

}  // namespace

Split split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (data.empty()) throw Error("cannot split an empty dataset");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train_fraction must lie in (0, 1)");
    }
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    std::vector<Interaction> train_rows;
    std::vector<Interaction> test_rows;
    train_rows.reserve(n_train);
    test_rows.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        const Interaction& it = data.interactions()[order[i]];
        (i < n_train ? train_rows : test_rows).push_back(it);
    }
    return make_split(data, std::move(train_rows), std::move(test_rows), train_fraction, seed);
}

Split split_per_user(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (data.empty()) throw Error("cannot split an empty dataset");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train_fraction must lie in (0, 1)");
    }
    // Group interaction positions by user, preserving corpus order.
    std::vector<std::vector<std::size_t>> rows_of_user(
        static_cast<std::size_t>(data.num_users()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        rows_of_user[static_cast<std::size_t>(
                         data.user_index(data.interactions()[i].user_id))]
            .push_back(i);
    }
    std::vector<Interaction> train_rows;
    std::vector<Interaction> test_rows;
    for (std::size_t u = 0; u < rows_of_user.size(); ++u) {
        auto& rows = rows_of_user[u];
        Rng rng(derive_seed(seed, u));
        rng.shuffle(rows);
        const std::size_t n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < n_train ? train_rows : test_rows).push_back(data.interactions()[rows[i]]);
        }
    }
    return make_split(data, std::move(train_rows), std::move(test_rows), train_fraction, seed);
}

std::vector<std::pair<int, double>> user_history(const Dataset& data, int user) {
    if (user < 0 || user >= data.num_users()) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
    return data.by_user_[static_cast<std::size_t>(user)];
}

std::vector<int> candidate_pool(const Dataset& data, int user) {
    if (user < 0 || user >= data.num_users()) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
    std::vector<bool> rated(static_cast<std::size_t>(data.num_items()), false);
    for (const auto& [item, rating] : data.by_user_[static_cast<std::size_t>(user)]) {
        rated[static_cast<std::size_t>(item)] = true;
    }
    std::vector<int> pool;
    pool.reserve(rated.size());
    for (int i = 0; i < data.num_items(); ++i) {
        if (!rated[static_cast<std::size_t>(i)]) pool.push_back(i);
    }
    return pool;
}

}  // namespace lexirec
