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

#include "lexirec/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"

namespace lexirec {

namespace {

// Tags for deriving one independent seed per pipeline stage.
constexpr std::uint64_t kStageSplit = 1;
constexpr std::uint64_t kStageSearch = 2;
constexpr std::uint64_t kStageTrain = 3;
constexpr std::uint64_t kStageCluster = 4;
constexpr std::uint64_t kStageSample = 5;
constexpr std::uint64_t kStageLists = 6;

// Tags for the per-user list seeds.
constexpr std::uint64_t kTagLexicase = 1;
constexpr std::uint64_t kTagRandom = 2;

template <typename Fn>
decltype(auto) run_stage(const char* label, Fn&& fn) {
    try {
        return std::forward<Fn>(fn)();
    } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(label) + ": " + e.what(), e.epoch());
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(label) + ": " + e.what());
    } catch (const Error& e) {
        throw Error(std::string(label) + ": " + e.what());
    }
}

void validate(const ExperimentConfig& config) {
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw ValidationError("train_fraction must lie in (0, 1)");
    }
    if (config.k_values.empty()) throw ValidationError("k_values must be nonempty");
    int previous = 0;
    for (int k : config.k_values) {
        if (k <= previous) {
            throw ValidationError("k_values must be positive and strictly ascending");
        }
        previous = k;
    }
    if (config.strategies.empty()) throw ValidationError("strategies must be nonempty");
    std::set<Strategy> distinct(config.strategies.begin(), config.strategies.end());
    if (distinct.size() != config.strategies.size()) {
        throw ValidationError("strategies must be distinct");
    }
    if (config.lexicase.max_features < 1) {
        throw ValidationError("lexicase.max_features must be positive");
    }
    if (config.lexicase.epsilon_value < 0.0) {
        throw ValidationError("lexicase.epsilon_value must be non-negative");
    }
    if (config.search_trials < 0) throw ValidationError("search_trials must be non-negative");
    if (config.cluster.restarts < 1) throw ValidationError("cluster.restarts must be positive");
    if (config.user_sample < 0) throw ValidationError("user_sample must be non-negative");
    if (config.shortlist < 0) throw ValidationError("shortlist must be non-negative");
}

std::string fmt_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string fmt_metric(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string fmt_hex(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::vector<std::string_view> split_fields(std::string_view line, char separator) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(separator, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view text, const char* what, std::size_t line_no) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'",
                         line_no);
    }
    return value;
}

Split make_split(const ExperimentConfig& config, const Dataset& data) {
    const std::uint64_t seed = derive_seed(config.seed, kStageSplit);
    return config.per_user_split ? split_per_user(data, config.train_fraction, seed)
                                 : split(data, config.train_fraction, seed);
}

struct Cell {
    Strategy strategy;
    int k;
    std::vector<RecommendationList> lists;
};

MetricReport score_cell(const Cell& cell, int num_items, const Dataset& test,
                        const ClusterModel& clusters,
                        const std::map<int, RelevantClusters>& relevant) {
    MetricReport report;
    report.strategy = cell.strategy;
    report.k = cell.k;
    report.coverage = coverage(cell.lists, num_items);
    report.personalization = personalization(cell.lists);
    report.hit_rate = hit_rate(cell.lists, test);
    report.serendipity = mean_serendipity(cell.lists, clusters, relevant);
    report.num_users = static_cast<int>(cell.lists.size());
    return report;
}

TunedModel tune_model_impl(const ExperimentConfig& config, const Split& halves) {
    TunedModel tuned;
    if (config.search_trials > 0) {
        SearchResult found = run_stage("tune", [&] {
            return random_search(halves, config.search_space, config.search_trials,
                                 derive_seed(config.seed, kStageSearch));
        });
        tuned.model = std::move(found.model);
        tuned.config = found.config;
        tuned.mae = found.mae;
    } else {
        TrainConfig chosen = config.fixed_train;
        chosen.seed = derive_seed(config.seed, kStageTrain);
        tuned.model = run_stage("train", [&] { return train(halves.train, chosen); });
        tuned.config = chosen;
        tuned.mae = run_stage("evaluate", [&] { return evaluate_mae(tuned.model, halves.test); });
    }
    return tuned;
}

ExperimentResult run_pipeline(const ExperimentConfig& config, const Dataset& data) {
    Split halves = run_stage("split", [&] { return make_split(config, data); });

    ExperimentResult result;
    TunedModel tuned = tune_model_impl(config, halves);
    result.model = std::move(tuned.model);
    result.model_config = tuned.config;
    result.model_mae = tuned.mae;
    const GmfModel& model = result.model;

    result.clusters = run_stage("cluster", [&] {
        return build_cluster_model(model.item_embeddings(), model.num_items(), model.dim(),
                                   derive_seed(config.seed, kStageCluster), config.cluster);
    });

    std::vector<int> users(static_cast<std::size_t>(data.num_users()));
    std::iota(users.begin(), users.end(), 0);
    if (config.user_sample > 0 && config.user_sample < data.num_users()) {
        Rng rng(derive_seed(config.seed, kStageSample));
        rng.shuffle(users);
        users.resize(static_cast<std::size_t>(config.user_sample));
        std::sort(users.begin(), users.end());
    }

    std::map<int, RelevantClusters> relevant;
    run_stage("relevance", [&] {
        for (int u : users) {
            const auto history = user_history(halves.train, u);
            relevant.emplace(u, relevant_clusters(result.clusters, history,
                                                  config.relevance_threshold));
        }
    });

    bool need_rank = false, need_lexicase = false, need_mix = false, need_random = false;
    for (Strategy s : config.strategies) {
        need_rank = need_rank || s == Strategy::kRank || s == Strategy::kMix50;
        need_lexicase = need_lexicase || s == Strategy::kLexicase || s == Strategy::kMix50;
        need_mix = need_mix || s == Strategy::kMix50;
        need_random = need_random || s == Strategy::kRandom;
    }

    const int k_max = config.k_values.back();
    std::vector<Cell> cells;
    cells.reserve(config.strategies.size() * config.k_values.size());
    for (Strategy s : config.strategies) {
        for (int k : config.k_values) cells.push_back({s, k, {}});
    }

    const std::uint64_t lists_seed = derive_seed(config.seed, kStageLists);
    run_stage("lists", [&] {
        for (int u : users) {
            const std::vector<int> pool = candidate_pool(halves.train, u);
            if (pool.empty()) continue;
            result.users.push_back(u);

            CandidateSet candidates = build_candidate_set(model, u, pool);
            if (config.shortlist > 0 &&
                candidates.size() > static_cast<std::size_t>(config.shortlist)) {
                const RecommendationList head = rank_topk(candidates, config.shortlist);
                candidates = build_candidate_set(model, u, head.items);
            }

            const std::uint64_t user_seed = derive_seed(lists_seed, static_cast<std::uint64_t>(u));
            RecommendationList ranked, lexed, mixed, sampled;
            if (need_rank) ranked = rank_topk(candidates, k_max);
            if (need_lexicase) {
                LexicaseConfig lexicase = config.lexicase;
                lexicase.seed = derive_seed(user_seed, kTagLexicase);
                lexed = lexicase_topk(candidates, k_max, lexicase);
            }
            if (need_mix) mixed = mix_interleave(ranked, lexed, k_max);
            if (need_random) {
                sampled = random_topk(candidates.items, u, k_max,
                                      derive_seed(user_seed, kTagRandom));
            }

            std::size_t cell_index = 0;
            for (Strategy s : config.strategies) {
                const RecommendationList* full = nullptr;
                switch (s) {
                    case Strategy::kRank: full = &ranked; break;
                    case Strategy::kLexicase: full = &lexed; break;
                    case Strategy::kMix50: full = &mixed; break;
                    case Strategy::kRandom: full = &sampled; break;
                }
                for (int k : config.k_values) {
                    RecommendationList cut;
                    cut.user = u;
                    cut.strategy = s;
                    cut.k = k;
                    const std::size_t len =
                        std::min(static_cast<std::size_t>(k), full->items.size());
                    cut.items.assign(full->items.begin(),
                                     full->items.begin() + static_cast<std::ptrdiff_t>(len));
                    cells[cell_index++].lists.push_back(std::move(cut));
                }
            }
        }
        if (result.users.empty()) throw Error("no user has a nonempty candidate pool");
    });

    run_stage("metrics", [&] {
        for (const Cell& cell : cells) {
            result.reports.push_back(
                score_cell(cell, data.num_items(), halves.test, result.clusters, relevant));
        }
    });

    for (Cell& cell : cells) {
        for (RecommendationList& list : cell.lists) result.lists.push_back(std::move(list));
    }
    result.fingerprint = config_fingerprint(config);
    return result;
}

}  // namespace

Split experiment_split(const ExperimentConfig& config, const Dataset& data) {
    validate(config);
    return run_stage("split", [&] { return make_split(config, data); });
}

TunedModel tune_model(const ExperimentConfig& config, const Split& halves) {
    validate(config);
    return tune_model_impl(config, halves);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    const Dataset data = run_stage(
        "parse", [&] { return parse_ratings_file(config.data_path, config.format); });
    return run_pipeline(config, data);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& data) {
    validate(config);
    return run_pipeline(config, data);
}

std::vector<MetricReport> score_lists(const ExperimentConfig& config, const Dataset& data,
                                      const GmfModel& model,
                                      std::span<const RecommendationList> lists) {
    validate(config);
    if (lists.empty()) throw ValidationError("no lists to score");
    if (model.num_users() != data.num_users() || model.num_items() != data.num_items()) {
        throw ValidationError("model shape does not match the dataset");
    }

    const Split halves = run_stage("split", [&] { return make_split(config, data); });
    const ClusterModel clusters = run_stage("cluster", [&] {
        return build_cluster_model(model.item_embeddings(), model.num_items(), model.dim(),
                                   derive_seed(config.seed, kStageCluster), config.cluster);
    });

    std::map<int, RelevantClusters> relevant;
    run_stage("relevance", [&] {
        for (const RecommendationList& list : lists) {
            if (relevant.count(list.user) != 0) continue;
            const auto history = user_history(halves.train, list.user);
            relevant.emplace(list.user,
                             relevant_clusters(clusters, history, config.relevance_threshold));
        }
    });

    // Cells appear in dump order; lists keep their order within a cell.
    std::vector<Cell> cells;
    for (const RecommendationList& list : lists) {
        auto matches = [&](const Cell& cell) {
            return cell.strategy == list.strategy && cell.k == list.k;
        };
        auto found = std::find_if(cells.begin(), cells.end(), matches);
        if (found == cells.end()) {
            cells.push_back({list.strategy, list.k, {}});
            found = std::prev(cells.end());
        }
        found->lists.push_back(list);
    }

    std::vector<MetricReport> reports;
    run_stage("metrics", [&] {
        for (const Cell& cell : cells) {
            reports.push_back(score_cell(cell, data.num_items(), halves.test, clusters, relevant));
        }
    });
    return reports;
}

std::uint64_t config_fingerprint(const ExperimentConfig& config) {
    std::ostringstream s;
    s << "format=" << (config.format == RatingsFormat::kMl1m ? "ml-1m" : "ml-100k") << '\n';
    s << "train_fraction=" << fmt_double(config.train_fraction) << '\n';
    s << "per_user_split=" << (config.per_user_split ? 1 : 0) << '\n';
    s << "seed=" << config.seed << '\n';
    s << "k_values=";
    for (std::size_t i = 0; i < config.k_values.size(); ++i) {
        if (i != 0) s << ',';
        s << config.k_values[i];
    }
    s << '\n';
    s << "strategies=";
    for (std::size_t i = 0; i < config.strategies.size(); ++i) {
        if (i != 0) s << ',';
        s << strategy_name(config.strategies[i]);
    }
    s << '\n';
    s << "relevance_threshold=" << fmt_double(config.relevance_threshold) << '\n';
    s << "lexicase.max_features=" << config.lexicase.max_features << '\n';
    s << "lexicase.epsilon_mode="
      << (config.lexicase.epsilon_mode == LexicaseConfig::EpsilonMode::kMad ? "mad" : "absolute")
      << '\n';
    s << "lexicase.epsilon_value=" << fmt_double(config.lexicase.epsilon_value) << '\n';
    s << "search_trials=" << config.search_trials << '\n';
    if (config.search_trials == 0) {
        s << "train.dim=" << config.fixed_train.dim << '\n';
        s << "train.learning_rate=" << fmt_double(config.fixed_train.learning_rate) << '\n';
        s << "train.l2_penalty=" << fmt_double(config.fixed_train.l2_penalty) << '\n';
        s << "train.epochs=" << config.fixed_train.epochs << '\n';
        s << "train.init_scale=" << fmt_double(config.fixed_train.init_scale) << '\n';
    } else {
        s << "space.dims=";
        for (std::size_t i = 0; i < config.search_space.dims.size(); ++i) {
            if (i != 0) s << ',';
            s << config.search_space.dims[i];
        }
        s << '\n';
        s << "space.learning_rate=" << fmt_double(config.search_space.lr_min) << ','
          << fmt_double(config.search_space.lr_max) << '\n';
        s << "space.l2=" << fmt_double(config.search_space.l2_min) << ','
          << fmt_double(config.search_space.l2_max) << '\n';
        s << "space.epochs=";
        for (std::size_t i = 0; i < config.search_space.epochs.size(); ++i) {
            if (i != 0) s << ',';
            s << config.search_space.epochs[i];
        }
        s << '\n';
        s << "space.init_scale=" << fmt_double(config.search_space.init_scale) << '\n';
    }
    s << "cluster.k_items=" << config.cluster.k_items << '\n';
    s << "cluster.k_meta=" << config.cluster.k_meta << '\n';
    s << "cluster.max_iters=" << config.cluster.max_iters << '\n';
    s << "cluster.tol=" << fmt_double(config.cluster.tol) << '\n';
    s << "cluster.restarts=" << config.cluster.restarts << '\n';
    s << "user_sample=" << config.user_sample << '\n';
    s << "shortlist=" << config.shortlist << '\n';
    return fnv1a(s.str());
}

void emit_report(std::span<const MetricReport> reports, std::uint64_t fingerprint,
                 ReportFormat format, std::ostream& out) {
    if (reports.empty()) throw Error("nothing to report");

    if (format == ReportFormat::kMachine) {
        for (const MetricReport& r : reports) {
            out << "{\"strategy\":\"" << strategy_name(r.strategy) << "\",\"k\":" << r.k
                << ",\"coverage\":" << fmt_metric(r.coverage)
                << ",\"personalization\":" << fmt_metric(r.personalization)
                << ",\"hit_rate\":" << fmt_metric(r.hit_rate)
                << ",\"serendipity\":" << fmt_metric(r.serendipity)
                << ",\"num_users\":" << r.num_users << ",\"fingerprint\":\""
                << fmt_hex(fingerprint) << "\"}\n";
        }
        return;
    }

    std::vector<Strategy> strategies;
    std::vector<int> ks;
    int users_min = reports[0].num_users;
    int users_max = reports[0].num_users;
    for (const MetricReport& r : reports) {
        if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
            strategies.push_back(r.strategy);
        }
        if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
        users_min = std::min(users_min, r.num_users);
        users_max = std::max(users_max, r.num_users);
    }
    std::sort(ks.begin(), ks.end());

    auto find_report = [&](Strategy s, int k) -> const MetricReport* {
        for (const MetricReport& r : reports) {
            if (r.strategy == s && r.k == k) return &r;
        }
        return nullptr;
    };

    out << "users: " << users_min;
    if (users_max != users_min) out << "-" << users_max;
    out << "    fingerprint: " << fmt_hex(fingerprint) << "\n";

    struct MetricColumn {
        const char* name;
        double MetricReport::* field;
    };
    const MetricColumn metrics[] = {
        {"coverage", &MetricReport::coverage},
        {"personalization", &MetricReport::personalization},
        {"hit_rate", &MetricReport::hit_rate},
        {"serendipity", &MetricReport::serendipity},
    };

    constexpr int kNameWidth = 10;
    constexpr int kCellWidth = 10;
    auto pad_left = [](const std::string& text, int width) {
        return text.size() >= static_cast<std::size_t>(width)
                   ? text
                   : std::string(static_cast<std::size_t>(width) - text.size(), ' ') + text;
    };
    auto pad_right = [](const std::string& text, int width) {
        return text.size() >= static_cast<std::size_t>(width)
                   ? text
                   : text + std::string(static_cast<std::size_t>(width) - text.size(), ' ');
    };

    for (const MetricColumn& metric : metrics) {
        out << "\n" << metric.name << "\n";
        out << pad_right("strategy", kNameWidth);
        for (int k : ks) out << pad_left("k=" + std::to_string(k), kCellWidth);
        out << "\n";
        for (Strategy s : strategies) {
            out << pad_right(std::string(strategy_name(s)), kNameWidth);
            for (int k : ks) {
                const MetricReport* r = find_report(s, k);
                out << pad_left(r == nullptr ? "-" : fmt_metric(r->*(metric.field)), kCellWidth);
            }
            out << "\n";
        }
    }
}

void emit_report_file(std::span<const MetricReport> reports, std::uint64_t fingerprint,
                      ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    emit_report(reports, fingerprint, format, out);
    out.flush();
    if (!out) throw Error("failed while writing " + path);
}

void write_lists(std::span<const RecommendationList> lists, const Dataset& data,
                 std::ostream& out) {
    for (const RecommendationList& list : lists) {
        out << data.user_id(list.user) << '\t' << strategy_name(list.strategy) << '\t' << list.k
            << '\t';
        for (std::size_t j = 0; j < list.items.size(); ++j) {
            if (j != 0) out << ',';
            out << data.item_id(list.items[j]);
        }
        out << '\n';
    }
}

std::vector<RecommendationList> read_lists(std::istream& in, const Dataset& data) {
    std::vector<RecommendationList> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) throw ParseError("empty line", line_no);
        const auto fields = split_fields(line, '\t');
        if (fields.size() != 4) {
            throw ParseError("expected 4 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        RecommendationList list;
        const auto user_id = parse_number<std::int64_t>(fields[0], "user id", line_no);
        if (!data.has_user_id(user_id)) {
            throw ParseError("unknown user id '" + std::to_string(user_id) + "'", line_no);
        }
        list.user = data.user_index(user_id);
        const auto strategy = parse_strategy(fields[1]);
        if (!strategy) {
            throw ParseError("unknown strategy '" + std::string(fields[1]) + "'", line_no);
        }
        list.strategy = *strategy;
        list.k = parse_number<int>(fields[2], "k", line_no);
        if (list.k < 1) throw ParseError("k must be positive", line_no);
        std::set<int> seen;
        for (std::string_view token : split_fields(fields[3], ',')) {
            const auto item_id = parse_number<std::int64_t>(token, "item id", line_no);
            if (!data.has_item_id(item_id)) {
                throw ParseError("unknown item id '" + std::to_string(item_id) + "'", line_no);
            }
            const int index = data.item_index(item_id);
            if (!seen.insert(index).second) {
                throw ParseError("duplicate item id '" + std::to_string(item_id) + "'", line_no);
            }
            list.items.push_back(index);
        }
        if (list.items.size() > static_cast<std::size_t>(list.k)) {
            throw ParseError("list holds more than k items", line_no);
        }
        out.push_back(std::move(list));
    }
    return out;
}

void write_cluster_assignments(const ClusterModel& clusters, const Dataset& data,
                               std::ostream& out) {
    if (clusters.assignments.size() != static_cast<std::size_t>(data.num_items())) {
        throw ValidationError("cluster model does not match the dataset");
    }
    for (int i = 0; i < data.num_items(); ++i) {
        const int cluster = clusters.assignments[static_cast<std::size_t>(i)];
        out << data.item_id(i) << '\t' << cluster << '\t'
            << clusters.meta_assignments[static_cast<std::size_t>(cluster)] << '\n';
    }
}

}  // namespace lexirec
