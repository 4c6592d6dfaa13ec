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

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lexirec/error.hpp"
#include "lexirec/experiment.hpp"

namespace {

using lexirec::Dataset;
using lexirec::ExperimentConfig;
using lexirec::LexicaseConfig;
using lexirec::RatingsFormat;
using lexirec::ReportFormat;
using lexirec::Strategy;

// Per-subcommand option storage. Each subcommand gets its own instance so a
// config file section for one command can never bleed into another's run.
struct CommandState {
    ExperimentConfig config;
    ReportFormat report_format = ReportFormat::kTable;
    std::string model_out;
    std::string report_out;
    std::string lists_out;
    std::string clusters_out;
    std::string lists_in;
    std::string model_in;
};

// Every ExperimentConfig field is reachable from every subcommand, so one
// config file section can drive train, bench and score interchangeably.
void add_experiment_flags(CLI::App& cmd, ExperimentConfig& config) {
    cmd.add_option("--data", config.data_path, "Ratings file")->required();
    cmd.add_option("--format", config.format, "Ratings file format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, RatingsFormat>{{"ml-1m", RatingsFormat::kMl1m},
                                                 {"ml-100k", RatingsFormat::kMl100k}}))
        ->default_str("ml-100k");
    cmd.add_option("--train-fraction", config.train_fraction,
                   "Fraction of interactions used for training")
        ->capture_default_str();
    cmd.add_flag("--per-user-split", config.per_user_split,
                 "Split each user's interactions independently");
    cmd.add_option("--seed", config.seed, "Master seed; every stage derives from it")
        ->capture_default_str();
    cmd.add_option("--k-values", config.k_values, "List lengths to benchmark, ascending")
        ->delimiter(',')
        ->default_str("5,10,15,20,25");
    cmd.add_option("--strategies", config.strategies, "Selection strategies to run")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Strategy>{{"r", Strategy::kRank},
                                            {"l", Strategy::kLexicase},
                                            {"m-50", Strategy::kMix50},
                                            {"random", Strategy::kRandom}}))
        ->delimiter(',')
        ->default_str("r,l,m-50,random");
    cmd.add_option("--relevance-threshold", config.relevance_threshold,
                   "Rating at or above which a cluster counts as relevant")
        ->capture_default_str();

    cmd.add_option("--max-features", config.lexicase.max_features,
                   "Feature-visit bound per lexicase selection")
        ->capture_default_str();
    cmd.add_option("--epsilon-mode", config.lexicase.epsilon_mode,
                   "How the lexicase filter tolerance is chosen")
        ->transform(CLI::CheckedTransformer(std::map<std::string, LexicaseConfig::EpsilonMode>{
            {"mad", LexicaseConfig::EpsilonMode::kMad},
            {"absolute", LexicaseConfig::EpsilonMode::kAbsolute}}))
        ->default_str("mad");
    cmd.add_option("--epsilon", config.lexicase.epsilon_value,
                   "Filter tolerance when --epsilon-mode=absolute")
        ->capture_default_str();

    cmd.add_option("--trials", config.search_trials,
                   "Random-search trials; 0 trains with the fixed hyperparameters")
        ->capture_default_str();
    cmd.add_option("--dim", config.fixed_train.dim, "Embedding dimension (with --trials 0)")
        ->capture_default_str();
    cmd.add_option("--learning-rate", config.fixed_train.learning_rate,
                   "SGD step size (with --trials 0)")
        ->capture_default_str();
    cmd.add_option("--l2", config.fixed_train.l2_penalty,
                   "Embedding-row penalty (with --trials 0)")
        ->capture_default_str();
    cmd.add_option("--epochs", config.fixed_train.epochs, "Training passes (with --trials 0)")
        ->capture_default_str();
    cmd.add_option("--init-scale", config.fixed_train.init_scale,
                   "Uniform init half-width (with --trials 0)")
        ->capture_default_str();

    cmd.add_option("--space-dims", config.search_space.dims, "Search choices for dim")
        ->delimiter(',')
        ->default_str("8,16,32");
    cmd.add_option("--space-lr-min", config.search_space.lr_min,
                   "Log-uniform learning-rate lower bound")
        ->capture_default_str();
    cmd.add_option("--space-lr-max", config.search_space.lr_max,
                   "Log-uniform learning-rate upper bound")
        ->capture_default_str();
    cmd.add_option("--space-l2-min", config.search_space.l2_min,
                   "Log-uniform l2-penalty lower bound")
        ->capture_default_str();
    cmd.add_option("--space-l2-max", config.search_space.l2_max,
                   "Log-uniform l2-penalty upper bound")
        ->capture_default_str();
    cmd.add_option("--space-epochs", config.search_space.epochs, "Search choices for epochs")
        ->delimiter(',')
        ->default_str("5,10,20");
    cmd.add_option("--space-init-scale", config.search_space.init_scale,
                   "Init half-width used by every trial")
        ->capture_default_str();

    cmd.add_option("--clusters", config.cluster.k_items,
                   "Item cluster count; 0 uses floor(sqrt(num_items))")
        ->capture_default_str();
    cmd.add_option("--meta-clusters", config.cluster.k_meta,
                   "Meta-cluster count; 0 uses floor(sqrt(k_items))")
        ->capture_default_str();
    cmd.add_option("--cluster-iters", config.cluster.max_iters, "Lloyd iteration cap")
        ->capture_default_str();
    cmd.add_option("--cluster-tol", config.cluster.tol, "Centroid-movement stop tolerance")
        ->capture_default_str();
    cmd.add_option("--cluster-restarts", config.cluster.restarts,
                   "Independent k-means rounds; lowest inertia wins")
        ->capture_default_str();

    cmd.add_option("--user-sample", config.user_sample,
                   "Evaluate a seeded sample of this many users; 0 evaluates all")
        ->capture_default_str();
    cmd.add_option("--shortlist", config.shortlist,
                   "Pre-truncate each pool to its top N by aggregate score; 0 keeps all")
        ->capture_default_str();
}

void add_report_format_flag(CLI::App& cmd, ReportFormat& format) {
    cmd.add_option("--report-format", format, "Report rendering")
        ->transform(CLI::CheckedTransformer(std::map<std::string, ReportFormat>{
            {"table", ReportFormat::kTable}, {"machine", ReportFormat::kMachine}}))
        ->default_str("table");
}

void print_model_summary(const lexirec::TrainConfig& config, double mae) {
    std::cout << "model: dim=" << config.dim << " learning_rate=" << config.learning_rate
              << " l2_penalty=" << config.l2_penalty << " epochs=" << config.epochs << "\n";
    std::cout << "test_mae: " << mae << "\n";
}

int run_train(const CommandState& state) {
    const Dataset data = lexirec::parse_ratings_file(state.config.data_path, state.config.format);
    const lexirec::Split halves = lexirec::experiment_split(state.config, data);
    const lexirec::TunedModel tuned = lexirec::tune_model(state.config, halves);
    lexirec::save_model_file(tuned.model, state.model_out);
    print_model_summary(tuned.config, tuned.mae);
    std::cout << "saved: " << state.model_out << "\n";
    return 0;
}

int run_bench(const CommandState& state) {
    const Dataset data = lexirec::parse_ratings_file(state.config.data_path, state.config.format);
    const lexirec::ExperimentResult result = lexirec::run_experiment(state.config, data);

    if (!state.model_out.empty()) lexirec::save_model_file(result.model, state.model_out);
    if (!state.lists_out.empty()) {
        std::ofstream out(state.lists_out, std::ios::binary);
        if (!out) throw lexirec::Error("cannot write " + state.lists_out);
        lexirec::write_lists(result.lists, data, out);
    }
    if (!state.clusters_out.empty()) {
        std::ofstream out(state.clusters_out, std::ios::binary);
        if (!out) throw lexirec::Error("cannot write " + state.clusters_out);
        lexirec::write_cluster_assignments(result.clusters, data, out);
    }

    if (state.report_out.empty()) {
        lexirec::emit_report(result.reports, result.fingerprint, state.report_format, std::cout);
    } else {
        lexirec::emit_report_file(result.reports, result.fingerprint, state.report_format,
                                  state.report_out);
        print_model_summary(result.model_config, result.model_mae);
        std::cout << "report: " << state.report_out << "\n";
    }
    return 0;
}

int run_score(const CommandState& state) {
    const Dataset data = lexirec::parse_ratings_file(state.config.data_path, state.config.format);
    const lexirec::GmfModel model = lexirec::load_model_file(state.model_in);
    std::ifstream in(state.lists_in, std::ios::binary);
    if (!in) throw lexirec::Error("cannot open " + state.lists_in);
    const auto lists = lexirec::read_lists(in, data);
    const auto reports = lexirec::score_lists(state.config, data, model, lists);
    const std::uint64_t fingerprint = lexirec::config_fingerprint(state.config);
    if (state.report_out.empty()) {
        lexirec::emit_report(reports, fingerprint, state.report_format, std::cout);
    } else {
        lexirec::emit_report_file(reports, fingerprint, state.report_format, state.report_out);
        std::cout << "report: " << state.report_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factorization recommender workbench: train a model, benchmark top-k "
                 "selection strategies, re-score saved lists"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI-style file supplying flags under a [train]/[bench]/[score] section; "
                   "command line wins");

    CommandState train_state, bench_state, score_state;

    CLI::App& train_cmd = *app.add_subcommand("train", "Fit the model and save it");
    train_cmd.fallthrough();
    add_experiment_flags(train_cmd, train_state.config);
    train_cmd.add_option("--out", train_state.model_out, "Model output path")->required();

    CLI::App& bench_cmd = *app.add_subcommand("bench", "Run the full strategy benchmark");
    bench_cmd.fallthrough();
    add_experiment_flags(bench_cmd, bench_state.config);
    add_report_format_flag(bench_cmd, bench_state.report_format);
    bench_cmd.add_option("--out", bench_state.report_out, "Report path; stdout when omitted");
    bench_cmd.add_option("--save-model", bench_state.model_out,
                         "Also persist the trained model here");
    bench_cmd.add_option("--dump-lists", bench_state.lists_out,
                         "Also write every recommendation list here");
    bench_cmd.add_option("--dump-clusters", bench_state.clusters_out,
                         "Also write item cluster ids here");

    CLI::App& score_cmd = *app.add_subcommand("score", "Recompute metrics for a lists dump");
    score_cmd.fallthrough();
    add_experiment_flags(score_cmd, score_state.config);
    add_report_format_flag(score_cmd, score_state.report_format);
    score_cmd.add_option("--lists", score_state.lists_in, "Lists dump to score")->required();
    score_cmd.add_option("--model", score_state.model_in,
                         "Model file the lists were generated from")
        ->required();
    score_cmd.add_option("--out", score_state.report_out, "Report path; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train_cmd.parsed()) return run_train(train_state);
        if (bench_cmd.parsed()) return run_bench(bench_state);
        return run_score(score_state);
    } catch (const lexirec::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
