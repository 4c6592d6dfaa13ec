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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "lexirec/clustering.hpp"
#include "lexirec/model.hpp"
#include "lexirec/rng.hpp"
#include "lexirec/selection.hpp"
#include "lexirec/synthetic.hpp"

namespace {

using namespace lexirec;

Dataset bench_corpus() {
    SyntheticConfig config;
    config.num_users = 200;
    config.num_items = 400;
    config.num_groups = 8;
    config.density = 0.3;
    config.noise = 0.5;
    config.seed = 7;
    return synthetic_dataset(config);
}

GmfModel bench_model(const Dataset& data, int dim) {
    TrainConfig config;
    config.dim = dim;
    config.learning_rate = 0.01;
    config.epochs = 3;
    config.seed = 11;
    return train(data, config);
}

CandidateSet bench_candidates(const GmfModel& model, int pool_size) {
    std::vector<int> pool(static_cast<std::size_t>(pool_size));
    std::iota(pool.begin(), pool.end(), 0);
    return build_candidate_set(model, 0, pool);
}

void BM_Predict(benchmark::State& state) {
    const Dataset data = bench_corpus();
    const GmfModel model = bench_model(data, static_cast<int>(state.range(0)));
    Rng rng(3);
    for (auto _ : state) {
        const int user = static_cast<int>(rng.next_below(200));
        const int item = static_cast<int>(rng.next_below(400));
        benchmark::DoNotOptimize(model.predict(user, item));
    }
}
BENCHMARK(BM_Predict)->Arg(8)->Arg(32);

void BM_Deaggregate(benchmark::State& state) {
    const Dataset data = bench_corpus();
    const GmfModel model = bench_model(data, static_cast<int>(state.range(0)));
    Rng rng(3);
    for (auto _ : state) {
        const int user = static_cast<int>(rng.next_below(200));
        const int item = static_cast<int>(rng.next_below(400));
        benchmark::DoNotOptimize(model.deaggregate(user, item));
    }
}
BENCHMARK(BM_Deaggregate)->Arg(8)->Arg(32);

void BM_RankTopk(benchmark::State& state) {
    const Dataset data = bench_corpus();
    const GmfModel model = bench_model(data, 16);
    const CandidateSet candidates = bench_candidates(model, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank_topk(candidates, 25));
    }
}
BENCHMARK(BM_RankTopk)->Arg(100)->Arg(400);

void BM_LexicaseTopk(benchmark::State& state) {
    const Dataset data = bench_corpus();
    const GmfModel model = bench_model(data, 16);
    const CandidateSet candidates = bench_candidates(model, static_cast<int>(state.range(0)));
    LexicaseConfig config;
    config.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lexicase_topk(candidates, 25, config));
    }
}
BENCHMARK(BM_LexicaseTopk)->Arg(100)->Arg(400);

void BM_Kmeans(benchmark::State& state) {
    const Dataset data = bench_corpus();
    const GmfModel model = bench_model(data, 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans(model.item_embeddings(), model.num_items(),
                                        model.dim(), static_cast<int>(state.range(0)), 7));
    }
}
BENCHMARK(BM_Kmeans)->Arg(5)->Arg(20);

void BM_TrainEpoch(benchmark::State& state) {
    const Dataset data = bench_corpus();
    TrainConfig config;
    config.dim = static_cast<int>(state.range(0));
    config.learning_rate = 0.01;
    config.epochs = 1;
    config.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(data, config));
    }
}
BENCHMARK(BM_TrainEpoch)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
