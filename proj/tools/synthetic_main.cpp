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
#include <string>

#include "CLI11.hpp"
#include "lexirec/dataset.hpp"
#include "lexirec/error.hpp"
#include "lexirec/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Emit a block-structured synthetic ratings file (tab-separated)"};
    lexirec::SyntheticConfig config;
    std::string out_path;
    app.add_option("--users", config.num_users, "User count")->capture_default_str();
    app.add_option("--items", config.num_items, "Item count")->capture_default_str();
    app.add_option("--groups", config.num_groups, "Latent group count")->capture_default_str();
    app.add_option("--seed", config.seed, "Noise seed")->capture_default_str();
    app.add_option("--noise", config.noise, "Rating jitter width")->capture_default_str();
    app.add_option("--density", config.density, "Probability a (user, item) pair is rated")
        ->capture_default_str();
    app.add_option("--in-group-bias", config.in_group_bias,
                   "Density multiplier for matching-group pairs (capped at 1)")
        ->capture_default_str();
    app.add_option("--popularity-skew", config.popularity_skew,
                   "Concentrates ratings on popular items; rate probability is "
                   "scaled by exp(skew * (score - 0.5))")
        ->capture_default_str();
    app.add_option("--quality-range", config.quality_range,
                   "Shifts mean ratings by range * (score - 0.5) so popular "
                   "items rate higher")
        ->capture_default_str();
    app.add_option("--out", out_path, "Output path; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const lexirec::Dataset data = lexirec::synthetic_dataset(config);
        if (out_path.empty()) {
            lexirec::write_ratings(data, lexirec::RatingsFormat::kMl100k, std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw lexirec::Error("cannot write " + out_path);
            lexirec::write_ratings(data, lexirec::RatingsFormat::kMl100k, out);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
