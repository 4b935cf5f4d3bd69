// Writes the bundled synthetic dataset: daily first doses plus nine search
// interest exports of four queries and the reference query each.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "vaxcast/date.hpp"
#include "vaxcast/ingest/csv.hpp"
#include "vaxcast/ingest/trends.hpp"
#include "vaxcast/io/tables.hpp"
#include "vaxcast/random.hpp"

namespace {

using vaxcast::Date;
using vaxcast::Rng;

constexpr int kDays = 219;
constexpr double kEligible = 3'000'000.0 / (1.0 - 0.071);

// Weekly multipliers starting on a Monday.
constexpr double kWeekly[7] = {1.06, 1.04, 1.02, 1.00, 0.98, 0.86, 1.04};

double level(int t) {
    if (t < 106) return 0.35 + 1.85 * t / 105.0;
    if (t < 192) return 2.25 - 0.1 * (t - 106) / 85.0;
    return 2.15 + 0.9 * (t - 191) / 27.0;
}

std::vector<double> ratio_path(Rng& rng) {
    std::vector<double> r(kDays);
    double ar = 0.0;
    double prev_shock = 0.0;
    for (int t = 0; t < kDays; ++t) {
        const double shock = 0.09 * rng.normal();
        ar = 0.45 * ar + shock + 0.3 * prev_shock;
        prev_shock = shock;
        r[t] = std::max(0.01, level(t) * kWeekly[t % 7] + ar);
    }
    return r;
}

struct Query {
    std::string label;
    int category;
    double weight;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic vaccination and search-interest bundle"};
    std::string out_dir = "data/synthetic";
    std::string categories_path = "data/categories.json";
    std::uint64_t seed = 42;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--categories", categories_path, "category map listing the query labels");
    app.add_option("--seed", seed, "random seed");
    CLI11_PARSE(app, argc, argv);

    try {
        const Date start(2020, 12, 21);
        const auto map = vaxcast::ingest::CategoryMap::load(categories_path);
        map.validate();

        Rng rng(seed);
        const auto ratio = ratio_path(rng);

        std::string clinical = "date,first_doses\n";
        double given = 0.0;
        for (int t = 0; t < kDays; ++t) {
            const double doses = std::round(ratio[t] * (kEligible - given) / 100.0);
            given += doses;
            clinical += (start + t).iso() + "," + vaxcast::ingest::format_number(doses) + "\n";
        }
        vaxcast::io::write_text(std::filesystem::path(out_dir) / "clinical.csv", clinical);

        // Attitude drivers: positive interest tracks uptake, neutral lags it, negative has bursts.
        std::vector<std::array<double, 3>> driver(kDays);
        double burst = 0.0;
        for (int t = 0; t < kDays; ++t) {
            if (rng.uniform() < 0.04) burst += 1.5 + rng.uniform();
            burst *= 0.8;
            const double lagged = ratio[std::max(t - 1, 0)];
            driver[t][0] = 0.6 + 0.9 * ratio[t] + 0.15 * rng.normal();
            driver[t][1] = 1.0 + 0.35 * lagged + 0.4 * std::sin(2.0 * std::numbers::pi * t / 30.0) + 0.1 * rng.normal();
            driver[t][2] = 0.8 + burst - 0.1 * ratio[t] + 0.1 * rng.normal();
        }

        std::vector<Query> queries;
        for (int c = 0; c < 3; ++c) {
            for (const auto& label : map.labels[c]) {
                queries.push_back({label, c, 0.02 + 2.0 * rng.uniform() * rng.uniform()});
            }
        }

        for (int b = 0; b < 9; ++b) {
            std::vector<std::vector<double>> interest;
            std::vector<std::string> names;
            for (int k = 0; k < 4; ++k) {
                const auto& q = queries[static_cast<std::size_t>(b * 4 + k)];
                std::vector<double> v(kDays);
                for (int t = 0; t < kDays; ++t) {
                    v[t] = std::max(0.0, q.weight * driver[t][q.category] * (1.0 + 0.12 * rng.normal()));
                }
                interest.push_back(std::move(v));
                names.push_back(q.label);
            }
            std::vector<double> joker(kDays);
            for (int t = 0; t < kDays; ++t) {
                joker[t] = std::max(0.0, 0.6 + 0.08 * std::sin(2.0 * std::numbers::pi * t / 7.0) + 0.05 * rng.normal());
            }
            interest.push_back(std::move(joker));
            names.push_back("Joker");

            double peak = 0.0;
            for (const auto& v : interest)
                for (double x : v) peak = std::max(peak, x);

            std::string csv = "date";
            for (const auto& n : names) csv += "," + n;
            csv += "\n";
            for (int t = 0; t < kDays; ++t) {
                csv += (start + t).iso();
                for (const auto& v : interest) {
                    const double shown = std::round(100.0 * v[t] / peak);
                    csv += shown < 1.0 ? std::string(",<1") : "," + vaxcast::ingest::format_number(shown);
                }
                csv += "\n";
            }
            char name[32];
            std::snprintf(name, sizeof name, "trends_%02d.csv", b + 1);
            vaxcast::io::write_text(std::filesystem::path(out_dir) / name, csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "make_synthetic: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
