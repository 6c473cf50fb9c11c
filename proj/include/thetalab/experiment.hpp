#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "thetalab/bounds.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/exact.hpp"
#include "thetalab/gens.hpp"
#include "thetalab/randcover.hpp"

namespace thetalab {

// An experiment sweeps a parameter grid for one instance family, runs the
// selected algorithms on each (cell, trial) and appends one CSV row per run.
// Rows are keyed by (family,n,d,k,trial,alg); reruns with the same master
// seed are byte-identical and interrupted runs resume by key.
struct ExperimentSpec {
    std::string family;  // balanced-hard | linear | blowup | steiner | random
    std::vector<int> n_values;
    std::vector<std::int64_t> d_values;
    std::vector<int> k_values;
    int trials = 1;
    std::vector<std::string> algorithms;  // balanced | general | exact
    std::uint64_t master_seed = 0;
    std::string output;
};

inline const char* experiment_csv_header() {
    return "family,n,d,k,trial,alg,seed,t_achieved,cert_size,complete,uncovered,status,bound,"
           "ratio,upper_balanced,upper_general,lower_balanced_form,lower_even_form,"
           "steiner_lower_form,log2_f_alpha_cap";
}

inline ExperimentSpec parse_experiment_spec(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment spec: ") + e.what());
    }
    ExperimentSpec spec;
    try {
        spec.family = j.at("family").get<std::string>();
        const auto& grid = j.at("grid");
        spec.n_values = grid.at("n").get<std::vector<int>>();
        spec.d_values = grid.at("d").get<std::vector<std::int64_t>>();
        spec.k_values = grid.at("k").get<std::vector<int>>();
        spec.trials = j.value("trials", 1);
        spec.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        spec.master_seed = j.value("master_seed", 0ULL);
        spec.output = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment spec: ") + e.what());
    }

    static const std::set<std::string> known_families = {"balanced-hard", "linear", "blowup",
                                                         "steiner", "random"};
    static const std::set<std::string> known_algorithms = {"balanced", "general", "exact"};
    if (!known_families.count(spec.family))
        throw InputError("experiment spec: unknown family '" + spec.family + "'");
    if (spec.n_values.empty() || spec.d_values.empty() || spec.k_values.empty())
        throw InputError("experiment spec: grid must be non-empty");
    if (spec.trials < 1) throw InputError("experiment spec: trials must be >= 1");
    if (spec.algorithms.empty()) throw InputError("experiment spec: algorithms must be non-empty");
    for (const auto& a : spec.algorithms)
        if (!known_algorithms.count(a))
            throw InputError("experiment spec: unknown algorithm '" + a + "'");
    if (spec.output.empty()) throw InputError("experiment spec: output path required");
    return spec;
}

namespace detail {

struct ExperimentCell {
    int n;
    std::int64_t d;
    int k;
    int trial;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// One generated instance per (cell, trial); families with divisibility
// constraints round n down, and the row records the actual vertex count.
inline Hypergraph generate_instance(const std::string& family, const ExperimentCell& cell,
                                    std::uint64_t seed) {
    if (family == "balanced-hard")
        return gen_balanced_hard(round_parameters(cell.n, cell.d, cell.k), cell.d, cell.k, seed)
            .hypergraph;
    if (family == "linear")
        return gen_linear_kpartite(std::max(cell.n / cell.k, 1), std::min<std::int64_t>(cell.d, std::max(cell.n / cell.k, 1)), cell.k, seed)
            .hypergraph;
    if (family == "blowup") {
        if (cell.k % 2 != 0 || cell.k < 2)
            throw InputError("blowup family requires even k");
        const int ell = cell.k / 2;
        const int base_n = std::max(cell.n / ell, 2);
        const Hypergraph f = gen_random_bounded(base_n, cell.d, 2, seed);
        return gen_blowup_even(f, ell).hypergraph;
    }
    if (family == "steiner") return gen_partial_steiner(cell.n, cell.k, seed);
    return gen_random_bounded(cell.n, cell.d, cell.k, seed);
}

struct RowResult {
    std::string key;
    std::string line;
};

inline RowResult run_row(const ExperimentSpec& spec, const ExperimentCell& cell,
                         const std::string& alg, bool paranoid) {
    const std::uint64_t cell_tag =
        (static_cast<std::uint64_t>(cell.n) << 40) ^ (static_cast<std::uint64_t>(cell.d) << 24) ^
        (static_cast<std::uint64_t>(cell.k) << 16) ^ static_cast<std::uint64_t>(cell.trial);
    const std::uint64_t instance_seed = derive_stream_seed(spec.master_seed, cell_tag * 2);
    const std::uint64_t run_seed = derive_stream_seed(spec.master_seed, cell_tag * 2 + 1);

    std::ostringstream row;
    std::string status = "ok";
    std::string t_achieved, cert_size, complete, uncovered, bound, ratio;
    int actual_n = cell.n;

    try {
        const Hypergraph g = generate_instance(spec.family, cell, instance_seed);
        actual_n = g.n();
        const bool bounds_in_domain = actual_n > cell.d && cell.d >= 2;
        BoundReport bounds;
        if (bounds_in_domain)
            bounds = compute_bounds(actual_n, cell.d, cell.k, static_cast<double>(actual_n), 0);

        CoverRunResult run;
        bool ran_cover = false;
        if (alg == "balanced") {
            BalancedConfig cfg;
            cfg.d = cell.d;
            cfg.seed = run_seed;
            run = balanced_cover(g, cfg);
            ran_cover = true;
            bound = std::to_string(balanced_trial_count(actual_n, cell.d, cell.k));
        } else if (alg == "general") {
            GeneralConfig cfg;
            cfg.d = cell.d;
            cfg.seed = run_seed;
            run = general_cover(g, cfg);
            ran_cover = true;
            bound = std::to_string(general_trial_count(actual_n, cell.d, cell.k));
        } else {  // exact
            SolveLimits limits;
            if (g.n() > limits.max_vertices) {
                status = "skipped";
            } else {
                const VarthetaResult vt = vartheta_exact(g);
                t_achieved = std::to_string(vt.size);
                cert_size = std::to_string(vt.certificate.t());
                complete = vt.optimal ? "true" : "false";
                uncovered = "0";
            }
        }

        if (ran_cover) {
            t_achieved = std::to_string(run.trials_run);
            cert_size = std::to_string(run.certificate.t());
            complete = run.complete ? "true" : "false";
            uncovered = std::to_string(run.uncovered);
            ratio = format_double(static_cast<double>(run.trials_run) /
                                  static_cast<double>(std::stoull(bound)));
            if (paranoid && !verify_theta_cover(g, run.certificate).ok) status = "verify-failed";
        }

        const int p = balanced_hard_clique_size(cell.d, cell.k);
        const double alpha_cap =
            spec.family == "balanced-hard"
                ? std::min<double>(actual_n, (cell.k - 1) * static_cast<double>(actual_n) / p)
                : actual_n;
        const double t_for_f = t_achieved.empty() ? 0.0 : static_cast<double>(std::stoull(t_achieved));
        const double log2_f =
            bounds_in_domain
                ? compute_bounds(actual_n, cell.d, cell.k, alpha_cap, t_for_f).log2_f
                : 0.0;

        row << spec.family << ',' << actual_n << ',' << cell.d << ',' << cell.k << ','
            << cell.trial << ',' << alg << ',' << run_seed << ',' << t_achieved << ','
            << cert_size << ',' << complete << ',' << uncovered << ',' << status << ',' << bound
            << ',' << ratio << ',';
        if (bounds_in_domain) {
            row << detail::format_double(bounds.upper_balanced) << ','
                << detail::format_double(bounds.upper_general) << ','
                << detail::format_double(bounds.lower_balanced_form) << ','
                << detail::format_double(bounds.lower_even_form) << ','
                << detail::format_double(bounds.steiner_lower_form) << ','
                << detail::format_double(log2_f);
        } else {
            row << ",,,,,";
        }
    } catch (const PreconditionError&) {
        row.str("");
        row << spec.family << ',' << actual_n << ',' << cell.d << ',' << cell.k << ','
            << cell.trial << ',' << alg << ',' << run_seed << ",,,,,precondition,,,,,,,,";
    } catch (const std::exception&) {
        row.str("");
        row << spec.family << ',' << actual_n << ',' << cell.d << ',' << cell.k << ','
            << cell.trial << ',' << alg << ',' << run_seed << ",,,,,error,,,,,,,,";
    }

    std::ostringstream key;
    key << spec.family << ',' << actual_n << ',' << cell.d << ',' << cell.k << ',' << cell.trial
        << ',' << alg;
    return {key.str(), row.str()};
}

inline int experiment_thread_cap() {
    const char* env = std::getenv("THETA_LAB_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

} // namespace detail

// Runs the experiment, appending missing rows to the output CSV. Returns the
// number of rows written. Cells run in parallel up to THETA_LAB_THREADS, and
// the writer emits rows in canonical (cell, trial, algorithm) order so
// serial and parallel runs produce the same bytes.
inline std::size_t run_experiment(const ExperimentSpec& spec, bool paranoid = false) {
    std::vector<std::pair<detail::ExperimentCell, std::string>> tasks;
    for (int n : spec.n_values)
        for (std::int64_t d : spec.d_values)
            for (int k : spec.k_values)
                for (int trial = 0; trial < spec.trials; ++trial)
                    for (const auto& alg : spec.algorithms)
                        tasks.push_back({detail::ExperimentCell{n, d, k, trial}, alg});

    std::vector<detail::RowResult> results(tasks.size());
    const int threads = std::min<int>(detail::experiment_thread_cap(),
                                      static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            results[i] = detail::run_row(spec, tasks[i].first, tasks[i].second, paranoid);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    results[i] = detail::run_row(spec, tasks[i].first, tasks[i].second, paranoid);
                }
            });
        for (auto& th : pool) th.join();
    }

    // Resume support: collect the keys already present.
    std::set<std::string> existing;
    bool file_exists = false;
    {
        std::ifstream in(spec.output);
        if (in.good()) {
            file_exists = true;
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                int commas = 0;
                std::size_t pos = 0;
                while (pos < line.size() && commas < 6) {
                    if (line[pos] == ',') ++commas;
                    ++pos;
                }
                if (commas == 6) existing.insert(line.substr(0, pos - 1));
            }
        }
    }

    std::ofstream out(spec.output, std::ios::app);
    if (!out) throw InputError("experiment: cannot open output file " + spec.output);
    if (!file_exists) out << experiment_csv_header() << '\n';
    std::size_t written = 0;
    for (const auto& r : results) {
        if (existing.count(r.key)) continue;
        out << r.line << '\n';
        ++written;
    }
    return written;
}

} // namespace thetalab
