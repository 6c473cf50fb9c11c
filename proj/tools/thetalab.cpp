// thetalab - generate, cover, verify and measure clique-cover instances.
//
// Exit codes: 0 success, 1 invalid artifact, 2 input/precondition error,
// 3 parse error, 4 resource limit.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "thetalab/bounds.hpp"
#include "thetalab/cover.hpp"
#include "thetalab/exact.hpp"
#include "thetalab/experiment.hpp"
#include "thetalab/gens.hpp"
#include "thetalab/hypergraph.hpp"
#include "thetalab/randcover.hpp"

namespace {

using namespace thetalab;

Hypergraph load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    return parse_hypergraph(in);
}

std::string hex_fingerprint(const Hypergraph& g) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fingerprint(g)));
    return buf;
}

struct GenOptions {
    std::string family;
    int n = 0;
    int m = 0;
    std::int64_t d = 0;
    int k = 3;
    int ell = 2;
    std::uint64_t seed = 0;
    std::string from;
    std::string out;
};

int cmd_gen(const GenOptions& opt) {
    std::optional<PartitionedInstance> inst;
    std::optional<Hypergraph> plain;
    std::map<std::string, std::string> metadata;

    if (opt.family == "balanced-hard") {
        inst = gen_balanced_hard(opt.n, opt.d, opt.k, opt.seed);
    } else if (opt.family == "linear") {
        inst = gen_linear_kpartite(opt.m, opt.d, opt.k, opt.seed);
    } else if (opt.family == "blowup") {
        if (opt.from.empty()) throw InputError("gen blowup: --from is required");
        inst = gen_blowup_even(load_instance(opt.from), opt.ell);
    } else if (opt.family == "steiner") {
        plain = gen_partial_steiner(opt.n, opt.k, opt.seed);
        metadata = {{"generator", "steiner"},
                    {"n", std::to_string(opt.n)},
                    {"k", std::to_string(opt.k)},
                    {"seed", std::to_string(opt.seed)}};
    } else if (opt.family == "random") {
        plain = gen_random_bounded(opt.n, opt.d, opt.k, opt.seed);
        metadata = {{"generator", "random"},
                    {"n", std::to_string(opt.n)},
                    {"d", std::to_string(opt.d)},
                    {"k", std::to_string(opt.k)},
                    {"seed", std::to_string(opt.seed)}};
    } else {
        throw InputError("unknown family: " + opt.family +
                         " (expected balanced-hard|linear|blowup|steiner|random)");
    }

    const Hypergraph& g = inst ? inst->hypergraph : *plain;
    if (inst && inst->metadata.count("warning"))
        std::cerr << "warning: " << inst->metadata.at("warning") << '\n';

    if (opt.out.empty()) {
        if (inst)
            write_instance(std::cout, *inst);
        else
            write_instance(std::cout, g, metadata);
    } else {
        std::ofstream out(opt.out);
        if (!out) throw InputError("cannot open output file: " + opt.out);
        if (inst)
            write_instance(out, *inst);
        else
            write_instance(out, g, metadata);
        std::cout << "wrote " << opt.out << " (k=" << g.k() << " n=" << g.n()
                  << " m=" << g.num_edges() << ")\n";
    }
    std::cout << "fingerprint: " << hex_fingerprint(g) << '\n';
    return 0;
}

struct CoverOptions {
    std::string instance;
    std::string algorithm = "balanced";
    std::int64_t d = 0;
    std::uint64_t seed = 0;
    bool fixed_t = false;
    std::uint64_t t_cap = 0;
    std::string cert_out;
    bool header = false;
};

int cmd_cover(const CoverOptions& opt) {
    const Hypergraph g = load_instance(opt.instance);

    CoverRunResult run;
    std::uint64_t bound = 0;
    if (opt.algorithm == "balanced") {
        BalancedConfig cfg;
        cfg.d = opt.d;
        cfg.seed = opt.seed;
        cfg.t_cap = opt.t_cap;
        cfg.mode = opt.fixed_t ? TrialMode::fixed_t : TrialMode::adaptive;
        run = balanced_cover(g, cfg);
        bound = balanced_trial_count(g.n(), opt.d, g.k());
    } else if (opt.algorithm == "general") {
        GeneralConfig cfg;
        cfg.d = opt.d;
        cfg.seed = opt.seed;
        cfg.t_cap = opt.t_cap;
        cfg.mode = opt.fixed_t ? TrialMode::fixed_t : TrialMode::adaptive;
        run = general_cover(g, cfg);
        bound = general_trial_count(g.n(), opt.d, g.k());
    } else {
        throw InputError("unknown algorithm: " + opt.algorithm + " (expected balanced|general)");
    }

    if (!opt.cert_out.empty()) {
        std::ofstream out(opt.cert_out);
        if (!out) throw InputError("cannot open certificate file: " + opt.cert_out);
        write_certificate(out, run.certificate);
    }

    if (opt.header) std::cout << "n,d,k,alg,seed,t_achieved,bound,complete\n";
    std::cout << g.n() << ',' << opt.d << ',' << g.k() << ',' << opt.algorithm << ',' << opt.seed
              << ',' << run.trials_run << ',' << bound << ',' << (run.complete ? "true" : "false")
              << '\n';
    return 0;
}

struct VerifyOptions {
    std::string instance;
    std::string artifact;
    std::string type = "auto";
};

int cmd_verify(const VerifyOptions& opt) {
    // Without an artifact, audit the instance against the generator contract
    // recorded in its comment header.
    if (opt.artifact.empty()) {
        std::ifstream in(opt.instance);
        if (!in) throw ParseError("cannot open instance file: " + opt.instance);
        const auto [g, metadata] = read_instance(in);
        if (!metadata.count("generator"))
            throw InputError("instance carries no generator metadata to audit");
        const std::string failure = audit_instance(g, metadata);
        if (failure.empty()) {
            std::cout << "valid (" << metadata.at("generator") << " contract)\n";
            return 0;
        }
        std::cout << "invalid: " << failure << '\n';
        return 1;
    }

    const Hypergraph g = load_instance(opt.instance);
    std::ifstream in(opt.artifact);
    if (!in) throw ParseError("cannot open artifact file: " + opt.artifact);

    std::string type = opt.type;
    if (type == "auto") {
        // Representation headers carry two integers, certificate headers one.
        std::ifstream probe(opt.artifact);
        std::string line;
        while (std::getline(probe, line))
            if (!line.empty() && line[0] != '#') break;
        std::istringstream ls(line);
        long long a;
        int count = 0;
        while (ls >> a) ++count;
        type = count >= 2 ? "representation" : "certificate";
    }

    VerifyResult result;
    if (type == "certificate") {
        const CoverCertificate cert = parse_certificate(in);
        for (const auto& warning : lint_certificate(cert))
            std::cerr << "lint: " << warning << '\n';
        result = verify_theta_cover(g, cert);
    } else if (type == "representation") {
        result = verify_representation(g, parse_representation(in));
    } else if (type == "clique-cover") {
        const CoverCertificate cert = parse_certificate(in);
        result = verify_clique_cover(g, CliqueCover{cert.independent_sets});
    } else {
        throw InputError("unknown artifact type: " + type);
    }

    if (result.ok) {
        std::cout << "valid\n";
        return 0;
    }
    std::cout << "invalid: " << result.describe() << '\n';
    return 1;
}

struct ExactOptions {
    std::string instance;
    int max_vertices = 16;
    double time_budget = 30.0;
    std::uint64_t max_candidates = 1'000'000;
};

int cmd_exact(const ExactOptions& opt) {
    const Hypergraph g = load_instance(opt.instance);
    SolveLimits limits;
    limits.max_vertices = opt.max_vertices;
    limits.time_budget_seconds = opt.time_budget;
    limits.max_candidate_sets = opt.max_candidates;

    const ThetaResult theta = theta_exact(g, limits);
    const VarthetaResult vt = vartheta_exact(g, limits);
    const AlphaResult alpha = independence_number(g, limits);
    const CliqueCoverResult cc_comp = cc_exact(complement(g), limits);

    std::cout << "theta: " << theta.size << (theta.optimal ? "" : " (optimal: unknown)") << '\n';
    std::cout << "vartheta: " << vt.size << (vt.optimal ? "" : " (optimal: unknown)") << '\n';
    std::cout << "alpha: " << alpha.alpha << (alpha.optimal ? "" : " (optimal: unknown)") << '\n';
    std::cout << "cross-check theta(complement) == vartheta: "
              << (cc_comp.size == vt.size ? "ok" : "MISMATCH") << '\n';
    return cc_comp.size == vt.size ? 0 : 1;
}

struct BoundsOptions {
    int n = 0;
    std::int64_t d = 0;
    int k = 0;
    double alpha = 2;
    double t = 1;
};

int cmd_bounds(const BoundsOptions& opt) {
    const BoundReport r = compute_bounds(opt.n, opt.d, opt.k, opt.alpha, opt.t);
    std::cout << "upper_balanced: " << r.upper_balanced << '\n'
              << "upper_general: " << r.upper_general << '\n'
              << "lower_balanced_form: " << r.lower_balanced_form << '\n'
              << "lower_even_form: " << r.lower_even_form << '\n'
              << "steiner_lower_form: " << r.steiner_lower_form << '\n'
              << "log2_f: " << r.log2_f << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"clique covers and set representations of k-uniform hypergraphs"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate an instance");
    gen_cmd->add_option("family", gen.family, "balanced-hard|linear|blowup|steiner|random")
        ->required();
    gen_cmd->add_option("--n", gen.n, "vertex count");
    gen_cmd->add_option("--m", gen.m, "part size (linear family)");
    gen_cmd->add_option("--d", gen.d, "degree parameter");
    gen_cmd->add_option("--k", gen.k, "uniformity");
    gen_cmd->add_option("--ell", gen.ell, "blowup factor");
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--from", gen.from, "base 2-graph file (blowup family)");
    gen_cmd->add_option("--out", gen.out, "output file (default: stdout)");

    CoverOptions cover;
    CLI::App* cover_cmd = app.add_subcommand("cover", "run a randomized covering algorithm");
    cover_cmd->add_option("instance", cover.instance, "instance file")->required();
    cover_cmd->add_option("--alg", cover.algorithm, "balanced|general")->required();
    cover_cmd->add_option("--d", cover.d, "degree parameter")->required();
    cover_cmd->add_option("--seed", cover.seed, "run seed");
    cover_cmd->add_flag("--fixed-t", cover.fixed_t, "run the theorem trial count instead of adaptive");
    cover_cmd->add_flag("--adaptive", [](std::int64_t) {}, "adaptive mode (default)");
    cover_cmd->add_option("--t-cap", cover.t_cap, "adaptive trial cap (0: twice the bound)");
    cover_cmd->add_option("--cert-out", cover.cert_out, "certificate output file");
    cover_cmd->add_flag("--header", cover.header, "print the CSV header line");

    VerifyOptions verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "validate an artifact against an instance");
    verify_cmd->add_option("instance", verify.instance, "instance file")->required();
    verify_cmd->add_option("artifact", verify.artifact,
                           "certificate or representation file (omit to audit the instance "
                           "against its generator metadata)");
    verify_cmd->add_option("--type", verify.type, "auto|certificate|representation|clique-cover");

    ExactOptions exact;
    CLI::App* exact_cmd = app.add_subcommand("exact", "run the exact oracles");
    exact_cmd->add_option("instance", exact.instance, "instance file")->required();
    exact_cmd->add_option("--max-vertices", exact.max_vertices, "solver vertex limit");
    exact_cmd->add_option("--time-budget", exact.time_budget, "solver time budget in seconds");
    exact_cmd->add_option("--max-candidates", exact.max_candidates, "candidate set limit");

    std::string spec_path;
    bool paranoid = false;
    CLI::App* exp_cmd = app.add_subcommand("experiment", "run an experiment spec");
    exp_cmd->add_option("spec", spec_path, "experiment spec (JSON)")->required();
    exp_cmd->add_flag("--paranoid", paranoid, "re-verify every certificate");

    BoundsOptions bounds;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "evaluate the bound formulas");
    bounds_cmd->add_option("--n", bounds.n, "vertex count")->required();
    bounds_cmd->add_option("--d", bounds.d, "degree parameter")->required();
    bounds_cmd->add_option("--k", bounds.k, "uniformity")->required();
    bounds_cmd->add_option("--alpha", bounds.alpha, "independence bound for log2_f");
    bounds_cmd->add_option("--t", bounds.t, "representation length for log2_f");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (cover_cmd->parsed()) return cmd_cover(cover);
        if (verify_cmd->parsed()) return cmd_verify(verify);
        if (exact_cmd->parsed()) return cmd_exact(exact);
        if (exp_cmd->parsed()) {
            std::ifstream in(spec_path);
            if (!in) throw ParseError("cannot open spec file: " + spec_path);
            const ExperimentSpec spec = parse_experiment_spec(in);
            const std::size_t rows = run_experiment(spec, paranoid);
            std::cout << "wrote " << rows << " rows to " << spec.output << '\n';
            return 0;
        }
        if (bounds_cmd->parsed()) return cmd_bounds(bounds);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 3;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 4;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const GenerationError& e) {
        std::cerr << "generation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
