// Command line front end. Every subcommand prints one JSON (or CSV) report to
// stdout or --out. Exit codes: 0 ok, 2 invalid input, 3 resource limit,
// 4 internal invariant violation.

#include <corrsamp/io.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace corrsamp;

struct OutputOpts {
    std::string out;
    std::string format = "json";
};

void add_output_opts(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "Report format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
}

void deliver(const Json& j, const OutputOpts& o) {
    const std::string text = (o.format == "csv") ? json_object_to_csv(j) : j.dump(2) + "\n";
    if (o.out.empty())
        std::cout << text;
    else
        write_text_file(o.out, text);
}

void deliver(const SweepReport& r, const OutputOpts& o) {
    const std::string text =
        (o.format == "csv") ? sweep_to_csv(r) : sweep_to_json(r).dump(2) + "\n";
    if (o.out.empty())
        std::cout << text;
    else
        write_text_file(o.out, text);
}

StrategyKind parse_strategy(const std::string& name) {
    if (name == "minhash") return StrategyKind::MinHash;
    if (name == "holenstein") return StrategyKind::HolensteinGrid;
    if (name == "continuous") return StrategyKind::Continuous;
    throw InvalidInputError("unknown strategy '" + name + "'");
}

std::vector<Rational> parse_delta_list(const std::vector<std::string>& raw) {
    std::vector<Rational> out;
    for (const std::string& chunk : raw) {
        std::string item;
        std::istringstream is(chunk);
        while (std::getline(is, item, ','))
            if (!item.empty()) out.push_back(parse_rational(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated sampling strategies and agreement games with exact errors"};
    app.require_subcommand(1);

    // ---- tv ----------------------------------------------------------
    struct {
        std::string p, q;
        OutputOpts out;
    } tv_o;
    auto* tv_cmd = app.add_subcommand("tv", "Exact total variation distance of two distributions");
    tv_cmd->add_option("--p", tv_o.p, "JSON distribution file")->required();
    tv_cmd->add_option("--q", tv_o.q, "JSON distribution file")->required();
    add_output_opts(tv_cmd, tv_o.out);
    tv_cmd->callback([&] {
        const DiscreteDistribution p = load_distribution(tv_o.p);
        const DiscreteDistribution q = load_distribution(tv_o.q);
        const Rational d = tv_distance(p, q);
        deliver(Json{{"n", p.n()},
                     {"tv", rational_to_string(d)},
                     {"approx", rational_to_double(d)}},
                tv_o.out);
    });

    // ---- minhash -----------------------------------------------------
    struct {
        std::string a, b;
        std::uint64_t seed = 0;
        OutputOpts out;
    } mh_o;
    auto* mh_cmd = app.add_subcommand("minhash", "MinHash agreement on two explicit sets");
    mh_cmd->add_option("--a", mh_o.a, "JSON subset file")->required();
    mh_cmd->add_option("--b", mh_o.b, "JSON subset file")->required();
    mh_cmd->add_option("--seed", mh_o.seed, "Priority table seed");
    add_output_opts(mh_cmd, mh_o.out);
    mh_cmd->callback([&] {
        const Subset a = load_subset(mh_o.a);
        const Subset b = load_subset(mh_o.b);
        const Rational err = minhash_exact_error(a, b);
        const PriorityTable pri(mh_o.seed);
        const int pa = minhash_sample(a, pri);
        const int pb = minhash_sample(b, pri);
        deliver(Json{{"n", a.universe()},
                     {"error", rational_to_string(err)},
                     {"approx", rational_to_double(err)},
                     {"seed", mh_o.seed},
                     {"a_pick", pa},
                     {"b_pick", pb},
                     {"agree", pa == pb}},
                mh_o.out);
    });

    // ---- holenstein --------------------------------------------------
    struct {
        std::string p, q, gamma;
        std::uint64_t seed = 0;
        OutputOpts out;
    } ho_o;
    auto* ho_cmd =
        app.add_subcommand("holenstein", "Grid embedding agreement on two distributions");
    ho_cmd->add_option("--p", ho_o.p, "JSON distribution file")->required();
    ho_cmd->add_option("--q", ho_o.q, "JSON distribution file")->required();
    ho_cmd->add_option("--gamma", ho_o.gamma, "Grid resolution, e.g. 1/10")->required();
    ho_cmd->add_option("--seed", ho_o.seed, "Priority table seed");
    add_output_opts(ho_cmd, ho_o.out);
    ho_cmd->callback([&] {
        const DiscreteDistribution p = load_distribution(ho_o.p);
        const DiscreteDistribution q = load_distribution(ho_o.q);
        const GridParams g = GridParams::from_gamma(parse_rational(ho_o.gamma));
        const GridEmbedding ep = grid_embed(p, g);
        const GridEmbedding eq = grid_embed(q, g);
        const Rational err = holenstein_exact_error(p, q, g);
        const Rational delta = tv_distance(p, q);
        const PriorityTable pri(ho_o.seed);
        const int pa = holenstein_sample(ep, pri);
        const int pb = holenstein_sample(eq, pri);
        deliver(Json{{"n", p.n()},
                     {"gamma", rational_to_string(g.gamma())},
                     {"delta", rational_to_string(delta)},
                     {"error", rational_to_string(err)},
                     {"approx", rational_to_double(err)},
                     {"bound", rational_to_string(holenstein_error_bound(delta, p.n(), g))},
                     {"p_cells", ep.total_cells()},
                     {"q_cells", eq.total_cells()},
                     {"seed", ho_o.seed},
                     {"p_pick", pa},
                     {"q_pick", pb},
                     {"agree", pa == pb}},
                ho_o.out);
    });

    // ---- rivest ------------------------------------------------------
    struct {
        int n = 0, r = 1;
        std::string a, b;
        OutputOpts out;
    } rv_o;
    auto* rv_cmd = app.add_subcommand("rivest", "Matching strategy on the one-overlap promise");
    rv_cmd->add_option("--n", rv_o.n, "Odd universe size >= 3")->required();
    auto* rv_a = rv_cmd->add_option("--a", rv_o.a, "JSON subset file, |a| = (n+1)/2");
    auto* rv_b = rv_cmd->add_option("--b", rv_o.b, "JSON subset file, |b| = (n+1)/2");
    auto* rv_r = rv_cmd->add_option("--r", rv_o.r, "Shared matching index in [1, k]");
    rv_a->needs(rv_b);
    rv_b->needs(rv_a);
    rv_r->needs(rv_a);
    add_output_opts(rv_cmd, rv_o.out);
    rv_cmd->callback([&] {
        const Rational err = rivest_exact_error(rv_o.n);
        Json j{{"n", rv_o.n},
               {"k", (rv_o.n + 1) / 2},
               {"error", rational_to_string(err)},
               {"approx", rational_to_double(err)}};
        if (!rv_o.a.empty()) {
            const MatchingDecomposition dec = decompose(build_rivest_graph(rv_o.n));
            const Subset a = load_subset(rv_o.a);
            const Subset b = load_subset(rv_o.b);
            const int pa = rivest_sample(dec, Side::Left, a, rv_o.r);
            const int pb = rivest_sample(dec, Side::Right, b, rv_o.r);
            j["r"] = rv_o.r;
            j["a_pick"] = pa;
            j["b_pick"] = pb;
            j["agree"] = pa == pb;
        }
        deliver(j, rv_o.out);
    });

    // ---- matchings ---------------------------------------------------
    struct {
        int n = 0;
        OutputOpts out;
    } ma_o;
    auto* ma_cmd =
        app.add_subcommand("matchings", "Edge-disjoint perfect matching decomposition");
    ma_cmd->add_option("--n", ma_o.n, "Odd universe size >= 3")->required();
    add_output_opts(ma_cmd, ma_o.out);
    ma_cmd->callback(
        [&] { deliver(decomposition_to_json(decompose(build_rivest_graph(ma_o.n))), ma_o.out); });

    // ---- bruteforce ----------------------------------------------------
    struct {
        std::string family;
        int n = 0, a = 0, b = 0, l = 0;
        std::string p, delta;
        OutputOpts out;
    } bf_o;
    auto* bf_cmd =
        app.add_subcommand("bruteforce", "Exact deterministic optimum of an agreement game");
    bf_cmd->add_option("--family", bf_o.family, "product | positively_correlated | match | intersection")
        ->required()
        ->check(CLI::IsMember({"product", "positively_correlated", "match", "intersection"}));
    bf_cmd->add_option("--n", bf_o.n, "Universe size")->required();
    auto* bf_p = bf_cmd->add_option("--p", bf_o.p, "Membership rate, e.g. 1/2");
    auto* bf_d = bf_cmd->add_option("--delta", bf_o.delta, "Correlation parameter, e.g. 1/4");
    bf_cmd->add_option("--a", bf_o.a, "Left size (intersection family)");
    bf_cmd->add_option("--b", bf_o.b, "Right size (intersection family)");
    bf_cmd->add_option("--l", bf_o.l, "Overlap (intersection family)");
    add_output_opts(bf_cmd, bf_o.out);
    bf_cmd->callback([&] {
        PairDistribution d = [&] {
            if (bf_o.family == "product") {
                if (bf_p->count() == 0) throw InvalidInputError("--p required for this family");
                return PairDistribution::product(bf_o.n, parse_rational(bf_o.p));
            }
            if (bf_o.family == "positively_correlated") {
                if (bf_p->count() == 0 || bf_d->count() == 0)
                    throw InvalidInputError("--p and --delta required for this family");
                return PairDistribution::positively_correlated(bf_o.n, parse_rational(bf_o.p),
                                                               parse_rational(bf_o.delta));
            }
            if (bf_o.family == "match") return PairDistribution::match_family(bf_o.n);
            return PairDistribution::intersection_family(bf_o.n, bf_o.a, bf_o.b, bf_o.l);
        }();
        const BruteForceResult r = brute_force_optimum(d);
        deliver(Json{{"family", bf_o.family},
                     {"n", bf_o.n},
                     {"optimum", rational_to_string(r.optimum)},
                     {"approx", rational_to_double(r.optimum)},
                     {"strategies_scanned", r.strategies_scanned},
                     {"f", strategy_to_json(r.f)},
                     {"g", strategy_to_json(r.g)}},
                bf_o.out);
    });

    // ---- probe ---------------------------------------------------------
    struct {
        int n = 0, a = 0, b = 0, l = 0;
        OutputOpts out;
    } pr_o;
    auto* pr_cmd = app.add_subcommand(
        "probe", "Compare the fixed-profile optimum against the shared-order value");
    pr_cmd->add_option("--n", pr_o.n, "Universe size")->required();
    pr_cmd->add_option("--a", pr_o.a, "Left size")->required();
    pr_cmd->add_option("--b", pr_o.b, "Right size")->required();
    pr_cmd->add_option("--l", pr_o.l, "Overlap")->required();
    add_output_opts(pr_cmd, pr_o.out);
    pr_cmd->callback([&] {
        const ProbeReport r = conjecture_probe(pr_o.n, pr_o.a, pr_o.b, pr_o.l);
        deliver(Json{{"n", r.n},
                     {"a", r.a},
                     {"b", r.b},
                     {"l", r.l},
                     {"minhash", rational_to_string(r.minhash_value)},
                     {"minhash_approx", rational_to_double(r.minhash_value)},
                     {"optimum", rational_to_string(r.optimum)},
                     {"optimum_approx", rational_to_double(r.optimum)},
                     {"exact", r.exact},
                     {"rounds", r.rounds},
                     {"verdict", to_string(r.verdict)},
                     {"f", strategy_to_json(r.f)},
                     {"g", strategy_to_json(r.g)}},
                pr_o.out);
    });

    // ---- sweep ---------------------------------------------------------
    struct {
        std::vector<std::string> deltas;
        std::string strategy = "minhash";
        std::string gamma;
        std::uint64_t trials = 100000;
        std::uint64_t seed = 0;
        int threads = 1;
        OutputOpts out;
    } sw_o;
    auto* sw_cmd = app.add_subcommand("sweep", "Exact and empirical error across distances");
    sw_cmd->add_option("--deltas", sw_o.deltas, "Distances, e.g. 1/10,1/4,1/2")->required();
    sw_cmd->add_option("--strategy", sw_o.strategy, "minhash | holenstein | continuous")
        ->check(CLI::IsMember({"minhash", "holenstein", "continuous"}));
    sw_cmd->add_option("--gamma", sw_o.gamma, "Grid resolution (holenstein only)");
    sw_cmd->add_option("--trials", sw_o.trials, "Trials per distance");
    sw_cmd->add_option("--seed", sw_o.seed, "Master seed");
    sw_cmd->add_option("--threads", sw_o.threads, "Worker threads (does not change results)");
    add_output_opts(sw_cmd, sw_o.out);
    sw_cmd->callback([&] {
        TrialConfig cfg;
        cfg.seed = sw_o.seed;
        cfg.trials = sw_o.trials;
        cfg.threads = sw_o.threads;
        if (!sw_o.gamma.empty()) cfg.grid = GridParams::from_gamma(parse_rational(sw_o.gamma));
        deliver(sweep_delta(parse_strategy(sw_o.strategy), parse_delta_list(sw_o.deltas), cfg),
                sw_o.out);
    });

    // ---- montecarlo ----------------------------------------------------
    struct {
        std::string strategy = "minhash";
        std::string a, b, p, q, gamma;
        std::uint64_t trials = 100000;
        std::uint64_t seed = 0;
        int threads = 1;
        OutputOpts out;
    } mc_o;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Empirical disagreement of one strategy");
    mc_cmd->add_option("--strategy", mc_o.strategy, "minhash | holenstein | continuous")
        ->check(CLI::IsMember({"minhash", "holenstein", "continuous"}));
    auto* mc_a = mc_cmd->add_option("--a", mc_o.a, "JSON subset file (flat pair)");
    auto* mc_b = mc_cmd->add_option("--b", mc_o.b, "JSON subset file (flat pair)");
    mc_cmd->add_option("--p", mc_o.p, "JSON distribution file");
    mc_cmd->add_option("--q", mc_o.q, "JSON distribution file");
    mc_cmd->add_option("--gamma", mc_o.gamma, "Grid resolution (holenstein only)");
    mc_cmd->add_option("--trials", mc_o.trials, "Trial count");
    mc_cmd->add_option("--seed", mc_o.seed, "Master seed");
    mc_cmd->add_option("--threads", mc_o.threads, "Worker threads (does not change results)");
    mc_a->needs(mc_b);
    mc_b->needs(mc_a);
    add_output_opts(mc_cmd, mc_o.out);
    mc_cmd->callback([&] {
        DiscreteDistribution p = [&] {
            if (!mc_o.a.empty()) return DiscreteDistribution::uniform(load_subset(mc_o.a));
            if (mc_o.p.empty()) throw InvalidInputError("give --a/--b or --p/--q");
            return load_distribution(mc_o.p);
        }();
        DiscreteDistribution q = [&] {
            if (!mc_o.b.empty()) return DiscreteDistribution::uniform(load_subset(mc_o.b));
            if (mc_o.q.empty()) throw InvalidInputError("give --a/--b or --p/--q");
            return load_distribution(mc_o.q);
        }();
        TrialConfig cfg;
        cfg.seed = mc_o.seed;
        cfg.trials = mc_o.trials;
        cfg.threads = mc_o.threads;
        if (!mc_o.gamma.empty()) cfg.grid = GridParams::from_gamma(parse_rational(mc_o.gamma));
        const MonteCarloResult r = monte_carlo_error(parse_strategy(mc_o.strategy), p, q, cfg);
        deliver(Json{{"strategy", mc_o.strategy},
                     {"n", p.n()},
                     {"trials", r.trials},
                     {"disagreements", r.disagreements},
                     {"estimate", r.estimate},
                     {"stderr", r.std_error},
                     {"seed", mc_o.seed}},
                mc_o.out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceLimit;
    } catch (const InvariantViolationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariantViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariantViolation;
    }
    return kExitOk;
}
