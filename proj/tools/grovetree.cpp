#include <grovetree/analytic.hpp>
#include <grovetree/experiment.hpp>
#include <grovetree/growth.hpp>
#include <grovetree/tree_io.hpp>
#include <grovetree/verify.hpp>
#include <grovetree/walk.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace grovetree;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitResource = 3;

constexpr std::size_t kDefaultMaxN = 5'000'000;

struct UsageError : Error {
    using Error::Error;
};

struct GlobalOptions {
    std::optional<std::uint64_t> rng_seed;
    unsigned threads = default_threads();
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::string config;
};

struct InstanceOptions {
    std::string preset;
    std::optional<unsigned> mu, nu, m;
    std::string spec_file;
    std::string seed_file;
    std::optional<unsigned> t;
    std::string t_range;
    std::optional<std::size_t> replicates;
};

std::size_t max_vertices_from_env() {
    const char* raw = std::getenv("GROVETREE_MAX_N");
    if (raw == nullptr || *raw == '\0') return kDefaultMaxN;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != std::string(raw).size() || v < 1) throw std::invalid_argument("bad");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError("GROVETREE_MAX_N must be a positive integer");
    }
}

ExperimentConfig resolve(const GlobalOptions& g, const InstanceOptions& o) {
    ExperimentConfig c;
    const bool from_file = !g.config.empty();
    if (from_file) {
        try {
            c = experiment_config_from_json(json::parse(read_text_file(g.config)));
        } catch (const json::exception& e) {
            throw InvalidArgument("config is not valid JSON: " + std::string(e.what()));
        }
    }
    if (!o.preset.empty() && !o.spec_file.empty()) throw UsageError("--preset and --spec are mutually exclusive");
    if (o.preset.empty() && (o.mu || o.nu || o.m)) throw UsageError("--mu, --nu and --m only apply to --preset");
    if (!o.preset.empty()) {
        auto p = preset(o.preset, PresetParams{o.mu, o.nu, o.m});
        c.seed = std::move(p.seed);
        c.spec = std::move(p.spec);
        c.preset_name = o.preset;
    } else if (!o.spec_file.empty()) {
        try {
            c.spec = growth_spec_from_json(json::parse(read_text_file(o.spec_file)));
        } catch (const json::exception& e) {
            throw InvalidArgument("spec file is not valid JSON: " + std::string(e.what()));
        }
        c.preset_name.reset();
    } else if (!from_file) {
        throw UsageError("an instance is required: give --preset, --spec or --config");
    }
    if (!o.seed_file.empty()) c.seed = load_tree(o.seed_file);
    if (o.t && !o.t_range.empty()) throw UsageError("--t and --t-range are mutually exclusive");
    if (o.t) c.t_first = c.t_last = *o.t;
    if (!o.t_range.empty()) {
        const auto colon = o.t_range.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument("no colon");
            std::size_t a_used = 0, b_used = 0;
            const std::string a = o.t_range.substr(0, colon), b = o.t_range.substr(colon + 1);
            const unsigned long first = std::stoul(a, &a_used), last = std::stoul(b, &b_used);
            if (a_used != a.size() || b_used != b.size()) throw std::invalid_argument("trailing");
            c.t_first = static_cast<unsigned>(first);
            c.t_last = static_cast<unsigned>(last);
        } catch (const std::exception&) {
            throw UsageError("--t-range must look like FIRST:LAST");
        }
    }
    if (o.replicates) c.replicates = *o.replicates;
    if (g.rng_seed) c.rng_seed = *g.rng_seed;
    if (g.format) c.format = *g.format;
    if (g.out) c.out = *g.out;
    c.validate();
    return c;
}

unsigned single_t(const ExperimentConfig& c) {
    if (c.t_first != c.t_last) throw UsageError("this command takes a single t, not a range");
    return c.t_first;
}

/// Refuses instances whose expected size or Wiener index would not fit.
void check_capacity(const ExperimentConfig& c, unsigned t, std::size_t max_n) {
    const auto r = predict(SeedSummary::of(c.seed), c.spec, t);
    if (!(r.expected_n <= static_cast<double>(max_n)))
        throw ResourceLimit("expected tree size " + std::to_string(r.expected_n) + " exceeds the vertex cap " +
                            std::to_string(max_n));
    if (!(r.expected_w < 0x1.0p126)) throw OverflowError("expected Wiener index exceeds the 128-bit range");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw InvalidArgument("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

Tree build(const ExperimentConfig& c, unsigned t, std::size_t max_n) {
    check_capacity(c, t, max_n);
    RngStream rng(c.rng_seed, 0);
    return grow(c.seed, c.spec, t, rng, max_n);
}

json tree_summary(const Tree& tree) {
    json j = {{"n", tree.size()}, {"w", to_string(wiener_fast(tree))}};
    j["mfpt"] = tree.size() > 1 ? json(mfpt_exact(tree)) : json(nullptr);
    return j;
}

int cmd_generate(const ExperimentConfig& c, std::size_t max_n) {
    const unsigned t = single_t(c);
    const Tree tree = build(c, t, max_n);
    Output out(c.out);
    if (c.format == "json") out.stream() << tree_to_json(tree).dump() << '\n';
    else out.stream() << tree_to_edge_list(tree);
    (out.to_file() ? std::cout : std::cerr) << tree_summary(tree).dump() << '\n';
    return kExitOk;
}

int cmd_predict(const ExperimentConfig& c) {
    const unsigned t = single_t(c);
    const auto r = predict(SeedSummary::of(c.seed), c.spec, t);
    if (!(r.expected_w < 0x1.0p126)) throw OverflowError("expected Wiener index exceeds the 128-bit range");
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << to_json(r).dump(2) << '\n';
    } else {
        auto& s = out.stream();
        s.precision(17);
        s << kAnalyticCsvHeader << '\n'
          << r.family << ',' << r.t << ',' << r.expected_n << ',' << r.expected_w << ',' << r.expected_mfpt << ','
          << r.expected_kirchhoff << ',' << r.expected_criticality << ',' << r.theta << '\n';
    }
    return kExitOk;
}

int cmd_verify_identities(const ExperimentConfig& c, std::size_t max_n) {
    const unsigned t = single_t(c);
    const Tree tree = build(c, t, max_n);
    const auto seed = SeedSummary::of(c.seed);
    auto checks = verify_tree_identities(tree);
    for (auto& f : verify_formula_identities(seed, c.spec, t)) checks.push_back(std::move(f));
    checks.push_back(verify_deterministic_ground_truth(seed, c.spec, t, tree));
    bool passed = true;
    for (const auto& ch : checks) passed = passed && ch.status != CheckStatus::fail;

    Output out(c.out);
    if (c.format == "json") {
        json list = json::array();
        for (const auto& ch : checks) list.push_back(to_json(ch));
        out.stream() << json{{"t", t}, {"n", tree.size()}, {"w", to_string(wiener_fast(tree))},
                             {"checks", list}, {"passed", passed}}
                            .dump(2)
                     << '\n';
    } else {
        out.stream() << "name,status,detail\n";
        for (const auto& ch : checks) out.stream() << ch.name << ',' << to_string(ch.status) << ",\"" << ch.detail << "\"\n";
    }
    return passed ? kExitOk : kExitVerification;
}

int cmd_verify_ensemble(const ExperimentConfig& c, unsigned threads, std::size_t max_n) {
    const unsigned t = single_t(c);
    check_capacity(c, t, max_n);
    const auto stats = sample_ensemble(c.seed, c.spec, t, c.replicates, c.rng_seed, threads, max_n);
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << to_json(stats).dump(2) << '\n';
    } else {
        auto& s = out.stream();
        s.precision(17);
        s << "quantity,mean,variance,std_error,replicates,prediction,z,flagged\n";
        for (auto [name, q] : {std::pair{"n", &stats.n}, std::pair{"w", &stats.w}, std::pair{"mfpt", &stats.mfpt}}) {
            s << name << ',' << q->mean << ',' << q->variance << ',' << q->std_error << ',' << q->replicates << ','
              << q->prediction << ',';
            if (q->z) s << *q->z;
            s << ',' << (q->flagged ? "true" : "false") << '\n';
        }
    }
    return stats.flagged() ? kExitVerification : kExitOk;
}

int cmd_simulate(const ExperimentConfig& c, unsigned threads, std::size_t max_n, VertexId source, VertexId target,
                 std::uint64_t trials) {
    const unsigned t = single_t(c);
    const Tree tree = build(c, t, max_n);
    if (source >= tree.size() || target >= tree.size())
        throw UsageError("source and target must be below n = " + std::to_string(tree.size()));
    WalkConfig wc;
    wc.trials = trials;
    wc.rng_seed = c.rng_seed;
    wc.stream_base = 1;  // stream 0 grew the tree
    wc.threads = threads;
    const auto est = monte_carlo_fpt(tree, source, target, wc);
    const double exact = static_cast<double>(fpt_pair(tree, source, target));
    const std::optional<double> z =
        est.std_error > 0 ? std::optional<double>((est.mean - exact) / est.std_error) : std::nullopt;
    Output out(c.out);
    if (c.format == "json") {
        out.stream() << json{{"n", tree.size()},       {"source", source},   {"target", target},
                             {"trials", est.trials},   {"mean", est.mean},   {"std_error", est.std_error},
                             {"exact", exact},         {"z", z ? json(*z) : json(nullptr)}}
                            .dump(2)
                     << '\n';
    } else {
        auto& s = out.stream();
        s.precision(17);
        s << "n,source,target,trials,mean,std_error,exact,z\n"
          << tree.size() << ',' << source << ',' << target << ',' << est.trials << ',' << est.mean << ','
          << est.std_error << ',' << exact << ',';
        if (z) s << *z;
        s << '\n';
    }
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& c, std::size_t max_n) {
    check_capacity(c, c.t_last, max_n);
    const auto result = run_sweep(c.seed, c.spec, c.t_first, c.t_last, max_n);
    const auto asym = criticality_asymptotics(c.spec);
    Output out(c.out);
    if (c.format == "json") {
        json j = to_json(result);
        j["criticality_asymptotics"] = {{"class", asym.growth_class},
                                        {"exponent", asym.exponent ? json(*asym.exponent) : json(nullptr)}};
        out.stream() << j.dump(2) << '\n';
    } else {
        auto& s = out.stream();
        s.precision(17);
        s << kSweepCsvHeader << '\n';
        for (const auto& r : result.rows)
            s << r.t << ',' << r.n << ',' << r.w << ',' << r.mfpt << ',' << r.criticality << '\n';
        std::cerr.precision(6);
        if (result.loglog)
            std::cerr << "# loglog slope " << result.loglog->slope << " r2 " << result.loglog->r2 << '\n';
        if (result.theta) std::cerr << "# theta " << *result.theta << '\n';
        if (result.ratio_fit)
            std::cerr << "# mfpt/n slope in t " << result.ratio_fit->slope << " (theta_I/t "
                      << *result.theta_I_coefficient << ", closed-form slope " << *result.slope_coefficient_I << ")\n";
    }
    return kExitOk;
}

int cmd_preset_list(const GlobalOptions& g) {
    Output out(g.out.value_or(""));
    const std::string format = g.format.value_or("json");
    if (format == "json") {
        json list = json::array();
        for (const auto& p : preset_catalog())
            list.push_back({{"name", p.name}, {"description", p.description}, {"params", p.params}});
        out.stream() << list.dump(2) << '\n';
    } else {
        out.stream() << "name,description,params\n";
        for (const auto& p : preset_catalog())
            out.stream() << p.name << ",\"" << p.description << "\",\"" << p.params << "\"\n";
    }
    return kExitOk;
}

void add_instance_options(CLI::App* sub, InstanceOptions& o, bool with_replicates) {
    sub->add_option("--preset", o.preset, "Deterministic preset: y1, t-graph, vicsek, nu-fractal, subdivision");
    sub->add_option("--mu", o.mu, "Preset parameter mu");
    sub->add_option("--nu", o.nu, "Preset parameter nu");
    sub->add_option("--m", o.m, "Preset parameter m");
    sub->add_option("--spec", o.spec_file, "GrowthSpec JSON file")->check(CLI::ExistingFile);
    sub->add_option("--seed-file", o.seed_file, "Seed tree (.json or edge list)")->check(CLI::ExistingFile);
    sub->add_option("-t,--t", o.t, "Number of growth steps");
    sub->add_option("--t-range", o.t_range, "Range of steps FIRST:LAST");
    if (with_replicates) sub->add_option("-R,--replicates", o.replicates, "Number of sampled trees")->check(CLI::PositiveNumber);
    sub->fallthrough();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic uniform growth trees: generation, closed forms and verification"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--rng-seed", g.rng_seed, "Master RNG seed");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "edges"}));
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_option("--config", g.config, "ExperimentConfig JSON file")->check(CLI::ExistingFile);

    InstanceOptions o;
    VertexId source = 0, target = 0;
    std::uint64_t trials = 100000;
    auto* generate = app.add_subcommand("generate", "Grow a tree and write it out");
    add_instance_options(generate, o, false);
    auto* predict_cmd = app.add_subcommand("predict", "Closed-form expectations at step t");
    add_instance_options(predict_cmd, o, false);
    auto* identities = app.add_subcommand("verify-identities", "Check the exact identities on a grown tree");
    add_instance_options(identities, o, false);
    auto* ensemble = app.add_subcommand("verify-ensemble", "Compare sampled means with the closed forms");
    add_instance_options(ensemble, o, true);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo first-passage time between two vertices");
    add_instance_options(simulate, o, false);
    simulate->add_option("--source", source, "Start vertex")->required();
    simulate->add_option("--target", target, "Target vertex")->required();
    simulate->add_option("--trials", trials, "Number of walks")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep", "Sweep t and fit the scaling exponent");
    add_instance_options(sweep, o, false);
    auto* list = app.add_subcommand("preset-list", "List the deterministic presets");
    list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (list->parsed()) return cmd_preset_list(g);
        const std::size_t max_n = max_vertices_from_env();
        const ExperimentConfig c = resolve(g, o);
        if (generate->parsed()) return cmd_generate(c, max_n);
        if (predict_cmd->parsed()) return cmd_predict(c);
        if (identities->parsed()) return cmd_verify_identities(c, max_n);
        if (ensemble->parsed()) return cmd_verify_ensemble(c, g.threads, max_n);
        if (simulate->parsed()) return cmd_simulate(c, g.threads, max_n, source, target, trials);
        if (sweep->parsed()) return cmd_sweep(c, max_n);
    } catch (const ResourceLimit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
