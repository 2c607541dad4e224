#pragma once

#include <grovetree/analytic.hpp>
#include <grovetree/growth.hpp>
#include <grovetree/parallel.hpp>
#include <grovetree/tree_io.hpp>
#include <grovetree/tree_metrics.hpp>
#include <grovetree/walk.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace grovetree {

// ===========================================================================
// Configuration

struct ExperimentConfig {
    Tree seed = edge_tree();
    GrowthSpec spec;
    std::optional<std::string> preset_name;
    unsigned t_first = 1;
    unsigned t_last = 1;
    std::size_t replicates = 1000;
    std::uint64_t rng_seed = 1;
    std::string format = "json";
    std::string out;

    void validate() const {
        spec.validate();
        if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
        if (t_first > t_last) throw InvalidArgument("t range is empty");
        if (format != "json" && format != "csv" && format != "edges")
            throw InvalidArgument("format must be json, csv or edges");
        if (spec.kind == GrowthKind::mugm && seed.max_degree() > spec.mu)
            throw InvalidArgument("MUGM seed has a vertex of degree above mu");
    }
};

namespace detail {

inline unsigned json_unsigned(const nlohmann::json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > std::numeric_limits<unsigned>::max())
        throw InvalidArgument(std::string(what) + " must be a nonnegative integer");
    return j.get<unsigned>();
}

}  // namespace detail

inline PresetParams preset_params_from_json(const nlohmann::json& j) {
    PresetParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw InvalidArgument("preset_params must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "mu") p.mu = detail::json_unsigned(value, "mu");
        else if (key == "nu") p.nu = detail::json_unsigned(value, "nu");
        else if (key == "m") p.m = detail::json_unsigned(value, "m");
        else throw InvalidArgument("unknown preset parameter \"" + key + "\"");
    }
    return p;
}

/// Reads an experiment config. Recognised keys:
///   preset, preset_params | spec; seed (inline tree JSON) | seed_file;
///   t | t_range [first, last]; replicates; rng_seed; format; out.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("experiment config must be a JSON object");
    static const char* const known[] = {"preset", "preset_params", "spec",    "seed",   "seed_file",
                                        "t",      "t_range",       "replicates", "rng_seed", "format", "out"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw InvalidArgument("unknown config key \"" + key + "\"");
    }
    if (j.contains("preset") == j.contains("spec")) throw InvalidArgument("config needs exactly one of preset, spec");
    if (j.contains("seed") && j.contains("seed_file")) throw InvalidArgument("config has both seed and seed_file");
    if (j.contains("t") && j.contains("t_range")) throw InvalidArgument("config has both t and t_range");

    ExperimentConfig c;
    try {
        if (j.contains("preset")) {
            const auto name = j.at("preset").get<std::string>();
            auto p = preset(name, preset_params_from_json(j.value("preset_params", nlohmann::json())));
            c.seed = std::move(p.seed);
            c.spec = std::move(p.spec);
            c.preset_name = name;
        } else {
            if (j.contains("preset_params")) throw InvalidArgument("preset_params given without preset");
            c.spec = growth_spec_from_json(j.at("spec"));
        }
        if (j.contains("seed")) c.seed = tree_from_json(j.at("seed"));
        if (j.contains("seed_file")) c.seed = load_tree(j.at("seed_file").get<std::string>());
        if (j.contains("t")) c.t_first = c.t_last = detail::json_unsigned(j.at("t"), "t");
        if (j.contains("t_range")) {
            const auto& r = j.at("t_range");
            if (!r.is_array() || r.size() != 2) throw InvalidArgument("t_range must be [first, last]");
            c.t_first = detail::json_unsigned(r[0], "t_range[0]");
            c.t_last = detail::json_unsigned(r[1], "t_range[1]");
        }
        if (j.contains("replicates")) c.replicates = detail::json_unsigned(j.at("replicates"), "replicates");
        if (j.contains("rng_seed")) {
            if (!j.at("rng_seed").is_number_unsigned()) throw InvalidArgument("rng_seed must be a nonnegative integer");
            c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        }
        if (j.contains("format")) c.format = j.at("format").get<std::string>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

// ===========================================================================
// Ensembles

struct QuantityStats {
    double mean = 0;
    double variance = 0;
    double std_error = 0;
    std::size_t replicates = 0;
    double prediction = 0;
    std::optional<double> z;  ///< unset when the sample has zero spread
    bool flagged = false;
};

inline QuantityStats summarize(const std::vector<double>& xs, double prediction, double z_limit = 4.0) {
    if (xs.empty()) throw InvalidArgument("cannot summarize an empty sample");
    QuantityStats s;
    s.replicates = xs.size();
    s.prediction = prediction;
    long double sum = 0;
    for (double x : xs) sum += x;
    const long double mean = sum / static_cast<long double>(xs.size());
    long double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    s.mean = static_cast<double>(mean);
    s.variance = xs.size() > 1 ? static_cast<double>(ss / static_cast<long double>(xs.size() - 1)) : 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(xs.size()));
    if (s.std_error > 0) {
        s.z = (s.mean - prediction) / s.std_error;
        s.flagged = std::abs(*s.z) > z_limit;
    } else {
        s.flagged = std::abs(s.mean - prediction) > 1e-9 * std::max(1.0, std::abs(prediction));
    }
    return s;
}

struct EnsembleStats {
    unsigned t = 0;
    std::uint64_t rng_seed = 0;
    QuantityStats n, w, mfpt;

    bool flagged() const { return n.flagged || w.flagged || mfpt.flagged; }
};

/// Grows R independent trees (replicate r uses stream r of rng_seed) and compares the
/// sample means of n, W and MFPT = 2W/n with the closed-form expectations.
inline EnsembleStats sample_ensemble(const Tree& seed, const GrowthSpec& spec, unsigned t, std::size_t replicates,
                                     std::uint64_t rng_seed, unsigned threads = 1,
                                     std::size_t max_vertices = kNoVertexCap) {
    if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
    spec.validate();
    std::vector<double> ns(replicates), ws(replicates), ms(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
        RngStream rng(rng_seed, r);
        const Tree tree = grow(seed, spec, t, rng, max_vertices);
        const double n = static_cast<double>(tree.size());
        const double w = to_double(wiener_fast(tree));
        ns[r] = n;
        ws[r] = w;
        ms[r] = n > 1 ? 2.0 * w / n : 0.0;
    });
    const auto report = predict(SeedSummary::of(seed), spec, t);
    EnsembleStats out;
    out.t = t;
    out.rng_seed = rng_seed;
    out.n = summarize(ns, report.expected_n);
    out.w = summarize(ws, report.expected_w);
    out.mfpt = summarize(ms, report.expected_mfpt);
    return out;
}

inline nlohmann::json to_json(const QuantityStats& s) {
    return {{"mean", s.mean},
            {"variance", s.variance},
            {"std_error", s.std_error},
            {"replicates", s.replicates},
            {"prediction", s.prediction},
            {"z", s.z ? nlohmann::json(*s.z) : nlohmann::json(nullptr)},
            {"flagged", s.flagged}};
}

inline nlohmann::json to_json(const EnsembleStats& e) {
    return {{"t", e.t},          {"rng_seed", e.rng_seed}, {"n", to_json(e.n)},
            {"w", to_json(e.w)}, {"mfpt", to_json(e.mfpt)}, {"flagged", e.flagged()}};
}

// ===========================================================================
// Sweeps

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("regression needs at least two points");
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) throw InvalidArgument("regression abscissae are all equal");
    LinearFit f;
    f.points = xs.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

struct SweepRow {
    unsigned t = 0;
    double n = 0;
    double w = 0;
    double mfpt = 0;
    double criticality = 0;
    bool constructed = false;  ///< measured on a built tree rather than taken from the closed forms
};

struct SweepResult {
    int family = 1;
    std::vector<SweepRow> rows;
    std::optional<LinearFit> loglog;            ///< ln MFPT against ln n
    std::optional<double> theta;                ///< Theta_II or Theta_III
    std::optional<LinearFit> ratio_fit;         ///< family I: MFPT / n against t
    std::optional<double> theta_I_coefficient;  ///< family I: Theta_I / t as printed
    std::optional<double> slope_coefficient_I;  ///< family I: leading slope of the closed form
};

inline constexpr const char* kSweepCsvHeader = "t,n,w,mfpt,criticality";

/// Sweeps t over [t_first, t_last]. Deterministic specs are built and measured exactly;
/// stochastic specs use the closed-form expectations.
inline SweepResult run_sweep(const Tree& seed, const GrowthSpec& spec, unsigned t_first, unsigned t_last,
                             std::size_t max_vertices = kNoVertexCap) {
    spec.validate();
    if (t_first > t_last) throw InvalidArgument("t range is empty");
    SweepResult out;
    out.family = family_of(spec.kind);
    const auto summary = SeedSummary::of(seed);
    if (spec.deterministic()) {
        // Single-atom distributions draw nothing, so the stream is never consumed.
        RngStream rng(0);
        RandomSampler sampler(rng);
        Tree tree = grow(seed, spec, t_first, sampler, max_vertices);
        for (unsigned t = t_first;; ++t) {
            SweepRow row;
            row.t = t;
            row.n = static_cast<double>(tree.size());
            row.w = to_double(wiener_fast(tree));
            row.mfpt = tree.size() > 1 ? 2.0 * row.w / row.n : 0.0;
            row.criticality = tree.size() > 1 ? network_criticality(tree) : std::numeric_limits<double>::quiet_NaN();
            row.constructed = true;
            out.rows.push_back(row);
            if (t == t_last) break;
            tree = apply_operation(tree, spec, sampler, max_vertices);
        }
    } else {
        for (unsigned t = t_first; t <= t_last; ++t) {
            const auto r = predict(summary, spec, t);
            out.rows.push_back({t, r.expected_n, r.expected_w, r.expected_mfpt, r.expected_criticality, false});
        }
    }

    std::vector<double> lx, ly;
    for (const auto& row : out.rows) {
        if (row.n > 1 && row.mfpt > 0) {
            lx.push_back(std::log(row.n));
            ly.push_back(std::log(row.mfpt));
        }
    }
    if (lx.size() >= 2) out.loglog = ols(lx, ly);

    const auto m = moments<double>(spec.m_dist);
    switch (spec.kind) {
        case GrowthKind::vugm: {
            std::vector<double> ts, ratio;
            for (const auto& row : out.rows) {
                if (row.n > 1) {
                    ts.push_back(row.t);
                    ratio.push_back(row.mfpt / row.n);
                }
            }
            if (ts.size() >= 2) out.ratio_fit = ols(ts, ratio);
            out.theta_I_coefficient = theta_I(spec.mu, m, 1);
            out.slope_coefficient_I = mfpt_per_vertex_slope_I(spec.mu, m);
            break;
        }
        case GrowthKind::eugm: out.theta = theta_II(spec.nu, m, moments<double>(spec.n_dist)); break;
        case GrowthKind::mugm: out.theta = theta_III(spec.mu, m); break;
    }
    return out;
}

inline nlohmann::json to_json(const LinearFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

inline nlohmann::json to_json(const SweepResult& s) {
    auto number = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    auto rows = nlohmann::json::array();
    for (const auto& r : s.rows) {
        rows.push_back({{"t", r.t},
                        {"n", r.n},
                        {"w", r.w},
                        {"mfpt", number(r.mfpt)},
                        {"criticality", number(r.criticality)},
                        {"source", r.constructed ? "constructed" : "analytic"}});
    }
    nlohmann::json j = {{"family", s.family}, {"rows", rows}};
    j["loglog_fit"] = s.loglog ? to_json(*s.loglog) : nlohmann::json(nullptr);
    j["theta"] = s.theta ? nlohmann::json(*s.theta) : nlohmann::json(nullptr);
    j["ratio_fit"] = s.ratio_fit ? to_json(*s.ratio_fit) : nlohmann::json(nullptr);
    j["theta_I_coefficient"] = s.theta_I_coefficient ? nlohmann::json(*s.theta_I_coefficient) : nlohmann::json(nullptr);
    j["slope_coefficient_I"] = s.slope_coefficient_I ? nlohmann::json(*s.slope_coefficient_I) : nlohmann::json(nullptr);
    return j;
}

}  // namespace grovetree
