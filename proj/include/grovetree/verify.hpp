#pragma once

#include <grovetree/analytic.hpp>
#include <grovetree/growth.hpp>
#include <grovetree/tree_metrics.hpp>
#include <grovetree/walk.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace grovetree {

enum class CheckStatus { pass, fail, skipped };

inline std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "fail";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct IdentityLimits {
    std::size_t solver_max_n = 600;
    std::size_t pairwise_max_n = 3000;
    std::size_t bfs_max_n = 20000;
    std::size_t spectral_max_n = kSpectralMaxN;
};

namespace detail {

inline bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

inline std::string describe(double got, double want) {
    std::ostringstream s;
    s.precision(17);
    s << "got " << got << ", expected " << want;
    return s.str();
}

}  // namespace detail

/// Walk and tree identities on one concrete tree.
inline std::vector<CheckResult> verify_tree_identities(const Tree& tree, const IdentityLimits& limits = {}) {
    std::vector<CheckResult> out;
    const std::size_t n = tree.size();
    const SplitSizes split(tree);
    const Int128 w = wiener_fast(tree);

    {
        CheckResult c{"lemma1", CheckStatus::pass, ""};
        for (VertexId v = 0; v < n && n > 1; ++v) {
            const std::uint64_t want = 2 * (n - 1) - tree.degree(v);
            if (lemma1_sum(tree, split, v) != want) {
                c.status = CheckStatus::fail;
                c.detail = "vertex " + std::to_string(v);
                break;
            }
        }
        out.push_back(c);
    }

    if (n > limits.bfs_max_n) {
        out.push_back({"wiener_fast_vs_bfs", CheckStatus::skipped, "n above limit"});
    } else {
        const Int128 slow = wiener_bfs(tree);
        out.push_back({"wiener_fast_vs_bfs", slow == w ? CheckStatus::pass : CheckStatus::fail,
                       "W = " + to_string(w) + ", BFS = " + to_string(slow)});
    }

    if (n < 2 || n > limits.pairwise_max_n) {
        out.push_back({"corollary3_commute", CheckStatus::skipped, n < 2 ? "single vertex" : "n above limit"});
    } else {
        CheckResult c{"corollary3_commute", CheckStatus::pass, ""};
        for (VertexId u = 0; u < n && c.status == CheckStatus::pass; ++u) {
            const auto d = distances_from(tree, u);
            for (VertexId v = u + 1; v < n; ++v) {
                if (commute_time(split, u, v) != 2 * (n - 1) * static_cast<std::uint64_t>(d[v])) {
                    c.status = CheckStatus::fail;
                    c.detail = "pair " + std::to_string(u) + "," + std::to_string(v);
                    break;
                }
            }
        }
        out.push_back(c);
    }

    if (n < 2 || n > limits.solver_max_n) {
        out.push_back({"proposition2_vs_solver", CheckStatus::skipped, n < 2 ? "single vertex" : "n above limit"});
        out.push_back({"theorem4_solver_mean", CheckStatus::skipped, n < 2 ? "single vertex" : "n above limit"});
    } else {
        const auto table = hitting_times_solve(tree, limits.solver_max_n);
        CheckResult prop{"proposition2_vs_solver", CheckStatus::pass, ""};
        for (const auto& e : tree.edges()) {
            for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                const double want = static_cast<double>(fpt_adjacent(split, a, b));
                if (!detail::close(table.at(a, b), want, 1e-9)) {
                    prop.status = CheckStatus::fail;
                    prop.detail = detail::describe(table.at(a, b), want);
                }
            }
        }
        out.push_back(prop);
        const double fast = 2.0 * to_double(w) / static_cast<double>(n);
        const double mean = table.mean();
        out.push_back({"theorem4_solver_mean", detail::close(mean, fast, 1e-9) ? CheckStatus::pass : CheckStatus::fail,
                       detail::describe(mean, fast)});
    }

    if (n < 2 || n > limits.spectral_max_n) {
        out.push_back({"spectral_mfpt", CheckStatus::skipped, n < 2 ? "single vertex" : "n above limit"});
    } else {
        const double fast = 2.0 * to_double(w) / static_cast<double>(n);
        const auto spec = laplacian_eigencheck(tree);
        out.push_back({"spectral_mfpt", detail::close(spec.mfpt_spectral, fast, 1e-6) ? CheckStatus::pass : CheckStatus::fail,
                       detail::describe(spec.mfpt_spectral, fast)});
    }
    return out;
}

/// Closed-form identities for a spec and the reductions to the deterministic corollaries.
inline std::vector<CheckResult> verify_formula_identities(const SeedSummary& seed, const GrowthSpec& spec, unsigned t) {
    spec.validate();
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, double got, double want, double rel) {
        out.push_back({name, detail::close(got, want, rel) ? CheckStatus::pass : CheckStatus::fail,
                       detail::describe(got, want)});
    };
    const auto m = moments<double>(spec.m_dist);
    const auto nm = moments<double>(spec.n_dist);

    switch (spec.kind) {
        case GrowthKind::vugm: {
            const auto p = w_poly_I(seed, spec.mu, m);
            check("case_sum", p.case1 + p.case2 + p.case3 + p.case4, p.total, 1e-12);
            check("proposition_at_t1", wiener_I(seed, spec.mu, m, 1), p.total, 1e-12);
            break;
        }
        case GrowthKind::eugm: {
            const auto p = w_poly_II(seed, spec.nu, m, nm);
            check("case_sum", p.case1 + p.case2 + p.case3 + p.case4, p.total, 1e-12);
            check("proposition_at_t1", wiener_II(seed, spec.nu, m, nm, 1), p.total, 1e-12);
            const auto& s = p.symbols;
            const double scale = std::max({std::abs(s.psi1), std::abs(s.psi2), std::abs(s.psi3)});
            const double sum = s.psi1 + s.psi2 + s.psi3;
            out.push_back({"psi_sum", std::abs(sum) <= 1e-12 * scale ? CheckStatus::pass : CheckStatus::fail,
                           detail::describe(sum, 0.0)});
            break;
        }
        case GrowthKind::mugm: {
            const auto p = w_poly_III(seed, spec.mu, m);
            check("case_sum", p.case1 + p.case2 + p.case3 + p.case4, p.total, 1e-12);
            check("proposition_at_t1", wiener_III(seed, spec.mu, m, 1), p.total, 1e-12);
            break;
        }
    }
    const auto pred = predict_exact<double>(seed, spec, t);
    if (pred.n > 0) check("theorem4_formulas", pred.mfpt * pred.n, 2.0 * pred.w, 1e-12);

    const auto unit = moments<double>(LengthDistribution::constant(1));
    const SeedSummary edge{2, 1};
    const unsigned tt = std::max(1u, t);
    check("corollary8_reduction", corollary8_y1<double>(spec.mu, tt), mfpt_I(edge, spec.mu, unit, tt), 1e-12);
    check("corollary13_reduction", corollary13_tgraph<double>(tt), mfpt_II(edge, 1, unit, unit, tt), 1e-12);
    check("nu_fractal_reduction", nu_fractal_mfpt<double>(1, tt), corollary13_tgraph<double>(tt), 1e-12);
    if (spec.mu >= 2) {
        const SeedSummary star{spec.mu + 1, static_cast<Int128>(spec.mu) * spec.mu};
        check("corollary17_reduction", corollary17_vicsek<double>(spec.mu, tt), mfpt_III(star, spec.mu, unit, tt),
              1e-12);
    }
    const Int128 h = static_cast<Int128>(seed.h);
    const Int128 sub = corollary11_subdivision(seed, 1);
    const Int128 want = 8 * seed.w - 2 * h * (h - 1);
    out.push_back({"corollary11_reduction", sub == want ? CheckStatus::pass : CheckStatus::fail,
                   "got " + to_string(sub) + ", expected " + to_string(want)});
    return out;
}

/// For deterministic specs: the closed forms at t against the constructed tree, in exact arithmetic.
inline CheckResult verify_deterministic_ground_truth(const SeedSummary& seed, const GrowthSpec& spec, unsigned t,
                                                     const Tree& grown) {
    if (!spec.deterministic()) return {"closed_form_vs_tree", CheckStatus::skipped, "stochastic spec"};
    const auto exact = predict_exact<Rational>(seed, spec, t);
    const Rational n(static_cast<unsigned long long>(grown.size()));
    const Rational w = detail::from_int128<Rational>(wiener_fast(grown));
    const bool ok = exact.n == n && exact.w == w;
    std::ostringstream s;
    s << "n " << grown.size() << " vs " << exact.n << ", W " << to_string(wiener_fast(grown)) << " vs " << exact.w;
    return {"closed_form_vs_tree", ok ? CheckStatus::pass : CheckStatus::fail, s.str()};
}

inline nlohmann::json to_json(const CheckResult& c) {
    return {{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}};
}

}  // namespace grovetree
