#pragma once

#include <grovetree/errors.hpp>
#include <grovetree/rng.hpp>
#include <grovetree/tree.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace grovetree {

/// Finite distribution over path lengths (vertex counts >= 1).
///
/// Values must be distinct and probabilities must sum to one within 1e-12;
/// nothing is renormalized. The empty distribution is only meaningful where a
/// length is never drawn (no tentacles).
class LengthDistribution {
public:
    static constexpr double kSumTolerance = 1e-12;

    LengthDistribution() = default;

    LengthDistribution(std::vector<std::uint32_t> values, std::vector<double> probs)
        : values_(std::move(values)), probs_(std::move(probs)) {
        if (values_.size() != probs_.size())
            throw InvalidArgument("length distribution: values and probs differ in size");
        double sum = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] < 1) throw InvalidArgument("length distribution: every value must be >= 1");
            if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
                throw InvalidArgument("length distribution: probabilities must be finite and >= 0");
            for (std::size_t j = 0; j < i; ++j)
                if (values_[j] == values_[i]) throw InvalidArgument("length distribution: values must be distinct");
            sum += probs_[i];
        }
        if (!values_.empty() && std::abs(sum - 1.0) > kSumTolerance)
            throw InvalidArgument("length distribution: probabilities sum to " + std::to_string(sum) + ", not 1");
        cumulative_.resize(probs_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) cumulative_[i] = (acc += probs_[i]);
    }

    static LengthDistribution constant(std::uint32_t value) { return {{value}, {1.0}}; }

    static LengthDistribution uniform(std::vector<std::uint32_t> values) {
        const double p = values.empty() ? 0.0 : 1.0 / static_cast<double>(values.size());
        std::vector<double> probs(values.size(), p);
        return {std::move(values), std::move(probs)};
    }

    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<std::uint32_t>& values() const { return values_; }
    const std::vector<double>& probs() const { return probs_; }

    /// True when a single outcome carries all the mass.
    bool degenerate() const {
        return std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; }) == 1;
    }

    /// Inverse CDF: first atom whose cumulative mass exceeds u. Zero-mass atoms are never chosen.
    std::size_t index_for(double u) const {
        if (values_.empty()) throw InvalidArgument("cannot sample an empty length distribution");
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it != cumulative_.end()) return static_cast<std::size_t>(it - cumulative_.begin());
        // Rounding left u above the last cumulative sum.
        for (std::size_t i = probs_.size(); i-- > 0;)
            if (probs_[i] > 0.0) return i;
        return probs_.size() - 1;
    }

    double mean() const {
        double e = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) e += probs_[i] * values_[i];
        return e;
    }

    friend bool operator==(const LengthDistribution& a, const LengthDistribution& b) {
        return a.values_ == b.values_ && a.probs_ == b.probs_;
    }

private:
    std::vector<std::uint32_t> values_;
    std::vector<double> probs_;
    std::vector<double> cumulative_;
};

enum class GrowthKind { vugm, eugm, mugm };

inline std::string to_string(GrowthKind kind) {
    switch (kind) {
        case GrowthKind::vugm: return "vugm";
        case GrowthKind::eugm: return "eugm";
        case GrowthKind::mugm: return "mugm";
    }
    return "?";
}

inline GrowthKind growth_kind_from_string(const std::string& s) {
    if (s == "vugm") return GrowthKind::vugm;
    if (s == "eugm") return GrowthKind::eugm;
    if (s == "mugm") return GrowthKind::mugm;
    throw InvalidArgument("unknown growth kind \"" + s + "\" (expected vugm, eugm or mugm)");
}

/// Family index used by the closed forms: VUGM -> 1, EUGM -> 2, MUGM -> 3.
inline int family_of(GrowthKind kind) { return static_cast<int>(kind) + 1; }

/// Everything that determines one growth process.
///
/// mu: paths attached per vertex (VUGM) or target degree (MUGM, >= 2).
/// nu: tentacles per inserted vertex (EUGM only).
/// m_dist: path / insertion lengths. n_dist: tentacle lengths (EUGM with nu > 0).
struct GrowthSpec {
    GrowthKind kind = GrowthKind::vugm;
    unsigned mu = 1;
    unsigned nu = 0;
    LengthDistribution m_dist;
    LengthDistribution n_dist;

    void validate() const {
        if (mu < 1) throw InvalidArgument("growth spec: mu must be positive");
        if (m_dist.empty()) throw InvalidArgument("growth spec: m distribution must not be empty");
        switch (kind) {
            case GrowthKind::vugm:
            case GrowthKind::mugm:
                if (kind == GrowthKind::mugm && mu < 2) throw InvalidArgument("growth spec: MUGM needs mu >= 2");
                if (nu != 0 || !n_dist.empty())
                    throw InvalidArgument("growth spec: nu and the n distribution are only used by EUGM");
                break;
            case GrowthKind::eugm:
                if (nu == 0 && !n_dist.empty())
                    throw InvalidArgument("growth spec: n distribution must be empty when nu = 0");
                if (nu > 0 && n_dist.empty())
                    throw InvalidArgument("growth spec: nu > 0 requires a nonempty n distribution");
                break;
        }
    }

    /// True when every draw has a single possible outcome.
    bool deterministic() const {
        return m_dist.degenerate() && (kind != GrowthKind::eugm || nu == 0 || n_dist.degenerate());
    }

    friend bool operator==(const GrowthSpec&, const GrowthSpec&) = default;
};

/// Source of path lengths for the growth operations.
template <class S>
concept LengthSampler = requires(S s, const LengthDistribution& d) {
    { s.draw(d) } -> std::convertible_to<std::uint32_t>;
};

/// Draws lengths by inverse CDF from a random stream. Single-atom
/// distributions consume no randomness.
class RandomSampler {
public:
    explicit RandomSampler(RngStream& rng) : rng_(&rng) {}

    std::uint32_t draw(const LengthDistribution& d) {
        if (d.size() == 1) return d.values()[0];
        return d.values()[d.index_for(rng_->uniform01())];
    }

private:
    RngStream* rng_;
};

inline constexpr std::size_t kNoVertexCap = std::numeric_limits<std::size_t>::max();

namespace detail {

class TreeBuilder {
public:
    TreeBuilder(std::size_t n, std::size_t cap) : n_(n), cap_(cap) {}

    VertexId add_vertex() {
        if (n_ >= cap_) throw ResourceLimit("grown tree exceeds the vertex cap of " + std::to_string(cap_));
        return static_cast<VertexId>(n_++);
    }

    void link(VertexId a, VertexId b) { edges_.push_back({a, b}); }

    /// Hangs a path of `length` new vertices off `anchor`.
    void attach_path(VertexId anchor, std::uint32_t length) {
        VertexId prev = anchor;
        for (std::uint32_t i = 0; i < length; ++i) {
            const VertexId next = add_vertex();
            link(prev, next);
            prev = next;
        }
    }

    Tree finish() { return Tree::from_edges(n_, std::move(edges_)); }

private:
    std::size_t n_;
    std::size_t cap_;
    std::vector<Edge> edges_;
};

inline void require_kind(const GrowthSpec& spec, GrowthKind kind) {
    spec.validate();
    if (spec.kind != kind)
        throw InvalidArgument("growth spec kind is " + to_string(spec.kind) + ", expected " + to_string(kind));
}

}  // namespace detail

/// Operation I (VUGM). Every vertex receives mu pendant paths; each path's
/// vertex count is an independent draw from m_dist. Draw order: vertex id,
/// then path index. Original vertices keep their ids.
template <LengthSampler Sampler>
Tree apply_vugm(const Tree& tree, const GrowthSpec& spec, Sampler& sampler, std::size_t max_vertices = kNoVertexCap) {
    detail::require_kind(spec, GrowthKind::vugm);
    detail::TreeBuilder out(tree.size(), max_vertices);
    for (const auto& e : tree.edges()) out.link(e.u, e.v);
    for (std::size_t v = 0; v < tree.size(); ++v)
        for (unsigned j = 0; j < spec.mu; ++j) out.attach_path(static_cast<VertexId>(v), sampler.draw(spec.m_dist));
    return out.finish();
}

/// Operation II (EUGM). Each edge is subdivided by m new vertices, with one m
/// drawn per edge; each inserted vertex then receives nu pendant paths
/// (tentacles) whose lengths are independent draws from n_dist. Draw order
/// per edge, in edge-list order: m, then the tentacles of each inserted
/// vertex from the u end.
template <LengthSampler Sampler>
Tree apply_eugm(const Tree& tree, const GrowthSpec& spec, Sampler& sampler, std::size_t max_vertices = kNoVertexCap) {
    detail::require_kind(spec, GrowthKind::eugm);
    detail::TreeBuilder out(tree.size(), max_vertices);
    for (const auto& e : tree.edges()) {
        const std::uint32_t inserted = sampler.draw(spec.m_dist);
        VertexId prev = e.u;
        for (std::uint32_t k = 0; k < inserted; ++k) {
            const VertexId w = out.add_vertex();
            out.link(prev, w);
            for (unsigned j = 0; j < spec.nu; ++j) out.attach_path(w, sampler.draw(spec.n_dist));
            prev = w;
        }
        out.link(prev, e.v);
    }
    return out.finish();
}

/// Operation III (MUGM). Requires max degree <= mu. Edge {u, v} is
/// subdivided by m_u + m_v new vertices (one independent draw per endpoint,
/// the m_u block adjacent to u); then each original vertex of degree k < mu
/// receives mu - k pendant paths with independently drawn lengths. Every
/// original vertex ends with degree mu, so the result is again eligible.
template <LengthSampler Sampler>
Tree apply_mugm(const Tree& tree, const GrowthSpec& spec, Sampler& sampler, std::size_t max_vertices = kNoVertexCap) {
    detail::require_kind(spec, GrowthKind::mugm);
    if (tree.max_degree() > spec.mu)
        throw InvalidArgument("MUGM needs max degree <= mu (max degree " + std::to_string(tree.max_degree()) +
                              ", mu " + std::to_string(spec.mu) + ")");
    detail::TreeBuilder out(tree.size(), max_vertices);
    for (const auto& e : tree.edges()) {
        const std::uint32_t near_u = sampler.draw(spec.m_dist);
        const std::uint32_t near_v = sampler.draw(spec.m_dist);
        VertexId prev = e.u;
        for (std::uint32_t k = 0; k < near_u + near_v; ++k) {
            const VertexId w = out.add_vertex();
            out.link(prev, w);
            prev = w;
        }
        out.link(prev, e.v);
    }
    for (std::size_t v = 0; v < tree.size(); ++v) {
        const auto deg = tree.degree(static_cast<VertexId>(v));
        for (std::size_t j = deg; j < spec.mu; ++j) out.attach_path(static_cast<VertexId>(v), sampler.draw(spec.m_dist));
    }
    return out.finish();
}

template <LengthSampler Sampler>
Tree apply_operation(const Tree& tree, const GrowthSpec& spec, Sampler& sampler,
                     std::size_t max_vertices = kNoVertexCap) {
    switch (spec.kind) {
        case GrowthKind::vugm: return apply_vugm(tree, spec, sampler, max_vertices);
        case GrowthKind::eugm: return apply_eugm(tree, spec, sampler, max_vertices);
        case GrowthKind::mugm: return apply_mugm(tree, spec, sampler, max_vertices);
    }
    throw InvalidArgument("unknown growth kind");
}

/// Applies the spec's operation t times starting from `seed`.
template <LengthSampler Sampler>
Tree grow(const Tree& seed, const GrowthSpec& spec, unsigned t, Sampler& sampler,
          std::size_t max_vertices = kNoVertexCap) {
    spec.validate();
    if (spec.kind == GrowthKind::mugm && seed.max_degree() > spec.mu)
        throw InvalidArgument("MUGM seed has max degree " + std::to_string(seed.max_degree()) + " > mu");
    if (seed.size() > max_vertices) throw ResourceLimit("seed exceeds the vertex cap");
    Tree current = seed;
    for (unsigned step = 0; step < t; ++step) current = apply_operation(current, spec, sampler, max_vertices);
    return current;
}

inline Tree grow(const Tree& seed, const GrowthSpec& spec, unsigned t, RngStream& rng,
                 std::size_t max_vertices = kNoVertexCap) {
    RandomSampler sampler(rng);
    return grow(seed, spec, t, sampler, max_vertices);
}

// ---------------------------------------------------------------------------
// Presets

struct PresetParams {
    std::optional<unsigned> mu;
    std::optional<unsigned> nu;
    std::optional<unsigned> m;
};

struct Preset {
    Tree seed;
    GrowthSpec spec;
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::string params;
};

inline std::vector<PresetInfo> preset_catalog() {
    return {
        {"y1", "deterministic uniform growth tree: edge seed, VUGM with mu leaves per vertex", "mu (default 1)"},
        {"t-graph", "T-graph: edge seed, EUGM with one inserted vertex and one unit tentacle", ""},
        {"vicsek", "Vicsek fractal: star S_mu seed, MUGM with unit insertions", "mu >= 2 (default 2)"},
        {"nu-fractal", "nu-fractal tree: edge seed, EUGM with nu unit tentacles", "nu >= 1 (default 1)"},
        {"subdivision", "m-th order subdivision: edge seed, EUGM with m insertions and no tentacles",
         "m >= 1 (default 1)"},
    };
}

inline Preset preset(const std::string& name, const PresetParams& params = {}) {
    auto reject_unused = [&](bool mu_ok, bool nu_ok, bool m_ok) {
        if (params.mu && !mu_ok) throw InvalidArgument("preset \"" + name + "\" takes no mu parameter");
        if (params.nu && !nu_ok) throw InvalidArgument("preset \"" + name + "\" takes no nu parameter");
        if (params.m && !m_ok) throw InvalidArgument("preset \"" + name + "\" takes no m parameter");
    };
    const auto unit = LengthDistribution::constant(1);
    if (name == "y1") {
        reject_unused(true, false, false);
        const unsigned mu = params.mu.value_or(1);
        if (mu < 1) throw InvalidArgument("y1 needs mu >= 1");
        return {edge_tree(), {GrowthKind::vugm, mu, 0, unit, {}}};
    }
    if (name == "t-graph") {
        reject_unused(false, false, false);
        return {edge_tree(), {GrowthKind::eugm, 1, 1, unit, unit}};
    }
    if (name == "vicsek") {
        reject_unused(true, false, false);
        const unsigned mu = params.mu.value_or(2);
        if (mu < 2) throw InvalidArgument("vicsek needs mu >= 2");
        return {star_tree(mu), {GrowthKind::mugm, mu, 0, unit, {}}};
    }
    if (name == "nu-fractal") {
        reject_unused(false, true, false);
        const unsigned nu = params.nu.value_or(1);
        if (nu < 1) throw InvalidArgument("nu-fractal needs nu >= 1");
        return {edge_tree(), {GrowthKind::eugm, 1, nu, unit, unit}};
    }
    if (name == "subdivision") {
        reject_unused(false, false, true);
        const unsigned m = params.m.value_or(1);
        if (m < 1) throw InvalidArgument("subdivision needs m >= 1");
        return {edge_tree(), {GrowthKind::eugm, 1, 0, LengthDistribution::constant(m), {}}};
    }
    throw InvalidArgument("unknown preset \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const LengthDistribution& d) {
    return {{"values", d.values()}, {"probs", d.probs()}};
}

inline LengthDistribution length_distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("length distribution must be a JSON object");
    std::vector<std::uint32_t> values;
    std::vector<double> probs;
    try {
        for (const auto& v : j.value("values", nlohmann::json::array())) {
            if (!v.is_number_integer() || v.get<long long>() < 1)
                throw InvalidArgument("length values must be integers >= 1");
            values.push_back(v.get<std::uint32_t>());
        }
        probs = j.value("probs", std::vector<double>{});
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad length distribution: ") + e.what());
    }
    return {std::move(values), std::move(probs)};
}

inline nlohmann::json to_json(const GrowthSpec& spec) {
    return {{"kind", to_string(spec.kind)},
            {"mu", spec.mu},
            {"nu", spec.nu},
            {"m", to_json(spec.m_dist)},
            {"n", to_json(spec.n_dist)}};
}

inline GrowthSpec growth_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("m"))
        throw InvalidArgument("growth spec JSON needs at least \"kind\" and \"m\"");
    GrowthSpec spec;
    try {
        spec.kind = growth_kind_from_string(j.at("kind").get<std::string>());
        const auto mu = j.value("mu", 1LL);
        const auto nu = j.value("nu", 0LL);
        if (mu < 0 || nu < 0) throw InvalidArgument("mu and nu must be nonnegative");
        spec.mu = static_cast<unsigned>(mu);
        spec.nu = static_cast<unsigned>(nu);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad growth spec: ") + e.what());
    }
    spec.m_dist = length_distribution_from_json(j.at("m"));
    if (j.contains("n")) spec.n_dist = length_distribution_from_json(j.at("n"));
    spec.validate();
    return spec;
}

}  // namespace grovetree
