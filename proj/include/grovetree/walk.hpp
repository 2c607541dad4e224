#pragma once

#include <grovetree/errors.hpp>
#include <grovetree/parallel.hpp>
#include <grovetree/rng.hpp>
#include <grovetree/tree.hpp>
#include <grovetree/tree_metrics.hpp>
#include <grovetree/wide_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <vector>

namespace grovetree {

// ===========================================================================
// Hitting times by linear solve

/// Expected first-passage times between every ordered pair of vertices.
class HittingTable {
public:
    explicit HittingTable(std::size_t n) : n_(n), f_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(VertexId source, VertexId target) const { return f_[source * n_ + target]; }
    double& at(VertexId source, VertexId target) { return f_[source * n_ + target]; }

    /// Average over ordered pairs of distinct vertices.
    double mean() const {
        if (n_ < 2) throw InvalidArgument("mean first-passage time needs at least two vertices");
        const double total = std::accumulate(f_.begin(), f_.end(), 0.0);
        return total / (static_cast<double>(n_) * static_cast<double>(n_ - 1));
    }

    void write_csv(std::ostream& out) const {
        out << "source,target,fpt\n";
        out.precision(17);
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = 0; v < n_; ++v) out << u << ',' << v << ',' << f_[u * n_ + v] << '\n';
    }

private:
    std::size_t n_;
    std::vector<double> f_;
};

inline constexpr std::size_t kSolverMaxN = 3000;

/// Solves, for every target v, the system k_u f(u) - sum_{w ~ u, w != v} f(w) = k_u (u != v).
///
/// Dense Gaussian elimination with partial pivoting, one factorization per target. Unknowns
/// are ordered farthest-from-target first and zero multipliers are skipped, which keeps the
/// elimination cheap on sparse rows without changing the arithmetic.
inline HittingTable hitting_times_solve(const Tree& tree, std::size_t max_n = kSolverMaxN) {
    const std::size_t n = tree.size();
    if (n < 2) throw InvalidArgument("hitting times need at least two vertices");
    if (n > max_n) throw ResourceLimit("tree too large for the linear-solve oracle");
    HittingTable table(n);
    const std::size_t dim = n - 1;
    std::vector<double> a(dim * dim);
    std::vector<double> rhs(dim);
    std::vector<std::size_t> slot(n);
    std::vector<VertexId> order(n);

    for (VertexId target = 0; target < n; ++target) {
        const auto dist = distances_from(tree, target);
        std::iota(order.begin(), order.end(), VertexId{0});
        std::stable_sort(order.begin(), order.end(), [&](VertexId x, VertexId y) { return dist[x] > dist[y]; });
        // order.back() is the target itself (distance 0).
        for (std::size_t i = 0; i < dim; ++i) slot[order[i]] = i;

        std::fill(a.begin(), a.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            const VertexId u = order[i];
            const double k = static_cast<double>(tree.degree(u));
            a[i * dim + i] = k;
            rhs[i] = k;
            for (VertexId w : tree.neighbors(u))
                if (w != target) a[i * dim + slot[w]] -= 1.0;
        }

        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t pivot = col;
            double best = std::abs(a[col * dim + col]);
            for (std::size_t r = col + 1; r < dim; ++r) {
                const double mag = std::abs(a[r * dim + col]);
                if (mag > best) {
                    best = mag;
                    pivot = r;
                }
            }
            if (best == 0.0) throw NumericalError("singular hitting-time system");
            if (pivot != col) {
                std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(col * dim),
                                 a.begin() + static_cast<std::ptrdiff_t>((col + 1) * dim),
                                 a.begin() + static_cast<std::ptrdiff_t>(pivot * dim));
                std::swap(rhs[col], rhs[pivot]);
            }
            const double* prow = &a[col * dim];
            for (std::size_t r = col + 1; r < dim; ++r) {
                double* row = &a[r * dim];
                if (row[col] == 0.0) continue;
                const double factor = row[col] / prow[col];
                row[col] = 0.0;
                for (std::size_t j = col + 1; j < dim; ++j)
                    if (prow[j] != 0.0) row[j] -= factor * prow[j];
                rhs[r] -= factor * rhs[col];
            }
        }
        for (std::size_t i = dim; i-- > 0;) {
            double acc = rhs[i];
            const double* row = &a[i * dim];
            for (std::size_t j = i + 1; j < dim; ++j)
                if (row[j] != 0.0) acc -= row[j] * rhs[j];
            rhs[i] = acc / row[i];
        }

        for (std::size_t i = 0; i < dim; ++i) table.at(order[i], target) = rhs[i];
        for (std::size_t i = 0; i < dim; ++i) {
            const VertexId u = order[i];
            double residual = static_cast<double>(tree.degree(u)) * (rhs[i] - 1.0);
            for (VertexId w : tree.neighbors(u))
                if (w != target) residual -= rhs[slot[w]];
            if (std::abs(residual) > 1e-9 * std::max(1.0, std::abs(rhs[i])))
                throw NumericalError("hitting-time solve residual too large");
        }
    }
    return table;
}

// ===========================================================================
// Exact tree identities

/// F(u -> v) for adjacent u, v: twice the edge count on u's side, plus one.
inline std::uint64_t fpt_adjacent(const SplitSizes& split, VertexId u, VertexId v) {
    return 2 * (static_cast<std::uint64_t>(split.component_size(v, u)) - 1) + 1;
}

inline std::uint64_t fpt_adjacent(const Tree& tree, VertexId u, VertexId v) {
    return fpt_adjacent(SplitSizes(tree), u, v);
}

/// F(u -> v) as the sum of adjacent-step times along the tree path.
inline std::uint64_t fpt_pair(const SplitSizes& split, VertexId u, VertexId v) {
    if (u >= split.size() || v >= split.size()) throw InvalidArgument("vertex out of range");
    std::uint64_t up = 0;    // u climbing toward the meeting point
    std::uint64_t down = 0;  // meeting point descending to v
    while (u != v) {
        if (split.depth(u) >= split.depth(v)) {
            const VertexId p = split.parent(u);
            up += fpt_adjacent(split, u, p);
            u = p;
        } else {
            const VertexId p = split.parent(v);
            down += fpt_adjacent(split, p, v);
            v = p;
        }
    }
    return up + down;
}

inline std::uint64_t fpt_pair(const Tree& tree, VertexId u, VertexId v) { return fpt_pair(SplitSizes(tree), u, v); }

inline std::uint64_t commute_time(const SplitSizes& split, VertexId u, VertexId v) {
    return fpt_pair(split, u, v) + fpt_pair(split, v, u);
}

inline std::uint64_t commute_time(const Tree& tree, VertexId u, VertexId v) {
    return commute_time(SplitSizes(tree), u, v);
}

/// Sum of F(u -> v) over the neighbours u of v.
inline std::uint64_t lemma1_sum(const Tree& tree, const SplitSizes& split, VertexId v) {
    std::uint64_t total = 0;
    for (VertexId u : tree.neighbors(v)) total += fpt_adjacent(split, u, v);
    return total;
}

inline std::uint64_t lemma1_sum(const Tree& tree, VertexId v) { return lemma1_sum(tree, SplitSizes(tree), v); }

/// MFPT as 2W / n.
inline double mfpt_exact(const Tree& tree) {
    if (tree.size() < 2) throw InvalidArgument("mean first-passage time needs at least two vertices");
    return 2.0 * to_double(wiener_fast(tree)) / static_cast<double>(tree.size());
}

/// Recomputes the MFPT from the full hitting-time table and checks it against 2W / n.
inline double mfpt_verified(const Tree& tree, double rel_tol = 1e-9) {
    const double fast = mfpt_exact(tree);
    const double slow = hitting_times_solve(tree).mean();
    if (std::abs(fast - slow) > rel_tol * std::abs(fast))
        throw NumericalError("solver MFPT disagrees with 2W/n");
    return fast;
}

/// Sum of effective resistances over ordered pairs; on a tree resistance is hop distance.
inline Int128 kirchhoff_index(const Tree& tree) { return checked_mul(Int128{2}, wiener_fast(tree)); }

inline double network_criticality(const Tree& tree) {
    if (tree.size() < 2) throw InvalidArgument("network criticality needs at least two vertices");
    const double n = static_cast<double>(tree.size());
    return to_double(kirchhoff_index(tree)) / (n * (n - 1));
}

// ===========================================================================
// Monte Carlo

struct WalkConfig {
    std::uint64_t trials = 100000;
    std::optional<std::uint64_t> max_steps;  ///< default: 100 * n^3 / 3
    std::uint64_t rng_seed = 1;
    std::uint64_t stream_base = 0;
    unsigned threads = 1;
};

struct McEstimate {
    double mean = 0;
    double std_error = 0;
    std::uint64_t trials = 0;
};

inline constexpr std::uint64_t kMcChunk = 4096;

/// Sample mean of the first-passage step count from u to v.
///
/// Trials are split into fixed chunks, each with its own stream, and the chunk
/// sums are combined in index order, so the result is independent of threads.
inline McEstimate monte_carlo_fpt(const Tree& tree, VertexId u, VertexId v, const WalkConfig& config) {
    if (config.trials < 1) throw InvalidArgument("trials must be >= 1");
    if (u >= tree.size() || v >= tree.size()) throw InvalidArgument("vertex out of range");
    const double nd = static_cast<double>(tree.size());
    const std::uint64_t cap =
        config.max_steps ? *config.max_steps
                         : static_cast<std::uint64_t>(std::max(1.0e2, 100.0 * nd * nd * nd / 3.0));
    const std::uint64_t chunks = (config.trials + kMcChunk - 1) / kMcChunk;
    std::vector<long double> sums(chunks, 0.0L);
    std::vector<long double> squares(chunks, 0.0L);

    parallel_for(chunks, config.threads, [&](std::size_t c) {
        RngStream rng(config.rng_seed, config.stream_base + c);
        const std::uint64_t begin = c * kMcChunk;
        const std::uint64_t end = std::min(config.trials, begin + kMcChunk);
        long double s = 0, s2 = 0;
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            VertexId x = u;
            std::uint64_t steps = 0;
            while (x != v) {
                if (steps == cap) throw ResourceLimit("random walk exceeded max_steps");
                const auto nbrs = tree.neighbors(x);
                x = nbrs[nbrs.size() == 1 ? 0 : rng.below(nbrs.size())];
                ++steps;
            }
            const auto d = static_cast<long double>(steps);
            s += d;
            s2 += d * d;
        }
        sums[c] = s;
        squares[c] = s2;
    });

    long double s = 0, s2 = 0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        s += sums[c];
        s2 += squares[c];
    }
    const auto r = static_cast<long double>(config.trials);
    McEstimate est;
    est.trials = config.trials;
    est.mean = static_cast<double>(s / r);
    if (config.trials > 1) {
        const long double var = std::max(0.0L, (s2 - s * s / r) / (r - 1));
        est.std_error = static_cast<double>(std::sqrt(var / r));
    }
    return est;
}

// ===========================================================================
// Laplacian spectrum

struct SpectralCheck {
    std::vector<double> eigenvalues;  ///< ascending
    double mfpt_spectral = 0;
    int sweeps = 0;
};

inline constexpr std::size_t kSpectralMaxN = 400;

/// Eigenvalues of the graph Laplacian by cyclic Jacobi rotations, and 2 * sum_{i >= 2} 1 / lambda_i.
inline SpectralCheck laplacian_eigencheck(const Tree& tree, int max_sweeps = 100) {
    const std::size_t n = tree.size();
    if (n < 2) throw InvalidArgument("spectral check needs at least two vertices");
    if (n > kSpectralMaxN) throw ResourceLimit("tree too large for the Jacobi eigensolver");
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = static_cast<double>(tree.degree(static_cast<VertexId>(i)));
        for (VertexId j : tree.neighbors(static_cast<VertexId>(i))) a[i * n + j] = -1.0;
    }
    double frob = 0;
    for (double x : a) frob += x * x;
    frob = std::sqrt(frob);
    auto off_norm = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };

    SpectralCheck out;
    while (off_norm() >= 1e-12 * frob) {
        if (out.sweeps == max_sweeps) throw NumericalError("Jacobi eigensolver did not converge");
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a[i * n + i];
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    if (std::abs(out.eigenvalues[0]) >= 1e-8) throw NumericalError("Laplacian has no zero eigenvalue");
    double inv = 0;
    for (std::size_t i = 1; i < n; ++i) inv += 1.0 / out.eigenvalues[i];
    out.mfpt_spectral = 2.0 * inv;
    return out;
}

}  // namespace grovetree
