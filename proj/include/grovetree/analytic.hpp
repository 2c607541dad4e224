#pragma once

#include <grovetree/growth.hpp>
#include <grovetree/moments.hpp>
#include <grovetree/tree_metrics.hpp>
#include <grovetree/wide_int.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace grovetree {

/// Exact rational scalar for the closed forms (expression templates off so
/// `auto` behaves like it does for double).
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

namespace detail {

template <class Real>
Real power(const Real& base, long exponent) {
    if (exponent < 0) return Real(1) / power(base, -exponent);
    Real result(1);
    Real b = base;
    for (auto e = static_cast<unsigned long>(exponent); e != 0; e >>= 1) {
        if (e & 1u) result *= b;
        if (e > 1) b *= b;
    }
    return result;
}

template <class Real>
Real from_int128(Int128 value) {
    if constexpr (std::is_floating_point_v<Real>) {
        return static_cast<Real>(value);
    } else {
        const bool negative = value < 0;
        const auto mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                  : static_cast<unsigned __int128>(value);
        Real out = Real(static_cast<std::uint64_t>(mag >> 64)) * power(Real(2), 64) +
                   Real(static_cast<std::uint64_t>(mag));
        return negative ? -out : out;
    }
}

template <class Real>
Real choose2(const Real& x) {
    return x * (x - 1) / 2;
}

}  // namespace detail

/// What the closed forms need to know about a seed tree: its order h and Wiener index.
struct SeedSummary {
    std::size_t h = 1;
    Int128 w = 0;

    void validate() const {
        if (h < 1) throw InvalidArgument("seed summary: h must be >= 1");
        if (w < 0) throw InvalidArgument("seed summary: W must be >= 0");
        if ((w == 0) != (h == 1)) throw InvalidArgument("seed summary: W = 0 exactly when h = 1");
    }

    static SeedSummary of(const Tree& tree) { return {tree.size(), wiener_fast(tree)}; }
};

// ===========================================================================
// Family I: VUGM

/// One-step W-polynomial with its four contributions:
///   case1  pairs of original vertices
///   case2  an original vertex with its own new paths (and pairs inside them)
///   case3  an original vertex with another vertex's new paths
///   case4  new vertices hanging from two different original vertices
/// total = a W + b h^2 + c h.
template <class Real>
struct WPolyI {
    Real total, case1, case2, case3, case4;
    Real a, b, c;
};

template <class Real>
WPolyI<Real> w_poly_I(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    const Real h(seed.h);
    const Real mu_r(mu);
    const Real r = 1 + mu_r * m.e1;
    const Real pairs_h = detail::choose2(h);
    const Real pairs_mu = detail::choose2(mu_r);

    WPolyI<Real> out;
    out.case1 = W;
    out.case2 = h * (mu_r * m.eb + 2 * m.e1 * pairs_mu * m.eb + mu_r * m.ei);
    out.case3 = 2 * mu_r * (pairs_h * m.eb + m.e1 * W);
    out.case4 = (mu_r * m.e1) * (mu_r * m.e1) * W + 2 * mu_r * m.e1 * pairs_h * (mu_r * m.eb);
    out.a = r * r;
    out.b = mu_r * r * m.eb;
    out.c = mu_r * m.ei + (2 * m.e1 * pairs_mu - mu_r * mu_r * m.e1) * m.eb;
    out.total = out.a * W + out.b * h * h + out.c * h;
    return out;
}

template <class Real>
Real vertices_I(std::size_t h, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    return Real(h) * detail::power(Real(1 + Real(mu) * m.e1), t);
}

/// Expected Wiener index after t VUGM steps (the W-polynomial iterated in closed form).
template <class Real>
Real wiener_I(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    if (t == 0) return W;
    const Real h(seed.h);
    const Real mu_r(mu);
    const Real r = 1 + mu_r * m.e1;
    const long ti = t;
    const Real c = w_poly_I(seed, mu, m).c;
    const Real phi1 = (detail::power(r, 2 * ti - 1) - detail::power(r, ti - 1)) / (mu_r * m.e1);
    return W * detail::power(r, 2 * ti) + mu_r * Real(ti) * h * h * m.eb * detail::power(r, 2 * ti - 1) + h * c * phi1;
}

/// Expected mean first-passage time after t VUGM steps, in closed form.
template <class Real>
Real mfpt_I(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    const Real h(seed.h);
    if (t == 0) return 2 * W / h;
    const Real mu_r(mu);
    const Real r = 1 + mu_r * m.e1;
    const long ti = t;
    const Real c = w_poly_I(seed, mu, m).c;
    const Real phi2 = (detail::power(r, ti - 1) - detail::power(r, -1)) / (mu_r * m.e1);
    return 2 * W / h * detail::power(r, ti) + 2 * mu_r * Real(ti) * h * m.eb * detail::power(r, ti - 1) +
           2 * c * phi2;
}

/// MFPT of the deterministic uniform growth tree Y_I(t) grown from an edge.
template <class Real>
Real corollary8_y1(unsigned mu, unsigned t) {
    const Real mu_r(mu);
    return (4 * mu_r * Real(t) + mu_r - 1) * detail::power(Real(1 + mu_r), static_cast<long>(t) - 1) +
           Real(2) / (1 + mu_r);
}

/// Scaling coefficient Theta_I = mu t E[m(m-1)] / (1 + mu E[m]).
inline double theta_I(unsigned mu, const MomentTable<double>& m, unsigned t) {
    return mu * static_cast<double>(t) * m.falling2() / (1.0 + mu * m.e1);
}

/// Slope of MFPT / n against t for large t, read off the leading term of mfpt_I:
/// 2 mu E[C(m+1, 2)] / (1 + mu E[m]).
inline double mfpt_per_vertex_slope_I(unsigned mu, const MomentTable<double>& m) {
    return 2.0 * mu * m.eb / (1.0 + mu * m.e1);
}

// ===========================================================================
// Family II: EUGM

/// Coefficient symbols of the EUGM closed forms.
///   phi1 = E[m] (nu E[n] + 1)          new vertices per seed edge
///   phi2 = per-edge within-edge distance sum (coefficient of h - 1)
///   phi3 = E[C(m+1,2)] (nu E[n] + 1) + E[m] nu E[C(n+1,2)]
///   phi4 = E[m] + 1                    stretch of one seed edge
///   psi1..psi3: coefficients of h^2, h, 1 in the W-polynomial; they sum to zero.
template <class Real>
struct PhiPsiII {
    Real phi1, phi2, phi3, phi4;
    Real psi1, psi2, psi3;
};

template <class Real>
PhiPsiII<Real> phi_psi_II(unsigned nu, const MomentTable<Real>& m, const MomentTable<Real>& n) {
    const Real nu_r(nu);
    const Real cluster = nu_r * n.e1 + 1;
    PhiPsiII<Real> s;
    s.phi1 = m.e1 * cluster;
    s.phi4 = m.e1 + 1;
    s.phi3 = m.eb * cluster + m.e1 * nu_r * n.eb;
    s.phi2 = m.ei * cluster * cluster + m.e2 * (nu_r * n.eb) +
             (m.e1 * detail::choose2(nu_r) + nu_r * nu_r * m.ebm) * (2 * n.e1 * n.eb) + m.e1 * (nu_r * n.ei);
    const Real& p1 = s.phi1;
    const Real& p2 = s.phi2;
    const Real& p3 = s.phi3;
    const Real& p4 = s.phi4;
    s.psi1 = p1 * p3 - p4 * p1 * p1 - p4 * p1 + p3;
    s.psi2 = 2 * p4 * p1 * p1 - 3 * p1 * p3 + p4 * p1 + p2 - p3;
    s.psi3 = 2 * p1 * p3 - p4 * p1 * p1 - p2;
    return s;
}

/// One-step W-polynomial for EUGM: total = a W + b h^2 + c h + d.
///   case1  pairs of original vertices
///   case2  pairs inside the material added to one seed edge
///   case3  an original vertex with material added to any seed edge
///   case4  material added to two different seed edges
template <class Real>
struct WPolyII {
    Real total, case1, case2, case3, case4;
    Real a, b, c, d;
    PhiPsiII<Real> symbols;
};

template <class Real>
WPolyII<Real> w_poly_II(const SeedSummary& seed, unsigned nu, const MomentTable<Real>& m,
                        const MomentTable<Real>& n) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    const Real h(seed.h);
    const auto s = phi_psi_II(nu, m, n);
    const Real pairs_h = detail::choose2(h);
    const Real pairs_edges = detail::choose2(Real(h - 1));
    const Real w_orig = W * s.phi4;

    WPolyII<Real> out;
    out.symbols = s;
    out.case1 = w_orig;
    out.case2 = (h - 1) * s.phi2;
    out.case3 = 2 * w_orig * s.phi1 - 2 * pairs_h * s.phi4 * s.phi1 + 2 * pairs_h * s.phi3;
    out.case4 = (w_orig - (h - 1) * s.phi4) * s.phi1 * s.phi1 - 2 * s.phi4 * s.phi1 * s.phi1 * pairs_edges +
                2 * s.phi1 * s.phi3 * pairs_edges;
    out.a = s.phi4 * (s.phi1 + 1) * (s.phi1 + 1);
    out.b = s.psi1;
    out.c = s.psi2;
    out.d = s.psi3;
    out.total = out.a * W + out.b * h * h + out.c * h + out.d;
    return out;
}

template <class Real>
Real vertices_II(std::size_t h, unsigned nu, const MomentTable<Real>& m, const MomentTable<Real>& n, unsigned t) {
    const Real growth = 1 + m.e1 + m.e1 * Real(nu) * n.e1;
    return Real(h - 1) * detail::power(growth, t) + 1;
}

/// Expected Wiener index after t EUGM steps.
template <class Real>
Real wiener_II(const SeedSummary& seed, unsigned nu, const MomentTable<Real>& m, const MomentTable<Real>& n,
               unsigned t) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    if (t == 0) return W;
    const Real hm1(seed.h - 1);
    const auto s = phi_psi_II(nu, m, n);
    const long ti = t;
    const Real spread = 1 + s.phi1;
    const Real a = s.phi4 * spread * spread;
    const Real mid = s.phi4 * spread;
    // Every ratio below is a finite geometric sum: phi4 >= 2, so each base exceeds 1.
    return W * detail::power(a, ti) + (s.psi1 + s.psi2 + s.psi3) * (detail::power(a, ti) - 1) / (a - 1) +
           hm1 * (2 * s.psi1 + s.psi2) * detail::power(spread, ti - 1) * (detail::power(mid, ti) - 1) / (mid - 1) +
           s.psi1 * hm1 * hm1 * detail::power(spread, 2 * (ti - 1)) * (detail::power(s.phi4, ti) - 1) / (s.phi4 - 1);
}

/// Expected MFPT after t EUGM steps, as 2 W / n of the expectations.
template <class Real>
Real mfpt_II(const SeedSummary& seed, unsigned nu, const MomentTable<Real>& m, const MomentTable<Real>& n,
             unsigned t) {
    return 2 * wiener_II(seed, nu, m, n, t) / vertices_II(seed.h, nu, m, n, t);
}

/// Wiener index of the m-th order subdivision of a tree with h vertices and Wiener index W.
inline Int128 corollary11_subdivision(const SeedSummary& seed, unsigned m) {
    seed.validate();
    if (m < 1) throw InvalidArgument("subdivision order must be >= 1");
    const Int128 mm = m;
    const Int128 h = static_cast<Int128>(seed.h);
    const Int128 inner = (mm + 1) * mm * (mm - 1) / 6;  // sum_{l=2..m} C(l, 2)
    const Int128 half = mm * (mm + 1) * (mm + 1) / 2;
    Int128 w = checked_mul(checked_mul(checked_mul(mm + 1, mm + 1), mm + 1), seed.w);
    w = checked_sub(w, checked_mul(half, checked_mul(h, h)));
    w = checked_add(w, checked_mul(half + inner, h));
    return checked_sub(w, inner);
}

/// MFPT of the T-graph after t steps.
template <class Real>
Real corollary13_tgraph(unsigned t) {
    const Real p18 = detail::power(Real(18), t);
    const Real p9 = detail::power(Real(9), t);
    const Real p3 = detail::power(Real(3), t);
    return Real(2) / (p3 + 1) * (p18 - 2 * (p18 - p3) / 5 - (p18 - p9) / 3);
}

/// MFPT of the nu-fractal tree after t steps (edge seed, unit insertions, nu unit tentacles).
template <class Real>
Real nu_fractal_mfpt(unsigned nu, unsigned t) {
    const Real v(nu);
    const long ti = t;
    const Real lead = detail::power(Real(2 * (v + 2) * (v + 2)), ti);
    const Real middle = (v + 1) * detail::power(Real(v + 2), ti) * (detail::power(Real(2 * v + 4), ti) - 1) / (2 * v + 3);
    const Real tail = detail::power(Real(v + 2), 2 * ti - 1) * (detail::power(Real(2), ti) - 1);
    return Real(2) / (detail::power(Real(v + 2), ti) + 1) * (lead - middle - tail);
}

inline double theta_II(unsigned nu, const MomentTable<double>& m, const MomentTable<double>& n) {
    const double phi1 = m.e1 * (nu * n.e1 + 1.0);
    return 1.0 + std::log(m.e1 + 1.0) / std::log(1.0 + phi1);
}

inline double spectral_dim_II(unsigned nu, const MomentTable<double>& m, const MomentTable<double>& n) {
    const double grow = std::log(1.0 + m.e1 * (nu * n.e1 + 1.0));
    return 2.0 * grow / (std::log(m.e1 + 1.0) + grow);
}

// ===========================================================================
// Family III: MUGM

/// One-step W-polynomial for MUGM: total = a W + b h^2 + c h.
///   case1  pairs of original vertices
///   case2  an original vertex with its own star-like attachment
///   case3  an original vertex with another vertex's attachment
///   case4  attachments of two different original vertices
template <class Real>
struct WPolyIII {
    Real total, case1, case2, case3, case4;
    Real a, b, c;
};

template <class Real>
WPolyIII<Real> w_poly_III(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    const Real h(seed.h);
    const Real mu_r(mu);
    const Real r = mu_r * m.e1 + 1;
    const Real s = 2 * m.e1 + 1;
    const Real pairs_h = detail::choose2(h);
    const Real w_orig = W * s;

    WPolyIII<Real> out;
    out.case1 = w_orig;
    out.case2 = h * (mu_r * m.eb + 2 * m.e1 * detail::choose2(mu_r) * m.eb + mu_r * m.ei);
    out.case3 = 2 * w_orig * mu_r * m.e1 + 2 * (mu_r - 2) * pairs_h * m.eb;
    out.case4 = w_orig * (mu_r * m.e1) * (mu_r * m.e1) + 2 * (mu_r * mu_r - 2 * mu_r) * m.e1 * pairs_h * m.eb;
    out.a = s * r * r;
    out.b = (mu_r - 2) * r * m.eb;
    out.c = (mu_r * m.e1 + 2) * m.eb + mu_r * m.ei;
    out.total = out.a * W + out.b * h * h + out.c * h;
    return out;
}

template <class Real>
Real vertices_III(std::size_t h, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    return vertices_I(h, mu, m, t);
}

template <class Real>
Real wiener_III(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    if (t == 0) return W;
    const Real h(seed.h);
    const Real mu_r(mu);
    const Real r = mu_r * m.e1 + 1;
    const Real s = 2 * m.e1 + 1;
    const long ti = t;
    const Real phi1 = (detail::power(s, ti) - 1) / (2 * m.e1);
    const Real phi2 = (detail::power(Real(r * s), ti) - 1) / (r * s - 1);
    const Real c = w_poly_III(seed, mu, m).c;
    return W * detail::power(s, ti) * detail::power(r, 2 * ti) +
           (mu_r - 2) * h * h * m.eb * detail::power(r, 2 * ti - 1) * phi1 + h * c * detail::power(r, ti - 1) * phi2;
}

template <class Real>
Real mfpt_III(const SeedSummary& seed, unsigned mu, const MomentTable<Real>& m, unsigned t) {
    seed.validate();
    const Real W = detail::from_int128<Real>(seed.w);
    const Real h(seed.h);
    if (t == 0) return 2 * W / h;
    const Real mu_r(mu);
    const Real r = mu_r * m.e1 + 1;
    const Real s = 2 * m.e1 + 1;
    const long ti = t;
    const Real phi1 = (detail::power(s, ti) - 1) / (2 * m.e1);
    const Real phi2 = (detail::power(Real(r * s), ti) - 1) / (r * s - 1);
    const Real c = w_poly_III(seed, mu, m).c;
    return 2 * W / h * detail::power(s, ti) * detail::power(r, ti) +
           2 * (mu_r - 2) * h * m.eb * detail::power(r, ti - 1) * phi1 + 2 * c * detail::power(r, -1) * phi2;
}

/// MFPT of the Vicsek fractal V_1^mu(t) (star seed, unit insertions).
template <class Real>
Real corollary17_vicsek(unsigned mu, unsigned t) {
    const Real u(mu);
    const long ti = t;
    return 2 * u * u / (u + 1) * detail::power(Real(3 * u + 3), ti) +
           (u - 2) * detail::power(Real(u + 1), ti) * (detail::power(Real(3), ti) - 1) +
           (2 * u + 4) * (detail::power(Real(3 * (u + 1)), ti) - 1) / ((u + 1) * (3 * u + 2));
}

inline double theta_III(unsigned mu, const MomentTable<double>& m) {
    return 1.0 + std::log(2.0 * m.e1 + 1.0) / std::log(mu * m.e1 + 1.0);
}

inline double spectral_dim_III(unsigned mu, const MomentTable<double>& m) {
    const double grow = std::log(mu * m.e1 + 1.0);
    return 2.0 * grow / (grow + std::log(2.0 * m.e1 + 1.0));
}

// ===========================================================================
// Asymptotics and reports

/// Growth class of the expected network criticality as t grows.
struct CriticalityAsymptotics {
    std::string growth_class;         ///< "O(t)" or "power-law"
    std::optional<double> exponent;   ///< exponent of n for the power-law classes
};

inline CriticalityAsymptotics criticality_asymptotics(const GrowthSpec& spec) {
    spec.validate();
    const auto m = moments<double>(spec.m_dist);
    switch (spec.kind) {
        case GrowthKind::vugm: return {"O(t)", std::nullopt};
        case GrowthKind::eugm: return {"power-law", theta_II(spec.nu, m, moments<double>(spec.n_dist)) - 1.0};
        case GrowthKind::mugm: return {"power-law", theta_III(spec.mu, m) - 1.0};
    }
    throw InvalidArgument("unknown growth kind");
}

/// Predicted expected quantities at step t.
struct AnalyticReport {
    int family = 1;
    unsigned t = 0;
    double expected_n = 0;
    double expected_w = 0;
    double expected_mfpt = 0;
    double expected_kirchhoff = 0;
    double expected_criticality = 0;  ///< NaN when expected_n <= 1
    double theta = 0;
    std::optional<double> spectral_dimension;
};

template <class Real>
struct Prediction {
    Real n, w, mfpt;
};

/// Expected n, W and MFPT for any spec, in the requested scalar type.
template <class Real>
Prediction<Real> predict_exact(const SeedSummary& seed, const GrowthSpec& spec, unsigned t) {
    spec.validate();
    seed.validate();
    const auto m = moments<Real>(spec.m_dist);
    switch (spec.kind) {
        case GrowthKind::vugm:
            return {vertices_I(seed.h, spec.mu, m, t), wiener_I(seed, spec.mu, m, t), mfpt_I(seed, spec.mu, m, t)};
        case GrowthKind::eugm: {
            const auto n = moments<Real>(spec.n_dist);
            return {vertices_II(seed.h, spec.nu, m, n, t), wiener_II(seed, spec.nu, m, n, t),
                    mfpt_II(seed, spec.nu, m, n, t)};
        }
        case GrowthKind::mugm:
            if (spec.mu < 2) throw InvalidArgument("MUGM needs mu >= 2");
            return {vertices_III(seed.h, spec.mu, m, t), wiener_III(seed, spec.mu, m, t),
                    mfpt_III(seed, spec.mu, m, t)};
    }
    throw InvalidArgument("unknown growth kind");
}

inline AnalyticReport predict(const SeedSummary& seed, const GrowthSpec& spec, unsigned t) {
    const auto p = predict_exact<double>(seed, spec, t);
    AnalyticReport r;
    r.family = family_of(spec.kind);
    r.t = t;
    r.expected_n = p.n;
    r.expected_w = p.w;
    r.expected_mfpt = p.mfpt;
    r.expected_kirchhoff = 2.0 * p.w;
    r.expected_criticality =
        p.n > 1.0 ? r.expected_kirchhoff / (p.n * (p.n - 1.0)) : std::numeric_limits<double>::quiet_NaN();
    const auto m = moments<double>(spec.m_dist);
    switch (spec.kind) {
        case GrowthKind::vugm: r.theta = theta_I(spec.mu, m, t); break;
        case GrowthKind::eugm: {
            const auto n = moments<double>(spec.n_dist);
            r.theta = theta_II(spec.nu, m, n);
            r.spectral_dimension = spectral_dim_II(spec.nu, m, n);
            break;
        }
        case GrowthKind::mugm:
            r.theta = theta_III(spec.mu, m);
            r.spectral_dimension = spectral_dim_III(spec.mu, m);
            break;
    }
    return r;
}

inline nlohmann::json to_json(const AnalyticReport& r) {
    auto number = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    return {{"family", r.family},
            {"t", r.t},
            {"expected_n", number(r.expected_n)},
            {"expected_w", number(r.expected_w)},
            {"expected_mfpt", number(r.expected_mfpt)},
            {"expected_kirchhoff", number(r.expected_kirchhoff)},
            {"expected_criticality", number(r.expected_criticality)},
            {"theta", number(r.theta)},
            {"spectral_dimension", r.spectral_dimension ? number(*r.spectral_dimension) : nlohmann::json(nullptr)}};
}

inline constexpr const char* kAnalyticCsvHeader = "family,t,n,w,mfpt,kirchhoff,criticality,theta";

}  // namespace grovetree
