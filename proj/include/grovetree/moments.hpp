#pragma once

#include <grovetree/growth.hpp>

namespace grovetree {

/// Expectations of the length functionals that recur in every closed form.
/// For a length X:
///   e1  = E[X]
///   eb  = E[C(X+1, 2)]
///   ei  = E[sum_{l=2..X} C(l, 2)] = E[C(X+1, 3)]
///   e2  = E[X^2]
///   ebm = E[C(X, 2)]
/// An empty distribution yields all zeros.
template <class Real>
struct MomentTable {
    Real e1{0};
    Real eb{0};
    Real ei{0};
    Real e2{0};
    Real ebm{0};

    /// E[X (X - 1)].
    Real falling2() const { return e2 - e1; }
};

template <class Real>
MomentTable<Real> moments(const LengthDistribution& d) {
    MomentTable<Real> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Real p(d.probs()[i]);
        const Real x(d.values()[i]);
        out.e1 += p * x;
        out.eb += p * (x * (x + 1) / 2);
        out.ei += p * ((x + 1) * x * (x - 1) / 6);
        out.e2 += p * (x * x);
        out.ebm += p * (x * (x - 1) / 2);
    }
    return out;
}

}  // namespace grovetree
