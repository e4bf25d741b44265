#include "endure/design_space.hpp"

#include <algorithm>
#include <cmath>

#include "endure/errors.hpp"

namespace endure {

void require_valid_bounds(const DesignBounds& b, const SystemParams& sys) {
    require_valid_system(sys);
    if (!(b.T_min >= 2.0)) throw InfeasibleBounds("size ratio lower bound must be >= 2");
    if (!(b.T_max >= b.T_min)) throw InfeasibleBounds("empty size ratio interval");
    const double cap = b.filter_cap(sys);
    if (!(b.m_filt_min >= 0.0) || !(cap >= b.m_filt_min))
        throw InfeasibleBounds("empty filter memory interval");
    if (!(cap < sys.m)) throw InfeasibleBounds("filter memory bound leaves no write buffer");
}

namespace {

int klsm_dims(const SystemParams& sys, const DesignBounds& bounds) {
    // Deep enough for the shallowest T at a mid-range memory split; deeper
    // levels inherit the last capacity at evaluation time.
    const double m_mid = 0.5 * (bounds.m_filt_min + bounds.filter_cap(sys));
    const int L = level_count(bounds.T_min, sys, sys.m - m_mid);
    return std::min(L, 20);
}

}  // namespace

DesignSpace DesignSpace::for_family(Policy family, const SystemParams& sys,
                                    const DesignBounds& bounds) {
    require_valid_bounds(bounds, sys);
    DesignSpace s;
    s.family_ = family;
    s.sys_ = sys;
    s.bounds_ = bounds;
    switch (family) {
        case Policy::leveling:
        case Policy::tiering:
        case Policy::lazy_leveling:
        case Policy::one_leveling:
            s.k_dims_ = 0;
            break;
        case Policy::fluid:
            s.k_dims_ = 2;
            break;
        case Policy::klsm:
            s.k_dims_ = klsm_dims(sys, bounds);
            break;
    }
    return s;
}

DesignSpace DesignSpace::memory_pinned(const SystemParams& sys, const DesignBounds& bounds,
                                       double m_filt_fixed) {
    DesignSpace s = for_family(Policy::fluid, sys, bounds);
    if (!(m_filt_fixed >= 0.0) || !(sys.m - m_filt_fixed > 0.0))
        throw InfeasibleBounds("pinned filter memory outside [0, m)");
    s.pin_memory_ = true;
    s.pinned_m_filt_ = m_filt_fixed;
    return s;
}

std::size_t DesignSpace::dims() const {
    return 1 + (pin_memory_ ? 0 : 1) + static_cast<std::size_t>(k_dims_);
}

BoxBounds DesignSpace::box() const {
    BoxBounds b;
    b.lo.assign(dims(), 0.0);
    b.hi.assign(dims(), 1.0);
    return b;
}

LsmDesign DesignSpace::design_at(const std::vector<double>& x) const {
    LsmDesign d;
    d.T = bounds_.T_min + x[0] * (bounds_.T_max - bounds_.T_min);
    std::size_t at = 1;
    if (pin_memory_) {
        d.m_filt = pinned_m_filt_;
    } else {
        d.m_filt = bounds_.m_filt_min +
                   x[at++] * (bounds_.filter_cap(sys_) - bounds_.m_filt_min);
    }
    const double spread = d.T - 2.0;
    const int L = level_count(d.T, sys_, sys_.m - d.m_filt);
    switch (family_) {
        case Policy::leveling:
        case Policy::tiering:
        case Policy::lazy_leveling:
        case Policy::one_leveling:
            d.K = expand_policy(family_, d.T, L);
            break;
        case Policy::fluid: {
            const double k_upper = 1.0 + x[at] * spread;
            const double k_last = 1.0 + x[at + 1] * spread;
            d.K = expand_policy(Policy::fluid, d.T, L, k_upper, k_last);
            break;
        }
        case Policy::klsm: {
            d.K.resize(static_cast<std::size_t>(k_dims_));
            for (int i = 0; i < k_dims_; ++i)
                d.K[static_cast<std::size_t>(i)] = 1.0 + x[at + static_cast<std::size_t>(i)] * spread;
            break;
        }
    }
    return d;
}

DesignSpace::SmoothPoint DesignSpace::smooth_point_at(const std::vector<double>& x) const {
    SmoothPoint sp;
    sp.hi = design_at(x);
    // lazy_leveling pins K_L = 1 and fluid pins K_L = k_last, so when the
    // level count ticks up the old deepest level snaps to the upper-level
    // capacity and the relaxed cost jumps. `lo` keeps the penultimate level
    // in its old deepest-level role; blending the two pattern costs by the
    // same ease the tail weight uses keeps the surrogate continuous there.
    if ((family_ == Policy::lazy_leveling || family_ == Policy::fluid) && sp.hi.K.size() >= 2) {
        const double raw = smooth_level_count(sp.hi.T, sys_, sys_.m - sp.hi.m_filt);
        const std::size_t L = sp.hi.K.size();
        const double frac = std::clamp(raw - double(L - 1), 0.0, 1.0);
        sp.ease = frac * frac * (3.0 - 2.0 * frac);
        sp.lo = sp.hi;
        sp.lo.K[L - 2] = sp.lo.K[L - 1];
    }
    return sp;
}

std::vector<double> DesignSpace::encode(const LsmDesign& d) const {
    auto unit = [](double v, double lo, double hi) {
        if (!(hi > lo)) return 0.0;
        return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    };
    std::vector<double> x(dims(), 0.0);
    x[0] = unit(d.T, bounds_.T_min, bounds_.T_max);
    std::size_t at = 1;
    if (!pin_memory_)
        x[at++] = unit(d.m_filt, bounds_.m_filt_min, bounds_.filter_cap(sys_));
    if (k_dims_ == 0) return x;
    const double spread = d.T - 2.0;
    if (family_ == Policy::fluid) {
        // upper levels share one capacity; take the first as representative
        x[at] = spread > 0.0 ? unit((d.K.front() - 1.0) / spread, 0.0, 1.0) : 0.0;
        x[at + 1] = spread > 0.0 ? unit((d.K.back() - 1.0) / spread, 0.0, 1.0) : 0.0;
        return x;
    }
    const std::vector<double> Kd = expand_capacities(d.K, k_dims_);
    for (int i = 0; i < k_dims_; ++i)
        x[at + static_cast<std::size_t>(i)] =
            spread > 0.0 ? unit((Kd[static_cast<std::size_t>(i)] - 1.0) / spread, 0.0, 1.0) : 0.0;
    return x;
}

}  // namespace endure
