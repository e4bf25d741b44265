#include "endure/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "endure/errors.hpp"

namespace endure {

namespace {

constexpr double kLn2Squared = 0.48045301391820142;  // ln(2)^2

struct LevelLayout {
    int L;          // integer level count
    double L_eff;   // depth used in the FPR exponents
    double tail;    // weight on the deepest level's terms
};

LevelLayout layout_for(const LsmDesign& d, const SystemParams& sys, bool smooth) {
    const double raw = smooth_level_count(d.T, sys, sys.m - d.m_filt);
    const int L = std::max(1, static_cast<int>(std::ceil(raw)));
    if (smooth) {
        // Eased rather than linear tail weight: the surrogate stays
        // differentiable where the level count crosses an integer, which is
        // exactly where gradient descent otherwise stalls on a crease.
        const double frac = std::clamp(raw - (L - 1), 0.0, 1.0);
        return {L, raw, frac * frac * (3.0 - 2.0 * frac)};
    }
    return {L, static_cast<double>(L), 1.0};
}

CostVector cost_core(const LsmDesign& d, const SystemParams& sys, bool smooth) {
    require_valid_design(d, sys);
    const double T = d.T;
    const double m_buf = sys.m - d.m_filt;
    const LevelLayout lay = layout_for(d, sys, smooth);
    const int L = lay.L;
    const std::vector<double> K = expand_capacities(d.K, L);

    const double damp = std::exp(-(d.m_filt / sys.N) * kLn2Squared);
    const double head = std::pow(T, T / (T - 1.0)) * damp;
    std::vector<double> f(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i)
        f[i] = std::min(1.0, head / std::pow(T, lay.L_eff - i));

    const double per_flush = m_buf / sys.E;
    double z0 = 0.0, nf = 0.0, runs = 0.0, merge_sum = 0.0;
    for (int i = 0; i < L; ++i) {
        const double u = (i == L - 1) ? lay.tail : 1.0;
        z0 += u * K[i] * f[i];
        nf += u * (T - 1.0) * std::pow(T, i) * per_flush;
        runs += u * K[i];
        merge_sum += u * (T - 1.0 + K[i]) / (2.0 * K[i]);
    }

    // Probability of the target living at level i is that level's share of
    // a full tree; a hit costs one I/O plus false positives from the runs
    // probed before it (all shallower runs, half of the level's own).
    double z1 = 0.0, shallower = 0.0;
    for (int i = 0; i < L; ++i) {
        const double u = (i == L - 1) ? lay.tail : 1.0;
        const double level_entries = (T - 1.0) * std::pow(T, i) * per_flush;
        z1 += u * (level_entries / nf) * (1.0 + shallower + 0.5 * (K[i] - 1.0) * f[i]);
        shallower += K[i] * f[i];
    }

    CostVector c;
    c.z0 = z0;
    c.z1 = z1;
    c.q = sys.f_seq * sys.s_rq * sys.N / sys.B + runs;
    c.w = sys.f_seq * (1.0 + sys.f_a) / sys.B * merge_sum;
    return c;
}

}  // namespace

std::string to_string(Policy p) {
    switch (p) {
        case Policy::leveling: return "leveling";
        case Policy::tiering: return "tiering";
        case Policy::lazy_leveling: return "lazy_leveling";
        case Policy::one_leveling: return "one_leveling";
        case Policy::fluid: return "fluid";
        case Policy::klsm: return "klsm";
    }
    return "unknown";
}

Policy policy_from_string(const std::string& s) {
    if (s == "leveling" || s == "level") return Policy::leveling;
    if (s == "tiering" || s == "tier") return Policy::tiering;
    if (s == "lazy_leveling" || s == "lazy-leveling" || s == "lazy") return Policy::lazy_leveling;
    if (s == "one_leveling" || s == "one-leveling" || s == "1-leveling") return Policy::one_leveling;
    if (s == "fluid") return Policy::fluid;
    if (s == "klsm" || s == "k-lsm") return Policy::klsm;
    throw ConfigError("unknown policy: " + s);
}

void require_valid_design(const LsmDesign& d, const SystemParams& sys) {
    require_valid_system(sys);
    if (!(d.T > 1.0) || !std::isfinite(d.T))
        throw ConfigError("size ratio must exceed 1");
    if (!(d.m_filt >= 0.0) || !(sys.m - d.m_filt > 0.0))
        throw ConfigError("filter memory must leave a positive write buffer");
    if (d.K.empty()) throw ConfigError("design has an empty capacity vector");
    for (double k : d.K) {
        if (!(k >= 1.0 - 1e-9) || !(k <= d.T - 1.0 + 1e-9))
            throw ConfigError("run capacity outside [1, T-1]");
    }
}

std::vector<double> expand_policy(Policy p, double T, int levels,
                                  double k_upper, double k_last) {
    if (!(T >= 2.0)) throw ConfigError("policy expansion needs T >= 2");
    if (levels < 1) throw ConfigError("level count must be >= 1");
    const double full = T - 1.0;
    std::vector<double> K(static_cast<std::size_t>(levels), 1.0);
    switch (p) {
        case Policy::leveling:
            break;
        case Policy::tiering:
            std::fill(K.begin(), K.end(), full);
            break;
        case Policy::lazy_leveling:
            std::fill(K.begin(), K.end(), full);
            K.back() = 1.0;
            break;
        case Policy::one_leveling:
            K.front() = full;
            break;
        case Policy::fluid:
            if (!(k_upper >= 1.0 && k_upper <= full) || !(k_last >= 1.0 && k_last <= full))
                throw ConfigError("fluid capacities outside [1, T-1]");
            std::fill(K.begin(), K.end(), k_upper);
            K.back() = k_last;
            break;
        case Policy::klsm:
            throw ConfigError("klsm takes an explicit capacity vector, not an expansion");
    }
    return K;
}

LsmDesign make_design(Policy p, double T, double m_filt, const SystemParams& sys,
                      double k_upper, double k_last) {
    LsmDesign d;
    d.T = T;
    d.m_filt = m_filt;
    const int L = level_count(T, sys, sys.m - m_filt);
    d.K = expand_policy(p, T, L, k_upper, k_last);
    return d;
}

Policy classify_design(const LsmDesign& d, double tol) {
    const double full = d.T - 1.0;
    auto is = [tol](double a, double b) { return std::fabs(a - b) <= tol; };
    const std::size_t L = d.K.size();
    bool all_one = true, all_full = true;
    for (double k : d.K) {
        all_one = all_one && is(k, 1.0);
        all_full = all_full && is(k, full);
    }
    if (all_one) return Policy::leveling;
    if (all_full) return Policy::tiering;
    bool upper_full = true, lower_one = true;
    for (std::size_t i = 0; i + 1 < L; ++i) upper_full = upper_full && is(d.K[i], full);
    for (std::size_t i = 1; i < L; ++i) lower_one = lower_one && is(d.K[i], 1.0);
    if (upper_full && is(d.K.back(), 1.0)) return Policy::lazy_leveling;
    if (is(d.K.front(), full) && lower_one) return Policy::one_leveling;
    bool upper_equal = true;
    for (std::size_t i = 1; i + 1 < L; ++i) upper_equal = upper_equal && is(d.K[i], d.K[0]);
    if (upper_equal) return Policy::fluid;
    return Policy::klsm;
}

double smooth_level_count(double T, const SystemParams& sys, double m_buf) {
    if (!(T > 1.0)) throw ConfigError("size ratio must exceed 1");
    if (!(m_buf > 0.0)) throw std::domain_error("buffer memory must be positive");
    return std::log(sys.N * sys.E / m_buf + 1.0) / std::log(T);
}

int level_count(double T, const SystemParams& sys, double m_buf) {
    return std::max(1, static_cast<int>(std::ceil(smooth_level_count(T, sys, m_buf))));
}

double full_tree_entries(double T, const SystemParams& sys, double m_buf) {
    const int L = level_count(T, sys, m_buf);
    double nf = 0.0;
    for (int i = 0; i < L; ++i)
        nf += (T - 1.0) * std::pow(T, i) * (m_buf / sys.E);
    return nf;
}

std::vector<double> bloom_fprs(double T, double m_filt, const SystemParams& sys) {
    return bloom_fprs(T, level_count(T, sys, sys.m - m_filt), m_filt, sys);
}

std::vector<double> bloom_fprs(double T, int levels, double m_filt, const SystemParams& sys) {
    if (!(T > 1.0)) throw ConfigError("size ratio must exceed 1");
    if (!(m_filt >= 0.0 && m_filt < sys.m)) throw ConfigError("filter memory outside [0, m)");
    if (levels < 1) throw ConfigError("level count must be >= 1");
    const double damp = std::exp(-(m_filt / sys.N) * kLn2Squared);
    const double head = std::pow(T, T / (T - 1.0)) * damp;
    std::vector<double> f(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i)
        f[i] = std::min(1.0, head / std::pow(T, static_cast<double>(levels - i)));
    return f;
}

std::vector<double> expand_capacities(const std::vector<double>& K, int levels) {
    if (K.empty()) throw ConfigError("empty capacity vector");
    if (levels < 1) throw ConfigError("level count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i)
        out[static_cast<std::size_t>(i)] =
            i < static_cast<int>(K.size()) ? K[static_cast<std::size_t>(i)] : K.back();
    return out;
}

double empty_point_cost(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, false).z0;
}

double nonempty_point_cost(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, false).z1;
}

double range_cost(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, false).q;
}

double write_cost(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, false).w;
}

CostVector cost_vector(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, false);
}

double total_cost(const Workload& w, const LsmDesign& d, const SystemParams& sys) {
    require_valid_workload(w);
    return cost_core(d, sys, false).total(w);
}

CostVector cost_vector_smooth(const LsmDesign& d, const SystemParams& sys) {
    return cost_core(d, sys, true);
}

LsmDesign deployed_design(const LsmDesign& d, const SystemParams& sys) {
    require_valid_design(d, sys);
    LsmDesign out;
    out.T = std::max(2.0, std::ceil(d.T));
    out.m_filt = d.m_filt;
    const int L = level_count(out.T, sys, sys.m - out.m_filt);
    out.K = expand_capacities(d.K, L);
    for (double& k : out.K)
        k = std::clamp(std::round(k), 1.0, out.T - 1.0);
    return out;
}

}  // namespace endure
