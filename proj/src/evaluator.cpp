#include "endure/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "endure/errors.hpp"
#include "endure/kernels/batch.hpp"

namespace endure {

namespace {

kernels::WorkloadBatch to_batch(const BenchmarkSet& bench) {
    kernels::WorkloadBatch batch;
    batch.reserve(bench.samples.size());
    for (const auto& s : bench.samples) batch.push(s.w);
    return batch;
}

std::vector<double> batch_costs(const kernels::WorkloadBatch& batch, const LsmDesign& d,
                                const SystemParams& sys) {
    std::vector<double> out(batch.size());
    kernels::batch_cost(batch, cost_vector(d, sys), out.data());
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

double spread(const std::vector<double>& costs) {
    auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
    if (*lo <= 0.0) throw ZeroCost("throughput_range: nonpositive cost in benchmark");
    return 1.0 / *lo - 1.0 / *hi;
}

// The batch kernel insists on a strictly positive center; against a center
// with empty components the divergence is still well defined (infinite off
// its support), so fall back to the scalar form.
std::vector<double> divergences(const kernels::WorkloadBatch& batch, const Workload& center) {
    std::vector<double> kl(batch.size());
    if (center.z0 > 0.0 && center.z1 > 0.0 && center.q > 0.0 && center.w > 0.0) {
        kernels::batch_kl(batch, center, kl.data());
    } else {
        for (std::size_t i = 0; i < batch.size(); ++i)
            kl[i] = kl_divergence(batch.at(i), center);
    }
    return kl;
}

}  // namespace

double delta_throughput(const Workload& w, const LsmDesign& phi1, const LsmDesign& phi2,
                        const SystemParams& sys) {
    double c1 = total_cost(w, phi1, sys);
    double c2 = total_cost(w, phi2, sys);
    if (c1 <= 0.0 || c2 <= 0.0) throw ZeroCost("delta_throughput: nonpositive cost");
    return c1 / c2 - 1.0;
}

double throughput_range(const BenchmarkSet& bench, const LsmDesign& phi,
                        const SystemParams& sys) {
    if (bench.samples.empty()) throw ConfigError("throughput_range: empty benchmark");
    return spread(batch_costs(to_batch(bench), phi, sys));
}

RhoSweepResult rho_sweep(const Workload& center, const SystemParams& sys,
                         const std::vector<double>& rhos, const BenchmarkSet& bench,
                         const SweepOptions& opts) {
    require_valid_workload(center);
    if (bench.samples.empty()) throw ConfigError("rho_sweep: empty benchmark");

    RhoSweepResult out;
    out.center = center;
    out.nominal = solve_nominal({center, sys, opts.family, opts.bounds, opts.solver});

    kernels::WorkloadBatch batch = to_batch(bench);
    std::vector<double> cost_n = batch_costs(batch, out.nominal.design, sys);
    std::vector<double> kl = divergences(batch, center);
    for (double c : cost_n)
        if (c <= 0.0) throw ZeroCost("rho_sweep: nonpositive nominal cost");
    double theta_nominal = spread(cost_n);

    out.cells.reserve(rhos.size());
    for (double rho : rhos) {
        RhoSweepCell cell;
        cell.rho = rho;
        cell.theta_nominal = theta_nominal;
        try {
            cell.robust = solve_robust({center, rho}, sys, opts.family, opts.bounds,
                                       opts.solver);
            std::vector<double> cost_r = batch_costs(batch, cell.robust->design, sys);
            std::vector<double> deltas(batch.size());
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (cost_r[i] <= 0.0) throw ZeroCost("rho_sweep: nonpositive robust cost");
                deltas[i] = cost_n[i] / cost_r[i] - 1.0;
            }
            cell.theta_robust = spread(cost_r);
            cell.mean_delta =
                std::accumulate(deltas.begin(), deltas.end(), 0.0) / double(deltas.size());
            cell.median_delta = median_of(deltas);
            cell.solved = true;
            if (opts.with_records)
                for (std::size_t i = 0; i < batch.size(); ++i)
                    out.records.push_back({bench.samples[i].w, rho, kl[i], cost_n[i],
                                           cost_r[i], deltas[i]});
        } catch (const std::exception& e) {
            cell.solved = false;
            cell.error = e.what();
            cell.robust.reset();
        }
        out.cells.push_back(std::move(cell));
    }
    return out;
}

DriftResult drift_experiment(const Workload& center, const SystemParams& sys,
                             const std::vector<Policy>& families, double rho,
                             const BenchmarkSet& bench, const SweepOptions& opts,
                             std::size_t n_bins) {
    require_valid_workload(center);
    if (bench.samples.size() < n_bins)
        throw ConfigError("drift_experiment: benchmark smaller than bin count");
    if (n_bins == 0) throw ConfigError("drift_experiment: n_bins must be positive");

    DriftResult out;
    out.center = center;
    out.rho = rho;

    kernels::WorkloadBatch batch = to_batch(bench);
    std::vector<double> kl = divergences(batch, center);

    std::vector<std::size_t> order(batch.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return kl[a] < kl[b]; });

    // Equal-count bins over the divergence ranking.
    std::vector<std::vector<std::size_t>> bins(n_bins);
    for (std::size_t r = 0; r < order.size(); ++r)
        bins[r * n_bins / order.size()].push_back(order[r]);

    out.bins.lo.resize(n_bins);
    out.bins.hi.resize(n_bins);
    out.bins.mean_kl.resize(n_bins);
    out.bins.count.resize(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const auto& idx = bins[b];
        out.bins.count[b] = idx.size();
        if (idx.empty()) continue;
        out.bins.lo[b] = kl[idx.front()];
        out.bins.hi[b] = kl[idx.back()];
        double sum = 0.0;
        for (std::size_t i : idx) sum += kl[i];
        out.bins.mean_kl[b] = sum / double(idx.size());
    }

    auto add_curve = [&](const std::string& label, const LsmDesign& d) {
        DriftCurve curve;
        curve.label = label;
        curve.design = d;
        std::vector<double> costs = batch_costs(batch, d, sys);
        curve.mean_cost.resize(n_bins, 0.0);
        for (std::size_t b = 0; b < n_bins; ++b) {
            if (bins[b].empty()) continue;
            double sum = 0.0;
            for (std::size_t i : bins[b]) sum += costs[i];
            curve.mean_cost[b] = sum / double(bins[b].size());
        }
        out.curves.push_back(std::move(curve));
    };

    for (Policy family : families) {
        TuningResult r = solve_nominal({center, sys, family, opts.bounds, opts.solver});
        add_curve(to_string(family), r.design);
    }
    RobustResult r = solve_robust({center, rho}, sys, opts.family, opts.bounds, opts.solver);
    add_curve("robust", r.design);
    return out;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ConfigError("spearman: need two equal-length series of size >= 2");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> rank(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double avg = 0.5 * double(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / double(ra.size());
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / double(rb.size());
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da == 0.0 || db == 0.0) throw ConfigError("spearman: constant series");
    return num / std::sqrt(da * db);
}

}  // namespace endure
