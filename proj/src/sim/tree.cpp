#include "endure/sim/tree.hpp"

#include <algorithm>
#include <cmath>

#include "endure/errors.hpp"

namespace endure::sim {

namespace {

constexpr double kLn2Squared = 0.48045301391820142;

long integral(double x, const char* what) {
    double r = std::round(x);
    if (std::abs(x - r) > 1e-9 || r < 0)
        throw ConfigError(std::string("simulator requires integral ") + what);
    return long(r);
}

// K-way merge of sorted (key, value) sources; earlier sources are newer and
// win ties.
using Source = std::pair<const std::vector<std::uint64_t>*, const std::vector<std::uint64_t>*>;

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> merge_sources(
    const std::vector<Source>& srcs) {
    std::size_t total = 0;
    for (const auto& s : srcs) total += s.first->size();
    std::vector<std::uint64_t> keys, vals;
    keys.reserve(total);
    vals.reserve(total);
    std::vector<std::size_t> pos(srcs.size(), 0);
    for (;;) {
        std::size_t winner = srcs.size();
        std::uint64_t best = 0;
        for (std::size_t i = 0; i < srcs.size(); ++i) {
            if (pos[i] >= srcs[i].first->size()) continue;
            std::uint64_t k = (*srcs[i].first)[pos[i]];
            if (winner == srcs.size() || k < best) {
                winner = i;
                best = k;
            }
        }
        if (winner == srcs.size()) break;
        keys.push_back(best);
        vals.push_back((*srcs[winner].second)[pos[winner]]);
        for (std::size_t i = 0; i < srcs.size(); ++i)
            if (pos[i] < srcs[i].first->size() && (*srcs[i].first)[pos[i]] == best) ++pos[i];
    }
    return {std::move(keys), std::move(vals)};
}

}  // namespace

SimTree::SimTree(const LsmDesign& design, const SystemParams& sys, std::uint64_t seed)
    : design_(design), sys_(sys), rng_(seed) {
    require_valid_system(sys);
    require_valid_design(design, sys);
    t_ = int(integral(design.T, "size ratio"));
    if (t_ < 2) throw ConfigError("simulator requires T >= 2");
    for (double k : design.K) {
        long v = integral(k, "run capacity");
        if (v < 1 || v > t_ - 1) throw ConfigError("run capacity outside [1, T-1]");
        k_.push_back(int(v));
    }
    if (k_.empty()) throw ConfigError("simulator requires at least one level capacity");

    double m_buf = sys.m - design.m_filt;
    if (m_buf <= sys.E) throw ConfigError("buffer must hold at least one entry");
    flush_capacity_ = std::size_t(m_buf / sys.E);
    page_entries_ = std::size_t(sys.B);
    design_levels_ = level_count(design.T, sys, m_buf);
    fpr_factor_ = std::pow(design.T, design.T / (design.T - 1.0)) *
                  std::exp(-(design.m_filt / sys.N) * kLn2Squared);
}

int SimTree::capacity_at(int level) const {
    std::size_t i = std::min<std::size_t>(std::size_t(level), k_.size());
    return k_[i - 1];
}

int SimTree::group_capacity(int level, int group) const {
    int k = capacity_at(level);
    int base = (t_ - 1) / k;
    int extra = (t_ - 1) % k;
    return base + (group < extra ? 1 : 0);
}

double SimTree::fpr_for_level(int level) const {
    return std::min(1.0, fpr_factor_ / std::pow(double(t_), design_levels_ + 1 - level));
}

double SimTree::bits_per_entry_for_level(int level) const {
    double f = fpr_for_level(level);
    if (f >= 1.0) return 0.0;
    return std::min(64.0, -std::log(f) / kLn2Squared);
}

SimTree::Run SimTree::make_run(int level, Entries e) {
    Run r;
    r.keys = std::move(e.first);
    r.vals = std::move(e.second);
    r.bloom = BloomFilter(r.keys.size(), bits_per_entry_for_level(level), rng_.next());
    for (std::uint64_t k : r.keys) r.bloom.insert(k);
    return r;
}

void SimTree::put(std::uint64_t key, std::uint64_t value) {
    ++counters_.puts;
    buffer_[key] = value;
    if (buffer_.size() >= flush_capacity_) flush();
}

void SimTree::flush() {
    Entries e;
    e.first.reserve(buffer_.size());
    e.second.reserve(buffer_.size());
    for (const auto& [k, v] : buffer_) {
        e.first.push_back(k);
        e.second.push_back(v);
    }
    buffer_.clear();
    ++counters_.flushes;
    receive(1, std::move(e));
}

void SimTree::receive(int level, Entries incoming) {
    if (std::size_t(level) > levels_.size()) levels_.emplace_back();
    Level& lv = levels_[std::size_t(level) - 1];
    ++lv.arrivals;

    if (lv.arrivals == t_) {
        // T-th arrival: materialize it, then compact the whole level. Below
        // the last level the output streams down (written on placement
        // there); the last level absorbs its own output in place.
        ++counters_.compactions;
        counters_.compaction_writes += pages(incoming.first.size());
        counters_.compaction_reads += pages(incoming.first.size());
        std::vector<Source> srcs;
        srcs.push_back({&incoming.first, &incoming.second});
        for (const Run& r : lv.runs) {
            counters_.compaction_reads += pages(r.keys.size());
            srcs.push_back({&r.keys, &r.vals});
        }
        Entries merged = merge_sources(srcs);
        if (level >= design_levels_) {
            counters_.compaction_writes += pages(merged.first.size());
            lv = Level{};
            Level& fresh = levels_[std::size_t(level) - 1];
            fresh.arrivals = 1;
            fresh.runs.push_back(make_run(level, std::move(merged)));
            fresh.open_fill = 1;
            if (fresh.open_fill >= group_capacity(level, fresh.group_index)) {
                ++fresh.group_index;
                fresh.open_fill = 0;
            }
        } else {
            levels_[std::size_t(level) - 1] = Level{};
            receive(level + 1, std::move(merged));
        }
        return;
    }

    if (lv.open_fill == 0) {
        counters_.compaction_writes += pages(incoming.first.size());
        lv.runs.insert(lv.runs.begin(), make_run(level, std::move(incoming)));
    } else {
        Run& open = lv.runs.front();
        counters_.compaction_reads += pages(open.keys.size());
        Entries merged =
            merge_sources({{&incoming.first, &incoming.second}, {&open.keys, &open.vals}});
        counters_.compaction_writes += pages(merged.first.size());
        lv.runs.front() = make_run(level, std::move(merged));
    }
    ++lv.open_fill;
    if (lv.open_fill >= group_capacity(level, lv.group_index)) {
        ++lv.group_index;
        lv.open_fill = 0;
    }
}

std::optional<std::uint64_t> SimTree::point_get(std::uint64_t key) {
    if (auto it = buffer_.find(key); it != buffer_.end()) {
        ++counters_.gets_nonempty;
        return it->second;
    }
    for (const Level& lv : levels_) {
        for (const Run& r : lv.runs) {
            ++counters_.bloom_probes;
            if (!r.bloom.maybe_contains(key)) continue;
            ++counters_.bloom_positives;
            ++counters_.random_reads;
            auto it = std::lower_bound(r.keys.begin(), r.keys.end(), key);
            if (it != r.keys.end() && *it == key) {
                ++counters_.gets_nonempty;
                return r.vals[std::size_t(it - r.keys.begin())];
            }
            ++counters_.bloom_false_positives;
        }
    }
    ++counters_.gets_empty;
    return std::nullopt;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> SimTree::range_get(std::uint64_t lo,
                                                                        std::uint64_t hi) {
    ++counters_.range_gets;
    std::vector<std::uint64_t> buf_keys, buf_vals;
    for (auto it = buffer_.lower_bound(lo); it != buffer_.end() && it->first <= hi; ++it) {
        buf_keys.push_back(it->first);
        buf_vals.push_back(it->second);
    }
    std::vector<Source> srcs;
    srcs.push_back({&buf_keys, &buf_vals});
    std::vector<Entries> slices;
    // Two passes so slice storage never reallocates under srcs.
    std::vector<const Run*> hit;
    for (const Level& lv : levels_)
        for (const Run& r : lv.runs) hit.push_back(&r);
    slices.reserve(hit.size());
    for (const Run* r : hit) {
        auto first = std::lower_bound(r->keys.begin(), r->keys.end(), lo);
        auto last = std::upper_bound(r->keys.begin(), r->keys.end(), hi);
        if (first == last) continue;  // fence index skips the run entirely
        std::size_t a = std::size_t(first - r->keys.begin());
        std::size_t b = std::size_t(last - r->keys.begin());
        ++counters_.random_reads;
        counters_.sequential_reads += (b - 1) / page_entries_ - a / page_entries_;
        Entries s;
        s.first.assign(r->keys.begin() + long(a), r->keys.begin() + long(b));
        s.second.assign(r->vals.begin() + long(a), r->vals.begin() + long(b));
        slices.push_back(std::move(s));
        srcs.push_back({&slices.back().first, &slices.back().second});
    }
    Entries merged = merge_sources(srcs);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(merged.first.size());
    for (std::size_t i = 0; i < merged.first.size(); ++i)
        out.emplace_back(merged.first[i], merged.second[i]);
    return out;
}

std::size_t SimTree::total_entries() const {
    std::size_t n = buffer_.size();
    for (const Level& lv : levels_)
        for (const Run& r : lv.runs) n += r.keys.size();
    return n;
}

std::vector<std::size_t> SimTree::level_run_counts() const {
    std::vector<std::size_t> out;
    for (const Level& lv : levels_) out.push_back(lv.runs.size());
    return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> SimTree::scan_all() const {
    std::vector<std::uint64_t> buf_keys, buf_vals;
    for (const auto& [k, v] : buffer_) {
        buf_keys.push_back(k);
        buf_vals.push_back(v);
    }
    std::vector<Source> srcs;
    srcs.push_back({&buf_keys, &buf_vals});
    for (const Level& lv : levels_)
        for (const Run& r : lv.runs) srcs.push_back({&r.keys, &r.vals});
    Entries merged = merge_sources(srcs);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(merged.first.size());
    for (std::size_t i = 0; i < merged.first.size(); ++i)
        out.emplace_back(merged.first[i], merged.second[i]);
    return out;
}

}  // namespace endure::sim
