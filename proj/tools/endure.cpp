#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "endure/errors.hpp"
#include "endure/evaluator.hpp"
#include "endure/io/serde.hpp"
#include "endure/log.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/robust_tuner.hpp"
#include "endure/sim/session.hpp"
#include "endure/sim/tree.hpp"
#include "endure/workload_bench.hpp"

namespace fs = std::filesystem;
using endure::io::json;

namespace {

struct Cli {
    std::string config_path;
    std::string history_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> family;
    unsigned parallelism = 1;
};

endure::Policy family_from_cli(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "lazy") s = "lazy_leveling";
    return endure::policy_from_string(s);
}

struct LoadedConfig {
    json j;
    std::string hash;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
};

LoadedConfig load_config(const Cli& cli, bool required) {
    LoadedConfig lc;
    if (cli.config_path.empty()) {
        if (required) throw endure::ConfigError("--config is required");
        lc.j = json::object();
        lc.hash = endure::io::hex64(endure::io::fnv1a(""));
    } else {
        std::string raw = endure::io::read_file(cli.config_path);
        lc.hash = endure::io::hex64(endure::io::fnv1a(raw));
        try {
            lc.j = json::parse(raw);
        } catch (const json::exception& e) {
            throw endure::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        int version = lc.j.value("schema_version", endure::io::kSchemaVersion);
        if (version > endure::io::kSchemaVersion)
            throw endure::ConfigError("config schema_version newer than supported");
    }
    lc.seed = cli.seed ? *cli.seed : lc.j.value("seed", std::uint64_t(42));
    lc.out_dir = !cli.out_dir.empty() ? cli.out_dir : lc.j.value("out", std::string("."));
    fs::create_directories(lc.out_dir);
    endure::log::open_sidecar((fs::path(lc.out_dir) / "run.log").string());
    return lc;
}

endure::SystemParams system_from(const LoadedConfig& lc) {
    return lc.j.contains("system") ? endure::io::system_from_json(lc.j.at("system"))
                                   : endure::SystemParams{};
}

endure::Workload center_from(const json& j) {
    if (j.contains("center_index")) {
        const auto& table = endure::expected_workloads();
        std::size_t i = j.at("center_index").get<std::size_t>();
        if (i >= table.size()) throw endure::ConfigError("center_index outside Table-2 range");
        return table[i].w;
    }
    for (const char* key : {"workload", "center"})
        if (j.contains(key)) return endure::io::workload_from_json(j.at(key));
    throw endure::ConfigError("config needs workload, center, or center_index");
}

endure::Policy family_from(const Cli& cli, const LoadedConfig& lc,
                           endure::Policy fallback = endure::Policy::klsm) {
    if (cli.family) return family_from_cli(*cli.family);
    if (lc.j.contains("family")) return family_from_cli(lc.j.at("family").get<std::string>());
    return fallback;
}

endure::DesignBounds bounds_from(const LoadedConfig& lc, const endure::SystemParams& sys) {
    return lc.j.contains("bounds") ? endure::io::bounds_from_json(lc.j.at("bounds"), sys)
                                   : endure::DesignBounds{};
}

endure::SolverParams solver_from(const LoadedConfig& lc, std::uint64_t seed) {
    endure::SolverParams s;
    if (lc.j.contains("solver")) s = endure::io::solver_from_json(lc.j.at("solver"));
    if (!lc.j.contains("solver") || !lc.j.at("solver").contains("seed")) s.seed = seed;
    return s;
}

endure::BenchmarkSet bench_from(const json& j, std::uint64_t default_seed) {
    if (j.contains("file"))
        return endure::io::bench_from_csv(
            endure::io::read_file(j.at("file").get<std::string>()));
    std::uint64_t seed = j.value("seed", default_seed);
    std::size_t size = j.value("size", std::size_t(10000));
    std::uint32_t max_count = j.value("max_count", std::uint32_t(10000));
    return endure::sample_benchmark(seed, size, max_count);
}

void write_json_output(const LoadedConfig& lc, const std::string& name, json body) {
    body["schema_version"] = endure::io::kSchemaVersion;
    body["config_hash"] = lc.hash;
    body["seed"] = lc.seed;
    endure::io::write_file((fs::path(lc.out_dir) / name).string(), body.dump(2) + "\n");
}

int cmd_tune_nominal(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    endure::SystemParams sys = system_from(lc);
    endure::TuningProblem problem{center_from(lc.j), sys, family_from(cli, lc),
                                  bounds_from(lc, sys), solver_from(lc, lc.seed)};
    endure::TuningResult result;
    if (lc.j.contains("fixed_memory")) {
        const json& fm = lc.j.at("fixed_memory");
        result = endure::solve_nominal_fixed_memory(
            problem, endure::io::parse_memory(fm.at("m_filt"), sys.N),
            endure::io::parse_memory(fm.at("m_buf"), sys.N));
    } else {
        result = endure::solve_nominal(problem);
    }
    json out{{"kind", "tune-nominal"},
             {"system", endure::io::to_json(sys)},
             {"family", endure::to_string(problem.family)},
             {"workload", endure::io::to_json(problem.expected)},
             {"result", endure::io::to_json(result)}};
    write_json_output(lc, "tuning.json", out);
    std::printf("%s\n", endure::io::to_json(result).dump().c_str());
    return 0;
}

int cmd_tune_robust(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    endure::SystemParams sys = system_from(lc);
    endure::Workload center = center_from(lc.j);
    double rho;
    if (lc.j.contains("rho_history")) {
        auto history = endure::io::history_from_csv(
            endure::io::read_file(lc.j.at("rho_history").get<std::string>()));
        rho = endure::rho_from_history(history);
    } else if (lc.j.contains("rho")) {
        rho = lc.j.at("rho").get<double>();
    } else {
        throw endure::ConfigError("tune-robust config needs rho or rho_history");
    }
    endure::UncertaintyRegion region{center, rho};
    endure::RobustResult result =
        endure::solve_robust(region, sys, family_from(cli, lc), bounds_from(lc, sys),
                             solver_from(lc, lc.seed));
    json out{{"kind", "tune-robust"},
             {"system", endure::io::to_json(sys)},
             {"family", endure::to_string(family_from(cli, lc))},
             {"region", endure::io::to_json(region)},
             {"result", endure::io::to_json(result)}};
    write_json_output(lc, "robust.json", out);
    std::printf("%s\n", endure::io::to_json(result).dump().c_str());
    return 0;
}

int cmd_estimate_rho(const Cli& cli) {
    LoadedConfig lc = load_config(cli, false);
    std::string path = !cli.history_path.empty()
                           ? cli.history_path
                           : lc.j.value("history", std::string());
    if (path.empty())
        throw endure::ConfigError("estimate-rho needs --history or a history config field");
    auto history = endure::io::history_from_csv(endure::io::read_file(path));
    double rho = endure::rho_from_history(history);
    json out{{"kind", "estimate-rho"}, {"rho", rho}, {"history_rows", history.size()}};
    write_json_output(lc, "rho.json", out);
    std::printf("{\"rho\":%s}\n", endure::io::format_double(rho).c_str());
    return 0;
}

int cmd_bench_gen(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    std::size_t size = lc.j.value("size", std::size_t(10000));
    std::uint32_t max_count = lc.j.value("max_count", std::uint32_t(10000));
    endure::BenchmarkSet set = endure::sample_benchmark(lc.seed, size, max_count);
    endure::io::FileMeta meta{lc.hash, lc.seed};
    endure::io::write_file((fs::path(lc.out_dir) / "bench.csv").string(),
                           endure::io::bench_csv(set, meta));
    json out{{"kind", "bench-gen"},
             {"size", set.samples.size()},
             {"max_count", max_count},
             {"generator", set.generator}};
    write_json_output(lc, "bench.json", out);
    return 0;
}

int cmd_evaluate_sweep(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    endure::SystemParams sys = system_from(lc);

    std::vector<endure::Workload> centers;
    if (!lc.j.contains("centers") || lc.j.at("centers") == "table2") {
        for (const auto& e : endure::expected_workloads()) centers.push_back(e.w);
    } else {
        for (const auto& cj : lc.j.at("centers"))
            centers.push_back(endure::io::workload_from_json(cj));
    }
    std::vector<double> rhos =
        lc.j.value("rhos", std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0,
                                               2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75});
    std::sort(rhos.begin(), rhos.end());
    endure::BenchmarkSet bench =
        bench_from(lc.j.value("bench", json::object()), lc.seed);

    endure::SweepOptions opts;
    opts.family = family_from(cli, lc);
    opts.bounds = bounds_from(lc, sys);
    opts.solver = solver_from(lc, lc.seed);
    opts.with_records = lc.j.value("with_records", true);

    std::vector<endure::RhoSweepResult> results(centers.size());
    std::atomic<std::size_t> next{0};
    unsigned workers = std::max(1u, cli.parallelism);
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= centers.size()) return;
            endure::log::info("sweep center " + std::to_string(i));
            results[i] = endure::rho_sweep(centers[i], sys, rhos, bench, opts);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    endure::io::FileMeta meta{lc.hash, lc.seed};
    if (opts.with_records) {
        std::string records = endure::io::meta_line(meta) + endure::io::records_csv_header();
        for (std::size_t i = 0; i < results.size(); ++i)
            endure::io::append_records_csv(records, int(i), results[i].records);
        endure::io::write_file((fs::path(lc.out_dir) / "records.csv").string(), records);
    }

    std::string summary = endure::io::meta_line(meta);
    summary +=
        "center_id,rho,solved,mean_delta,median_delta,theta_nominal,theta_robust,"
        "nominal_objective,robust_dual_objective,robust_T,robust_m_filt,error\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (const auto& cell : results[i].cells) {
            summary += std::to_string(i) + "," + endure::io::format_double(cell.rho) + ",";
            summary += cell.solved ? "1," : "0,";
            summary += endure::io::format_double(cell.mean_delta) + "," +
                       endure::io::format_double(cell.median_delta) + "," +
                       endure::io::format_double(cell.theta_nominal) + "," +
                       endure::io::format_double(cell.theta_robust) + "," +
                       endure::io::format_double(results[i].nominal.objective) + ",";
            if (cell.robust) {
                summary += endure::io::format_double(cell.robust->dual_objective) + "," +
                           endure::io::format_double(cell.robust->design.T) + "," +
                           endure::io::format_double(cell.robust->design.m_filt) + ",";
            } else {
                summary += ",,,";
            }
            summary += endure::io::csv_quote(cell.error) + "\n";
        }
    }
    endure::io::write_file((fs::path(lc.out_dir) / "summary.csv").string(), summary);

    json out{{"kind", "evaluate-sweep"},
             {"centers", centers.size()},
             {"rhos", rhos},
             {"bench_size", bench.samples.size()},
             {"family", endure::to_string(opts.family)},
             {"records",
              opts.with_records ? centers.size() * rhos.size() * bench.samples.size() : 0}};
    write_json_output(lc, "sweep.json", out);
    return 0;
}

int cmd_drift(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    endure::SystemParams sys = system_from(lc);
    endure::Workload center = center_from(lc.j);
    double rho = lc.j.value("rho", 2.0);
    std::vector<endure::Policy> families;
    if (lc.j.contains("families")) {
        for (const auto& f : lc.j.at("families"))
            families.push_back(family_from_cli(f.get<std::string>()));
    } else {
        families = {endure::Policy::klsm, endure::Policy::fluid,
                    endure::Policy::lazy_leveling, endure::Policy::leveling,
                    endure::Policy::tiering};
    }
    endure::BenchmarkSet bench = bench_from(lc.j.value("bench", json::object()), lc.seed);
    endure::SweepOptions opts;
    opts.family = family_from(cli, lc);
    opts.bounds = bounds_from(lc, sys);
    opts.solver = solver_from(lc, lc.seed);
    std::size_t bins = lc.j.value("bins", std::size_t(20));

    endure::DriftResult result =
        endure::drift_experiment(center, sys, families, rho, bench, opts, bins);

    endure::io::FileMeta meta{lc.hash, lc.seed};
    std::string csv = endure::io::meta_line(meta);
    csv += "label,bin,kl_lo,kl_hi,kl_mean,count,mean_cost\n";
    for (const auto& curve : result.curves) {
        for (std::size_t b = 0; b < bins; ++b) {
            csv += endure::io::csv_quote(curve.label) + "," + std::to_string(b) + "," +
                   endure::io::format_double(result.bins.lo[b]) + "," +
                   endure::io::format_double(result.bins.hi[b]) + "," +
                   endure::io::format_double(result.bins.mean_kl[b]) + "," +
                   std::to_string(result.bins.count[b]) + "," +
                   endure::io::format_double(curve.mean_cost[b]) + "\n";
        }
    }
    endure::io::write_file((fs::path(lc.out_dir) / "drift.csv").string(), csv);

    json curves = json::array();
    for (const auto& c : result.curves)
        curves.push_back({{"label", c.label}, {"design", endure::io::to_json(c.design)}});
    json out{{"kind", "drift-experiment"}, {"rho", rho}, {"curves", curves},
             {"center", endure::io::to_json(center)}};
    write_json_output(lc, "drift.json", out);
    return 0;
}

int cmd_simulate_session(const Cli& cli) {
    LoadedConfig lc = load_config(cli, true);
    endure::SystemParams sys = system_from(lc);

    endure::LsmDesign d_nominal, d_robust;
    if (lc.j.contains("designs")) {
        d_nominal = endure::io::design_from_json(lc.j.at("designs").at("nominal"), sys);
        d_robust = lc.j.at("designs").contains("robust")
                       ? endure::io::design_from_json(lc.j.at("designs").at("robust"), sys)
                       : d_nominal;
    } else if (lc.j.contains("design")) {
        d_nominal = d_robust = endure::io::design_from_json(lc.j.at("design"), sys);
    } else {
        throw endure::ConfigError("simulate-session config needs design or designs");
    }

    const json& sj = lc.j.value("session", json::object());
    endure::Workload center = sj.contains("center") || sj.contains("center_index") ||
                                      sj.contains("workload")
                                  ? center_from(sj)
                                  : center_from(lc.j);
    auto category = endure::session_category_from_string(
        sj.value("category", std::string("expected")));
    std::size_t n_workloads = sj.value("n_workloads", std::size_t(3));
    std::uint64_t queries = sj.value("queries", std::uint64_t(200000));
    endure::BenchmarkSet bench;
    if (lc.j.contains("bench")) bench = bench_from(lc.j.at("bench"), lc.seed);
    endure::Session session =
        endure::generate_session(category, center, bench, n_workloads, lc.seed, queries);
    double update_fraction = lc.j.value("update_fraction", 0.0);
    double rho = lc.j.value("rho", 0.0);
    int center_id = sj.value("center_index", lc.j.value("center_index", -1));

    auto run_tree = [&](const endure::LsmDesign& d) {
        endure::sim::BuiltTree built = endure::sim::build_full_tree(d, sys, lc.seed);
        endure::sim::SessionStats stats = endure::sim::run_session(
            *built.tree, built.keys, session, lc.seed ^ 0x5e5510aULL, update_fraction);
        return std::make_pair(std::move(built), std::move(stats));
    };
    auto [built_n, stats_n] = run_tree(d_nominal);
    bool same_design = lc.j.contains("design") || !lc.j.at("designs").contains("robust");

    std::optional<std::pair<endure::sim::BuiltTree, endure::sim::SessionStats>> rb;
    if (!same_design) rb.emplace(run_tree(d_robust));
    const endure::sim::SessionStats& stats_r = rb ? rb->second : stats_n;

    // Model rows predict the trees as built, so N is the realized fill.
    endure::SystemParams sys_n = sys;
    sys_n.N = double(built_n.fill_entries);
    endure::SystemParams sys_r = sys;
    sys_r.N = double(rb ? rb->first.fill_entries : built_n.fill_entries);

    endure::io::FileMeta meta{lc.hash, lc.seed};
    std::string csv = endure::io::meta_line(meta);
    csv += "center_id,rho,z0,z1,q,w,kl,cost_nominal,cost_robust,delta,source\n";
    auto row_prefix = [&](const endure::Workload& w) {
        return std::to_string(center_id) + "," + endure::io::format_double(rho) + "," +
               endure::io::format_double(w.z0) + "," + endure::io::format_double(w.z1) +
               "," + endure::io::format_double(w.q) + "," + endure::io::format_double(w.w) +
               "," + endure::io::format_double(endure::kl_divergence(w, center));
    };
    for (std::size_t i = 0; i < session.workloads.size(); ++i) {
        const endure::Workload& w = session.workloads[i].w;
        double mn = endure::total_cost(w, d_nominal, sys_n);
        double mr = endure::total_cost(w, d_robust, sys_r);
        csv += row_prefix(w) + "," + endure::io::format_double(mn) + "," +
               endure::io::format_double(mr) + "," +
               endure::io::format_double(mn / mr - 1.0) + ",model\n";
        double sn = stats_n.per_workload[i].ios_per_query;
        double sr = stats_r.per_workload[i].ios_per_query;
        csv += row_prefix(w) + "," + endure::io::format_double(sn) + "," +
               endure::io::format_double(sr) + "," +
               endure::io::format_double(sr > 0 ? sn / sr - 1.0 : 0.0) + ",simulator\n";
    }
    endure::io::write_file((fs::path(lc.out_dir) / "session.csv").string(), csv);
    endure::io::write_file((fs::path(lc.out_dir) / "session_workloads.csv").string(),
                           endure::io::session_csv(session, meta));

    auto counters_json = [](const endure::sim::IoCounters& c) {
        return json{{"random_reads", c.random_reads},
                    {"sequential_reads", c.sequential_reads},
                    {"compaction_reads", c.compaction_reads},
                    {"compaction_writes", c.compaction_writes},
                    {"flushes", c.flushes},
                    {"compactions", c.compactions},
                    {"bloom_probes", c.bloom_probes},
                    {"bloom_positives", c.bloom_positives},
                    {"bloom_false_positives", c.bloom_false_positives},
                    {"gets_empty", c.gets_empty},
                    {"gets_nonempty", c.gets_nonempty},
                    {"range_gets", c.range_gets},
                    {"puts", c.puts}};
    };
    json out{{"kind", "simulate-session"},
             {"category", endure::to_string(category)},
             {"queries_per_workload", queries},
             {"update_fraction", update_fraction},
             {"fill_entries", built_n.fill_entries},
             {"amortized_write_ios", stats_n.amortized_write_ios},
             {"counters_nominal", counters_json(stats_n.after)}};
    if (rb) out["counters_robust"] = counters_json(rb->second.after);
    write_json_output(lc, "session.json", out);
    return 0;
}

int dispatch(const std::string& sub, const Cli& cli) {
    if (sub == "tune-nominal") return cmd_tune_nominal(cli);
    if (sub == "tune-robust") return cmd_tune_robust(cli);
    if (sub == "estimate-rho") return cmd_estimate_rho(cli);
    if (sub == "bench-gen") return cmd_bench_gen(cli);
    if (sub == "evaluate-sweep") return cmd_evaluate_sweep(cli);
    if (sub == "drift-experiment") return cmd_drift(cli);
    if (sub == "simulate-session") return cmd_simulate_session(cli);
    throw endure::ConfigError("unknown subcommand: " + sub);
}

void emit_error(const char* kind, const std::string& message) {
    json err{{"error", {{"kind", kind}, {"message", message}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSM tuning toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Cli cli;
    app.add_option("--config", cli.config_path, "JSON config path");
    app.add_option("--history", cli.history_path, "workload history CSV (estimate-rho)");
    app.add_option("--out", cli.out_dir, "output directory");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed override");
    std::string family_value;
    auto* family_opt = app.add_option(
        "--family", family_value, "design family: leveling|tiering|lazy|fluid|one-leveling|klsm");
    app.add_option("--parallelism", cli.parallelism, "worker threads for sweep cells");

    for (const char* name : {"tune-nominal", "tune-robust", "estimate-rho", "bench-gen",
                             "evaluate-sweep", "drift-experiment", "simulate-session"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error("config", e.what());
        return 1;
    }
    if (*seed_opt) cli.seed = seed_value;
    if (*family_opt) cli.family = family_value;

    std::string sub = app.get_subcommands().front()->get_name();
    try {
        return dispatch(sub, cli);
    } catch (const endure::IoError& e) {
        emit_error("io", e.what());
        return 3;
    } catch (const endure::SolverFailed& e) {
        emit_error("solver", e.what());
        return 2;
    } catch (const endure::ZeroCost& e) {
        emit_error("solver", e.what());
        return 2;
    } catch (const endure::DivergenceInfinite& e) {
        emit_error("solver", e.what());
        return 2;
    } catch (const fs::filesystem_error& e) {
        emit_error("io", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("config", e.what());
        return 1;
    }
}
