#ifndef ENDURE_IO_SERDE_HPP
#define ENDURE_IO_SERDE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "endure/cost_model.hpp"
#include "endure/design_space.hpp"
#include "endure/evaluator.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/robust_tuner.hpp"
#include "endure/types.hpp"
#include "endure/workload_bench.hpp"

namespace endure::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);          // throws IoError
void write_file(const std::string& path, const std::string& body);

// Provenance stamped into every output file.
struct FileMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
};
// Leading "# config_hash=... seed=..." line; readers here skip '#' lines,
// the remainder is plain RFC-4180.
std::string meta_line(const FileMeta& meta);

// Memory values: plain numbers are bits; "<x>B|KB|MB|GB" are bytes (1024
// multiples); "<x>bpe" is bits per entry, scaled by `entries`.
double parse_memory(const json& v, double entries);

json to_json(const Workload& w);
Workload workload_from_json(const json& j);

json to_json(const SystemParams& s);
SystemParams system_from_json(const json& j);

json to_json(const DesignBounds& b, const SystemParams& sys);
DesignBounds bounds_from_json(const json& j, const SystemParams& sys);

json to_json(const SolverParams& s);
SolverParams solver_from_json(const json& j);

json to_json(const LsmDesign& d);
LsmDesign design_from_json(const json& j, const SystemParams& sys);

json to_json(const TuningResult& r);
json to_json(const RobustResult& r);
json to_json(const UncertaintyRegion& r);

// CSV: one row per workload (z0,z1,q,w,count_z0,count_z1,count_q,count_w).
std::string bench_csv(const BenchmarkSet& set, const FileMeta& meta);
std::string session_csv(const Session& s, const FileMeta& meta);
BenchmarkSet bench_from_csv(const std::string& body);

// Any CSV with z0,z1,q,w columns (bench files included) yields a history.
std::vector<Workload> history_from_csv(const std::string& body);

// Sweep records under the canonical header
// center_id,rho,z0,z1,q,w,kl,cost_nominal,cost_robust,delta.
std::string records_csv_header();
void append_records_csv(std::string& out, int center_id,
                        const std::vector<ComparisonRecord>& records);

std::string csv_quote(const std::string& field);

}  // namespace endure::io

#endif
