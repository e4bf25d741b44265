#include "endure/io/serde.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "endure/errors.hpp"

namespace endure::io {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

std::string meta_line(const FileMeta& meta) {
    return "# config_hash=" + meta.config_hash + " seed=" + std::to_string(meta.seed) + "\n";
}

double parse_memory(const json& v, double entries) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) throw ConfigError("memory value must be a number (bits) or string");
    std::string s = v.get<std::string>();
    std::size_t pos = 0;
    double num;
    try {
        num = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse memory value: " + s);
    }
    std::string unit = s.substr(pos);
    while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
    if (unit == "bpe" || unit == "bits_per_entry") {
        if (entries <= 0) throw ConfigError("bits-per-entry memory needs positive N");
        return num * entries;
    }
    if (unit == "b" || unit == "bits") return num;
    if (unit == "B") return num * 8.0;
    if (unit == "KB") return num * 8.0 * 1024.0;
    if (unit == "MB") return num * 8.0 * 1024.0 * 1024.0;
    if (unit == "GB") return num * 8.0 * 1024.0 * 1024.0 * 1024.0;
    throw ConfigError("unknown memory unit '" + unit + "' in: " + s);
}

json to_json(const Workload& w) {
    return json{{"z0", w.z0}, {"z1", w.z1}, {"q", w.q}, {"w", w.w}};
}

Workload workload_from_json(const json& j) {
    Workload w{j.value("z0", 0.0), j.value("z1", 0.0), j.value("q", 0.0), j.value("w", 0.0)};
    require_valid_workload(w);
    return w;
}

json to_json(const SystemParams& s) {
    return json{{"N", s.N},      {"E", s.E},         {"B", s.B},      {"m", s.m},
                {"f_a", s.f_a},  {"f_seq", s.f_seq}, {"s_rq", s.s_rq}};
}

SystemParams system_from_json(const json& j) {
    SystemParams s;
    s.N = j.value("N", s.N);
    s.E = j.contains("E") ? parse_memory(j.at("E"), s.N) : s.E;
    s.B = j.value("B", s.B);
    if (j.contains("m")) s.m = parse_memory(j.at("m"), s.N);
    s.f_a = j.value("f_a", s.f_a);
    s.f_seq = j.value("f_seq", s.f_seq);
    s.s_rq = j.value("s_rq", s.s_rq);
    require_valid_system(s);
    return s;
}

json to_json(const DesignBounds& b, const SystemParams& sys) {
    return json{{"T_min", b.T_min},
                {"T_max", b.T_max},
                {"m_filt_min", b.m_filt_min},
                {"m_filt_max", b.filter_cap(sys)}};
}

DesignBounds bounds_from_json(const json& j, const SystemParams& sys) {
    DesignBounds b;
    b.T_min = j.value("T_min", b.T_min);
    b.T_max = j.value("T_max", b.T_max);
    if (j.contains("m_filt_min")) b.m_filt_min = parse_memory(j.at("m_filt_min"), sys.N);
    if (j.contains("m_filt_max")) b.m_filt_max = parse_memory(j.at("m_filt_max"), sys.N);
    require_valid_bounds(b, sys);
    return b;
}

json to_json(const SolverParams& s) {
    return json{{"starts", s.starts},
                {"max_iterations", s.max_iterations},
                {"tolerance", s.tolerance},
                {"seed", s.seed}};
}

SolverParams solver_from_json(const json& j) {
    SolverParams s;
    s.starts = j.value("starts", s.starts);
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    s.tolerance = j.value("tolerance", s.tolerance);
    s.seed = j.value("seed", s.seed);
    return s;
}

json to_json(const LsmDesign& d) {
    return json{{"T", d.T},
                {"m_filt", d.m_filt},
                {"K", d.K},
                {"policy", to_string(classify_design(d))}};
}

LsmDesign design_from_json(const json& j, const SystemParams& sys) {
    LsmDesign d;
    d.T = j.value("T", d.T);
    if (j.contains("m_filt")) d.m_filt = parse_memory(j.at("m_filt"), sys.N);
    if (j.contains("K")) {
        d.K = j.at("K").get<std::vector<double>>();
    } else {
        Policy p = j.contains("policy") ? policy_from_string(j.at("policy").get<std::string>())
                                        : Policy::leveling;
        int levels = level_count(d.T, sys, sys.m - d.m_filt);
        double k_upper = j.value("k_upper", 1.0);
        double k_last = j.value("k_last", 1.0);
        d.K = expand_policy(p, d.T, levels, k_upper, k_last);
    }
    require_valid_design(d, sys);
    return d;
}

namespace {

json status_json(const SolverStatus& s) {
    return json{{"converged", s.converged},
                {"iterations", s.iterations},
                {"evaluations", s.evaluations},
                {"winning_start", s.winning_start}};
}

}  // namespace

json to_json(const TuningResult& r) {
    return json{{"design", to_json(r.design)},
                {"deployed", to_json(r.deployed)},
                {"objective", r.objective},
                {"deployed_objective", r.deployed_objective},
                {"rounding_flagged", r.rounding_flagged},
                {"status", status_json(r.status)}};
}

json to_json(const RobustResult& r) {
    return json{{"design", to_json(r.design)},
                {"deployed", to_json(r.deployed)},
                {"lambda", r.lambda},
                {"eta", r.eta},
                {"dual_objective", r.dual_objective},
                {"objective", r.objective},
                {"deployed_objective", r.deployed_objective},
                {"deployed_dual_objective", r.deployed_dual_objective},
                {"rounding_flagged", r.rounding_flagged},
                {"status", status_json(r.status)}};
}

json to_json(const UncertaintyRegion& r) {
    return json{{"center", to_json(r.center)}, {"rho", r.rho}};
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

namespace {

std::string workload_row(const Workload& w, const std::array<std::uint32_t, 4>& counts) {
    std::string row;
    row += format_double(w.z0) + "," + format_double(w.z1) + "," + format_double(w.q) +
           "," + format_double(w.w);
    for (auto c : counts) row += "," + std::to_string(c);
    return row + "\n";
}

constexpr const char* kWorkloadHeader = "z0,z1,q,w,count_z0,count_z1,count_q,count_w\n";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string bench_csv(const BenchmarkSet& set, const FileMeta& meta) {
    std::string out = meta_line(meta);
    out += kWorkloadHeader;
    for (const auto& s : set.samples) out += workload_row(s.w, s.counts);
    return out;
}

std::string session_csv(const Session& s, const FileMeta& meta) {
    std::string out = meta_line(meta);
    out += kWorkloadHeader;
    for (const auto& sw : s.workloads) {
        std::array<std::uint32_t, 4> counts{};
        std::array<double, 4> f = {sw.w.z0, sw.w.z1, sw.w.q, sw.w.w};
        for (int i = 0; i < 4; ++i)
            counts[std::size_t(i)] =
                std::uint32_t(std::llround(f[std::size_t(i)] * double(s.queries_per_workload)));
        out += workload_row(sw.w, counts);
    }
    return out;
}

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& body) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

}  // namespace

BenchmarkSet bench_from_csv(const std::string& body) {
    auto rows = csv_rows(body);
    if (rows.empty()) throw IoError("empty benchmark CSV");
    BenchmarkSet set;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < 8) throw IoError("benchmark CSV row needs 8 columns");
        BenchSample s;
        s.w = {std::stod(row[0]), std::stod(row[1]), std::stod(row[2]), std::stod(row[3])};
        for (int i = 0; i < 4; ++i)
            s.counts[std::size_t(i)] =
                std::uint32_t(std::stoul(row[std::size_t(4 + i)]));
        set.samples.push_back(s);
    }
    return set;
}

std::vector<Workload> history_from_csv(const std::string& body) {
    auto rows = csv_rows(body);
    if (rows.size() < 2) throw IoError("history CSV needs a header and at least one row");
    const auto& header = rows[0];
    int iz0 = -1, iz1 = -1, iq = -1, iw = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "z0") iz0 = int(i);
        else if (header[i] == "z1") iz1 = int(i);
        else if (header[i] == "q") iq = int(i);
        else if (header[i] == "w") iw = int(i);
    }
    if (iz0 < 0 || iz1 < 0 || iq < 0 || iw < 0)
        throw IoError("history CSV must have z0,z1,q,w columns");
    std::vector<Workload> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t need = std::size_t(std::max({iz0, iz1, iq, iw}));
        if (row.size() <= need) throw IoError("short history CSV row");
        out.push_back({std::stod(row[std::size_t(iz0)]), std::stod(row[std::size_t(iz1)]),
                       std::stod(row[std::size_t(iq)]), std::stod(row[std::size_t(iw)])});
    }
    return out;
}

std::string records_csv_header() {
    return "center_id,rho,z0,z1,q,w,kl,cost_nominal,cost_robust,delta\n";
}

void append_records_csv(std::string& out, int center_id,
                        const std::vector<ComparisonRecord>& records) {
    for (const auto& r : records) {
        out += std::to_string(center_id);
        out += ",";
        out += format_double(r.rho);
        out += ",";
        out += format_double(r.observed.z0);
        out += ",";
        out += format_double(r.observed.z1);
        out += ",";
        out += format_double(r.observed.q);
        out += ",";
        out += format_double(r.observed.w);
        out += ",";
        out += format_double(r.kl_observed);
        out += ",";
        out += format_double(r.cost_nominal);
        out += ",";
        out += format_double(r.cost_robust);
        out += ",";
        out += format_double(r.delta);
        out += "\n";
    }
}

}  // namespace endure::io
