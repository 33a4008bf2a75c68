#include "ceildyn/harness.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <json.hpp>
#include <openssl/evp.h>

#include "ceildyn/chain.hpp"
#include "ceildyn/mult.hpp"
#include "ceildyn/parallel.hpp"
#include "ceildyn/window.hpp"

namespace ceildyn {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    if (name == "bfile") return OutputFormat::bfile;
    if (name == "table") return OutputFormat::table;
    throw std::invalid_argument("unknown format '" + name + "'");
}

std::string format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::bfile: return "bfile";
        case OutputFormat::table: return "table";
    }
    return "table";
}

std::string ExperimentConfig::canonical() const {
    ojson j;
    j["command"] = command;
    j["num"] = num ? ojson(*num) : ojson(nullptr);
    j["den"] = den ? ojson(*den) : ojson(nullptr);
    j["r"] = r ? ojson(*r) : ojson(nullptr);
    j["offsets"] = offsets;
    j["scan"] = scan;
    j["depth"] = depth;
    j["window"] = window;
    j["auto_grow"] = auto_grow;
    j["max_steps"] = max_steps;
    j["format"] = format_name(format);
    j["extra"] = extra;
    return j.dump();
}

void ExperimentConfig::validate() const {
    if (command.empty()) throw std::invalid_argument("missing command");
    if (workers < 1) throw std::invalid_argument("workers must be positive");
    if (den) {
        BigInt d(*den);
        if (d < 1) throw std::invalid_argument("den must be positive");
    }
}

std::string format_rows(const std::vector<Row>& rows, OutputFormat format) {
    std::ostringstream out;
    switch (format) {
        case OutputFormat::table:
            for (const Row& r : rows) {
                if (rows.size() > 1) out << r.input << ' ';
                if (r.unresolved) out << "theta=unresolved";
                else if (r.theta) out << "theta=" << *r.theta;
                if (r.reached) out << " reached=" << *r.reached;
                if (r.digits) out << " digits=" << *r.digits;
                out << '\n';
            }
            break;
        case OutputFormat::csv:
            out << "input,theta,reached,digits,unresolved\n";
            for (const Row& r : rows) {
                out << r.input << ',' << (r.theta ? std::to_string(*r.theta) : "") << ',' << r.reached.value_or("") << ','
                    << (r.digits ? std::to_string(*r.digits) : "") << ',' << (r.unresolved ? "true" : "false") << '\n';
            }
            break;
        case OutputFormat::json: {
            ojson arr = ojson::array();
            for (const Row& r : rows) {
                ojson o;
                o["input"] = r.input;
                o["theta"] = r.theta ? ojson(*r.theta) : ojson(nullptr);
                if (r.reached) o["reached"] = *r.reached;
                if (r.digits) o["digits"] = *r.digits;
                o["unresolved"] = r.unresolved;
                arr.push_back(std::move(o));
            }
            out << arr.dump() << '\n';
            break;
        }
        case OutputFormat::bfile: {
            std::vector<std::pair<BigInt, BigInt>> seq;
            for (const Row& r : rows) {
                if (!r.index) throw std::invalid_argument("row '" + r.input + "' has no b-file index");
                if (r.unresolved || !r.theta) throw std::invalid_argument("row '" + r.input + "' is unresolved");
                seq.emplace_back(*r.index, BigInt(static_cast<unsigned long>(*r.theta)));
            }
            out << export_bfile(seq);
            break;
        }
    }
    return out.str();
}

std::string export_bfile(const std::vector<std::pair<BigInt, BigInt>>& sequence) {
    std::string out;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (i > 0 && sequence[i].first <= sequence[i - 1].first) throw std::invalid_argument("b-file indices must increase");
        const std::string value = sequence[i].second.get_str();
        const std::size_t digits = value.size() - (value[0] == '-' ? 1 : 0);
        if (digits > 1000) throw std::invalid_argument("b-file value exceeds 1000 digits");
        out += sequence[i].first.get_str();
        out += ' ';
        out += value;
        out += '\n';
    }
    return out;
}

RecordKind parse_record_kind(const std::string& name) {
    if (name == "theta_d3") return RecordKind::theta_d3;
    if (name == "theta_succ") return RecordKind::theta_succ;
    if (name == "theta_mult") return RecordKind::theta_mult;
    throw std::invalid_argument("unknown record kind '" + name + "'");
}

RecordList records(RecordKind kind, std::uint64_t bound, std::uint64_t window, unsigned workers) {
    std::int64_t lo = 1;
    std::function<std::optional<std::uint64_t>(std::int64_t)> theta;
    switch (kind) {
        case RecordKind::theta_d3:
            theta = [window](std::int64_t l) { return theta_of(static_cast<std::uint64_t>(l), 3, window); };
            break;
        case RecordKind::theta_succ:
            theta = [window](std::int64_t d) -> std::optional<std::uint64_t> {
                if (d == 1) return 0;
                StoppingReport rep = stopping_time_windowed(BigInt(static_cast<long>(d + 1)), static_cast<std::uint64_t>(d),
                                                            std::max<std::uint64_t>(window, 1), true);
                if (!rep.resolved()) return std::nullopt;
                return rep.steps();
            };
            break;
        case RecordKind::theta_mult: {
            lo = 0;
            const Rational r = Rational::normalize(4, 3);
            const std::uint64_t cap = window > 0 ? window * 1000 : 100000;
            theta = [r, cap](std::int64_t n) -> std::optional<std::uint64_t> {
                StoppingReport rep = stopping_time_mult(r, BigInt(static_cast<long>(n)), cap);
                if (!rep.resolved()) return std::nullopt;
                return rep.steps();
            };
            break;
        }
    }
    RecordList out;
    if (static_cast<std::int64_t>(bound) < lo) return out;
    auto values = parallel_range(lo, static_cast<std::int64_t>(bound), workers, theta);
    out.scanned = values.size();
    std::optional<std::uint64_t> best;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const BigInt arg(static_cast<long>(lo + static_cast<std::int64_t>(i)));
        if (!values[i]) {
            out.unresolved.push_back(arg);
            continue;
        }
        if (!best || *values[i] > *best) {
            best = values[i];
            out.entries.emplace_back(arg, *values[i]);
        }
    }
    return out;
}

std::string cache_key(const ExperimentConfig& config) {
    const std::string payload = config.canonical() + '\n' + kEngineVersion;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

std::string cached_run(const ExperimentConfig& config, const std::function<std::string()>& compute, bool* hit) {
    if (hit) *hit = false;
    if (config.cache_dir.empty()) return compute();
    const fs::path dir(config.cache_dir);
    const fs::path file = dir / (cache_key(config) + ".json");
    if (std::ifstream in{file}) {
        try {
            ojson stored = ojson::parse(in);
            if (stored.at("config").get<std::string>() == config.canonical() && stored.at("engine") == kEngineVersion) {
                if (hit) *hit = true;
                return stored.at("output").get<std::string>();
            }
        } catch (const nlohmann::json::exception&) {
            // unreadable entry; recompute and overwrite
        }
    }
    std::string output = compute();
    fs::create_directories(dir);
    ojson entry;
    entry["config"] = config.canonical();
    entry["engine"] = kEngineVersion;
    entry["output"] = output;
    fs::path tmp = file;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        o << entry.dump();
        if (!o) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    fs::rename(tmp, file);
    return output;
}

}  // namespace ceildyn
