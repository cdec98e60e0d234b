#include "otfbandit/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace otf {

namespace fs = std::filesystem;

namespace {

std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        body(out);
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("error writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at " + path.string());
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_field(const std::string& text, const fs::path& path, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return v;
}

std::vector<std::vector<double>> read_rows(const fs::path& path, const std::string& header, std::size_t width) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw std::runtime_error(path.string() + ": expected header '" + header + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != width) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
        }
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_field(f, path, line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_traces_csv(const std::vector<RegretTrace>& traces, const fs::path& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "run_id,t,cum_regret\n";
        for (const auto& tr : traces) {
            for (std::size_t t = 0; t < tr.cumulative.size(); ++t) {
                out << tr.run_id << ',' << (t + 1) << ',' << format_value(tr.cumulative[t]) << '\n';
            }
        }
    });
}

void write_summary_csv(const SummaryStats& stats, const fs::path& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "t,mean_regret,std_regret\n";
        for (std::size_t t = 0; t < stats.mean.size(); ++t) {
            out << (t + 1) << ',' << format_value(stats.mean[t]) << ',' << format_value(stats.stddev[t]) << '\n';
        }
    });
}

void emit_csv(const std::vector<RegretTrace>& traces, const SummaryStats& stats, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    write_traces_csv(traces, dir / kTraceFile);
    write_summary_csv(stats, dir / kSummaryFile);
}

std::vector<RegretTrace> read_traces_csv(const fs::path& path) {
    std::vector<RegretTrace> traces;
    for (const auto& row : read_rows(path, "run_id,t,cum_regret", 3)) {
        const auto run = static_cast<std::size_t>(row[0]);
        const auto t = static_cast<std::size_t>(row[1]);
        if (traces.empty() || traces.back().run_id != run) traces.push_back(RegretTrace{run, {}});
        if (t != traces.back().cumulative.size() + 1) {
            throw std::runtime_error(path.string() + ": rounds of run " + std::to_string(run) + " are not contiguous");
        }
        traces.back().cumulative.push_back(row[2]);
    }
    return traces;
}

SummaryStats read_summary_csv(const fs::path& path) {
    SummaryStats stats;
    for (const auto& row : read_rows(path, "t,mean_regret,std_regret", 3)) {
        stats.mean.push_back(row[1]);
        stats.stddev.push_back(row[2]);
    }
    return stats;
}

void write_metadata(const Metadata& entries, const fs::path& path) {
    atomic_write(path, [&](std::ostream& out) {
        for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
    });
}

Metadata read_metadata(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Metadata entries;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        entries.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return entries;
}

} // namespace otf
