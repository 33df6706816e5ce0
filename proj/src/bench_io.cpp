#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "abo/bench.hpp"
#include "abo/errors.hpp"
#include "abo/rng.hpp"

namespace abo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::filesystem::path& path) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::runtime_error(path.string() + ": malformed number '" + s + "'");
    }
    return v;
}

template <typename Writer>
void write_atomically(const std::filesystem::path& path, Writer&& writer) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        writer(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot write " + path.string());
    }
}

} // namespace

std::vector<std::string> trace_header(int dim) {
    std::vector<std::string> h{"iter"};
    for (int i = 0; i < dim; ++i) h.push_back("x_" + std::to_string(i));
    for (const char* c : {"y", "beta_sqrt", "g", "b", "h"}) h.emplace_back(c);
    for (int i = 0; i < dim; ++i) h.push_back("theta_" + std::to_string(i));
    h.emplace_back("simple_regret");
    h.emplace_back("cumulative_regret");
    return h;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    const auto header = trace_header(trace.dim);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const TraceRecord& r : trace.records) {
        out << r.iter;
        for (Eigen::Index i = 0; i < r.x.size(); ++i) out << ',' << fmt(r.x(i));
        out << ',' << fmt(r.y) << ',' << fmt(r.beta_sqrt) << ',' << fmt(r.g) << ',' << fmt(r.b) << ',' << fmt(r.h);
        for (Eigen::Index i = 0; i < r.theta.size(); ++i) out << ',' << fmt(r.theta(i));
        out << ',' << fmt(r.simple_regret) << ',' << fmt(r.cumulative_regret) << '\n';
    }
}

void emit_trace(const RunTrace& trace, const std::filesystem::path& path) {
    write_atomically(path, [&](std::ostream& out) { write_trace_csv(trace, out); });
}

RunTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
    const auto header = split_csv(line);
    int dim = 0;
    for (const auto& h : header) dim += h.rfind("x_", 0) == 0 ? 1 : 0;
    if (header != trace_header(dim)) throw std::runtime_error(path.string() + ": unexpected header");

    RunTrace trace;
    trace.dim = dim;
    trace.algorithm = path.stem().string();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) throw std::runtime_error(path.string() + ": wrong column count");
        TraceRecord r;
        std::size_t c = 0;
        r.iter = static_cast<int>(to_double(cells[c++], path));
        r.x.resize(dim);
        for (int i = 0; i < dim; ++i) r.x(i) = to_double(cells[c++], path);
        r.y = to_double(cells[c++], path);
        r.beta_sqrt = to_double(cells[c++], path);
        r.g = to_double(cells[c++], path);
        r.b = to_double(cells[c++], path);
        r.h = to_double(cells[c++], path);
        r.theta.resize(dim);
        for (int i = 0; i < dim; ++i) r.theta(i) = to_double(cells[c++], path);
        r.simple_regret = to_double(cells[c++], path);
        r.cumulative_regret = to_double(cells[c++], path);
        trace.records.push_back(std::move(r));
    }
    return trace;
}

std::vector<SummaryRow> summarize_traces(const std::vector<RunTrace>& traces) {
    std::vector<SummaryRow> rows;
    for (std::size_t k = 0;; ++k) {
        std::vector<double> simple;
        std::vector<double> cumulative;
        for (const RunTrace& tr : traces) {
            const std::size_t idx = tr.init_count() + k;
            if (idx < tr.records.size()) {
                simple.push_back(tr.records[idx].simple_regret);
                cumulative.push_back(tr.records[idx].cumulative_regret);
            }
        }
        if (simple.empty()) break;
        auto stats = [](const std::vector<double>& v, double& mean, double& sd) {
            const double n = static_cast<double>(v.size());
            mean = 0.0;
            for (double x : v) mean += x;
            mean /= n;
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        };
        SummaryRow row;
        row.iter = static_cast<int>(k) + 1;
        row.n = static_cast<int>(simple.size());
        stats(simple, row.simple_mean, row.simple_std);
        stats(cumulative, row.cumulative_mean, row.cumulative_std);
        rows.push_back(row);
    }
    return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "# rng=" << kRngAlgorithm << '\n';
    out << "iter,n,simple_mean,simple_std,cumulative_mean,cumulative_std\n";
    for (const SummaryRow& r : rows) {
        out << r.iter << ',' << r.n << ',' << fmt(r.simple_mean) << ',' << fmt(r.simple_std) << ','
            << fmt(r.cumulative_mean) << ',' << fmt(r.cumulative_std) << '\n';
    }
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<SummaryRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 6) throw std::runtime_error(path.string() + ": wrong column count");
        SummaryRow r;
        r.iter = static_cast<int>(to_double(cells[0], path));
        r.n = static_cast<int>(to_double(cells[1], path));
        r.simple_mean = to_double(cells[2], path);
        r.simple_std = to_double(cells[3], path);
        r.cumulative_mean = to_double(cells[4], path);
        r.cumulative_std = to_double(cells[5], path);
        rows.push_back(r);
    }
    return rows;
}

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    write_atomically(path, [&](std::ostream& out) { write_summary_csv(rows, out); });
}

} // namespace abo
