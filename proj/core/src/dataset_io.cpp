#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "agd/grid.hpp"

namespace agd {

namespace {

constexpr char kMagic[4] = {'A', 'G', 'D', '1'};
constexpr std::uint32_t kFlagGroups = 1u;

// Shortest decimal that round-trips an IEEE double.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& tok, int row, int col) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
        std::ostringstream msg;
        msg << "non-numeric cell at row " << row << ", column " << col << ": '" << tok << "'";
        throw parse_error(msg.str());
    }
    return v;
}

long parse_long(const std::string& tok, int row, int col) {
    const char* s = tok.c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0') {
        std::ostringstream msg;
        msg << "non-integer cell at row " << row << ", column " << col << ": '" << tok << "'";
        throw parse_error(msg.str());
    }
    return v;
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("load_dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": missing header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv(line);
    bool has_groups = false;
    if (header.size() == 3 && header[2] == "groups")
        has_groups = true;
    else if (header.size() != 2)
        throw parse_error(path + ": header must be 'n,p' or 'n,p,groups'");
    long n = parse_long(header[0], 0, 0);
    long p = parse_long(header[1], 0, 1);
    if (n < 1 || p < 1) throw parse_error(path + ": header declares non-positive n or p");

    Dataset ds;
    ds.X.resize(n, p);
    ds.y.resize(n);
    if (has_groups) ds.groups = Eigen::VectorXi(n);
    const std::size_t want = static_cast<std::size_t>(p) + 1 + (has_groups ? 1 : 0);
    for (long r = 0; r < n; ++r) {
        if (!std::getline(in, line)) {
            std::ostringstream msg;
            msg << path << ": expected " << n << " data rows, got " << r;
            throw parse_error(msg.str());
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_csv(line);
        if (toks.size() != want) {
            std::ostringstream msg;
            msg << path << ": row " << (r + 1) << " has " << toks.size() << " fields, expected "
                << want;
            throw parse_error(msg.str());
        }
        for (long c = 0; c < p; ++c)
            ds.X(r, c) = parse_double(toks[c], static_cast<int>(r + 1), static_cast<int>(c));
        ds.y(r) = parse_double(toks[p], static_cast<int>(r + 1), static_cast<int>(p));
        if (has_groups)
            (*ds.groups)(r) = static_cast<int>(
                parse_long(toks[p + 1], static_cast<int>(r + 1), static_cast<int>(p + 1)));
    }
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("save_dataset: cannot open " + path + " for writing");
    out << ds.n() << ',' << ds.p();
    if (ds.groups) out << ",groups";
    out << '\n';
    for (int r = 0; r < ds.n(); ++r) {
        for (int c = 0; c < ds.p(); ++c) out << format_double(ds.X(r, c)) << ',';
        out << format_double(ds.y(r));
        if (ds.groups) out << ',' << (*ds.groups)(r);
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path);
}

Dataset load_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("load_dataset: cannot open " + path);
    char magic[4];
    std::uint32_t n = 0, p = 0, flags = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&p), 4);
    in.read(reinterpret_cast<char*>(&flags), 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw parse_error(path + ": bad raw_f64 header");
    if (n == 0 || p == 0) throw parse_error(path + ": header declares zero n or p");
    Dataset ds;
    ds.X.resize(n, p);
    std::vector<double> row(p);
    for (std::uint32_t r = 0; r < n; ++r) {
        in.read(reinterpret_cast<char*>(row.data()), sizeof(double) * p);
        for (std::uint32_t c = 0; c < p; ++c) ds.X(r, c) = row[c];
    }
    ds.y.resize(n);
    in.read(reinterpret_cast<char*>(ds.y.data()), sizeof(double) * n);
    if (flags & kFlagGroups) {
        std::vector<double> g(n);
        in.read(reinterpret_cast<char*>(g.data()), sizeof(double) * n);
        ds.groups = Eigen::VectorXi(n);
        for (std::uint32_t i = 0; i < n; ++i) (*ds.groups)(i) = static_cast<int>(g[i]);
    }
    if (!in) throw parse_error(path + ": truncated raw_f64 payload");
    return ds;
}

void save_raw(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("save_dataset: cannot open " + path + " for writing");
    std::uint32_t n = static_cast<std::uint32_t>(ds.n());
    std::uint32_t p = static_cast<std::uint32_t>(ds.p());
    std::uint32_t flags = ds.groups ? kFlagGroups : 0;
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&p), 4);
    out.write(reinterpret_cast<const char*>(&flags), 4);
    std::vector<double> row(p);
    for (std::uint32_t r = 0; r < n; ++r) {
        for (std::uint32_t c = 0; c < p; ++c) row[c] = ds.X(r, c);
        out.write(reinterpret_cast<const char*>(row.data()), sizeof(double) * p);
    }
    out.write(reinterpret_cast<const char*>(ds.y.data()), sizeof(double) * n);
    if (ds.groups) {
        std::vector<double> g(n);
        for (std::uint32_t i = 0; i < n; ++i) g[i] = static_cast<double>((*ds.groups)(i));
        out.write(reinterpret_cast<const char*>(g.data()), sizeof(double) * n);
    }
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path);
}

}  // namespace

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    Dataset ds = format == DatasetFormat::csv ? load_csv(path) : load_raw(path);
    ds.validate();
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format) {
    ds.validate();
    if (format == DatasetFormat::csv)
        save_csv(ds, path);
    else
        save_raw(ds, path);
}

}  // namespace agd
