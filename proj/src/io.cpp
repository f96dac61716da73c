#include "qgstorm/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qgstorm::io {

static_assert(std::endian::native == std::endian::little,
              "QGSF writer assumes a little-endian host");

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

constexpr char kMagic[4] = {'Q', 'G', 'S', 'F'};

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }
uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const SpectralField& f, double time) {
    os.write(kMagic, 4);
    put_u32(os, 1u);
    put_u32(os, uint32_t(f.modes_x()));
    put_u32(os, uint32_t(f.modes_y()));
    put_f64(os, time);
    for (int m = 0; m < f.modes_x(); ++m)
        for (int n = 0; n < f.modes_y(); ++n) put_f64(os, f.coeffs(m, n));
}

void write_snapshot_file(const std::string& path, const SpectralField& f, double time) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    write_snapshot(os, f, time);
    if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

Snapshot read_snapshot(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a QGSF snapshot (bad magic)");
    const uint32_t version = get_u32(is);
    if (version != 1u) throw std::runtime_error("unsupported QGSF version");
    const uint32_t mx = get_u32(is), my = get_u32(is);
    if (mx == 0 || my == 0 || mx > 1u << 20 || my > 1u << 20)
        throw std::runtime_error("corrupt QGSF header");
    Snapshot snap;
    snap.time = get_f64(is);
    snap.field.coeffs.resize(mx, my);
    for (uint32_t m = 0; m < mx; ++m)
        for (uint32_t n = 0; n < my; ++n) snap.field.coeffs(m, n) = get_f64(is);
    if (!is) throw std::runtime_error("truncated QGSF snapshot");
    return snap;
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot file: " + path);
    return read_snapshot(is);
}

std::string trajectory_csv(const TrajectoryRecord& rec, const MonitorReport& monitor,
                           const std::vector<std::string>& metadata) {
    std::ostringstream os;
    for (const auto& line : metadata) os << "# " << line << '\n';
    if (!rec.physical) os << "# warning: r = 0 is outside the model hypotheses\n";
    if (!rec.jacobian_enabled) os << "# warning: jacobian disabled (non-physical test hook)\n";
    if (rec.aborted) os << "# aborted: " << rec.abort_reason << '\n';
    os << "t,l2,h1,sup_est,drift_l2,bound,A,B\n";
    for (size_t k = 0; k < rec.size(); ++k) {
        const double bound =
            monitor.bound_log.size() == rec.size()
                ? (monitor.bound_log[k] > 700.0 ? std::numeric_limits<double>::infinity()
                                                : std::exp(monitor.bound_log[k]))
                : 0.0;
        const double a = monitor.a.size() == rec.size() ? monitor.a[k] : 0.0;
        const double b = monitor.b.size() == rec.size() ? monitor.b[k] : 0.0;
        os << format_double(rec.t[k]) << ',' << format_double(rec.l2[k]) << ','
           << format_double(rec.h1[k]) << ',' << format_double(rec.sup_est[k]) << ','
           << format_double(rec.drift_l2[k]) << ',' << format_double(bound) << ','
           << format_double(a) << ',' << format_double(b) << '\n';
    }
    return os.str();
}

std::string ensemble_csv(const EnsembleStats& stats, const std::vector<std::string>& metadata) {
    std::ostringstream os;
    for (const auto& line : metadata) os << "# " << line << '\n';
    os << "t,mean_l2,var_l2,ci_l2,mean_sup,var_sup,ci_sup,n_blowup\n";
    for (size_t k = 0; k < stats.t.size(); ++k) {
        os << format_double(stats.t[k]) << ',' << format_double(stats.mean_l2[k]) << ','
           << format_double(stats.var_l2[k]) << ',' << format_double(stats.ci_l2[k]) << ','
           << format_double(stats.mean_sup[k]) << ',' << format_double(stats.var_sup[k]) << ','
           << format_double(stats.ci_sup[k]) << ',' << stats.n_blowup[k] << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open file for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<double>> parse_csv(const std::string& content) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(content);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // header
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qgstorm::io
