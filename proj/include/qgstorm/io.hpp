#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgstorm/ensemble.hpp"
#include "qgstorm/verification.hpp"

namespace qgstorm::io {

// Full-precision decimal form that round-trips through strtod.
std::string format_double(double v);

// Binary field snapshot: magic "QGSF", u32 version = 1, u32 M, u32 N,
// f64 time, then M*N coefficients f64 little-endian, row-major in m (outer)
// and n (inner).
void write_snapshot(std::ostream& os, const SpectralField& f, double time);
void write_snapshot_file(const std::string& path, const SpectralField& f, double time);
struct Snapshot {
    SpectralField field;
    double time = 0.0;
};
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot_file(const std::string& path);

// Trajectory CSV: metadata as '#'-prefixed lines, then
// t,l2,h1,sup_est,drift_l2,bound,A,B with one row per record time.
std::string trajectory_csv(const TrajectoryRecord& rec, const MonitorReport& monitor,
                           const std::vector<std::string>& metadata);

// Ensemble summary CSV: t,mean_l2,var_l2,ci_l2,mean_sup,var_sup,ci_sup,n_blowup.
std::string ensemble_csv(const EnsembleStats& stats, const std::vector<std::string>& metadata);

void write_text_file(const std::string& path, const std::string& content);

// Numeric rows of a CSV body (skips '#' comments and the header line).
std::vector<std::vector<double>> parse_csv(const std::string& content);

}  // namespace qgstorm::io
