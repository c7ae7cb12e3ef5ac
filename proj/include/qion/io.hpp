// io.hpp — serialization of states, matrices and series.
//
// Formats (all documented in docs/file-formats.md):
//  * state / matrix JSON: entries as [index, re, im] triplets, matrices in
//    column-major linear index order;
//  * raw matrix dump: little-endian header (magic, version, rows, cols,
//    route, epsilon, q) followed by column-major complex<double> data;
//  * CSV: 17-significant-digit %g values, comma separated, one header line.

#pragma once

#include "qion/coupling.hpp"
#include "qion/dynamics.hpp"
#include "qion/observables.hpp"
#include "qion/qstates.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace qion::io {

/// %.17g rendering used by every CSV writer (round-trips doubles exactly).
std::string format_g17(double v);

nlohmann::json state_to_json(const qstates::MotionalState& state);
nlohmann::json state_to_json(const qstates::JointState& state);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& mat, const std::string& kind);
nlohmann::json coupling_to_json(const coupling::CouplingMatrix& f);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Binary column-major dump with a fixed 48-byte header.
void write_matrix_raw(const std::filesystem::path& path, const coupling::CouplingMatrix& f);
/// Reads back a raw dump (round-trip check and cross-language diffing aid).
coupling::CouplingMatrix read_matrix_raw(const std::filesystem::path& path);

void write_inversion_csv(const std::filesystem::path& path,
                         const observables::InversionSeries& series);

/// Matrix layout with axis headers: first row is the re axis, first column
/// the im axis.
void write_qgrid_csv(const std::filesystem::path& path, const observables::QGrid& grid);
/// Flat alternative: one (re, im, q) row per grid cell.
void write_qgrid_flat_csv(const std::filesystem::path& path, const observables::QGrid& grid);

/// Columns: t, then re/im amplitude pairs in basis order (g-block first).
void write_trajectory_csv(const std::filesystem::path& path, const dynamics::Trajectory& traj);

} // namespace qion::io
