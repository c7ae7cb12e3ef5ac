#include "qion/io.hpp"
#include "qion/errors.hpp"
#include "qion/version.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace qion::io {

namespace {

constexpr char kRawMagic[8] = {'Q', 'I', 'O', 'N', 'M', 'A', 'T', '\0'};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

nlohmann::json amps_to_triplets(const Eigen::VectorXcd& amps) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index n = 0; n < amps.size(); ++n) {
        entries.push_back({n, amps(n).real(), amps(n).imag()});
    }
    return entries;
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json state_to_json(const qstates::MotionalState& state) {
    nlohmann::json j;
    j["format_version"] = kJsonFormatVersion;
    j["kind"] = "motional_state";
    j["dim"] = state.dim();
    j["entries"] = amps_to_triplets(state.amps);
    nlohmann::json meta;
    meta["construction"] =
        state.meta.kind == qstates::StateMeta::Kind::fock ? "fock" : "q_coherent";
    if (state.meta.kind == qstates::StateMeta::Kind::fock) {
        meta["n"] = state.meta.fock_n;
    } else {
        meta["alpha_re"] = state.meta.alpha.real();
        meta["alpha_im"] = state.meta.alpha.imag();
        meta["q"] = state.meta.q;
        meta["tail_mass"] = state.meta.tail_mass;
        meta["tail_tol"] = state.meta.tail_tol;
    }
    j["meta"] = meta;
    return j;
}

nlohmann::json state_to_json(const qstates::JointState& state) {
    nlohmann::json j;
    j["format_version"] = kJsonFormatVersion;
    j["kind"] = "joint_state";
    j["dim"] = state.dim();
    j["motional_dim"] = state.motional_dim;
    j["layout"] = "g_block_first";
    j["entries"] = amps_to_triplets(state.amps);
    return j;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& mat, const std::string& kind) {
    nlohmann::json j;
    j["format_version"] = kJsonFormatVersion;
    j["kind"] = kind;
    j["rows"] = mat.rows();
    j["cols"] = mat.cols();
    j["layout"] = "column_major";
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        for (Eigen::Index r = 0; r < mat.rows(); ++r) {
            entries.push_back({c * mat.rows() + r, mat(r, c).real(), mat(r, c).imag()});
        }
    }
    j["entries"] = entries;
    return j;
}

nlohmann::json coupling_to_json(const coupling::CouplingMatrix& f) {
    nlohmann::json j = matrix_to_json(f.mat, "coupling_matrix");
    j["route"] = coupling::route_name(f.route);
    j["epsilon"] = f.epsilon;
    j["q"] = f.q;
    j["pad"] = f.pad;
    j["series.tol"] = f.series.tol;
    j["series.max_terms"] = f.series.max_terms;
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path, std::ios::out);
    out << j.dump(2) << '\n';
    finish(out, path);
}

void write_matrix_raw(const std::filesystem::path& path, const coupling::CouplingMatrix& f) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    const std::uint32_t version = kRawMatrixFormatVersion;
    const std::uint32_t rows = static_cast<std::uint32_t>(f.mat.rows());
    const std::uint32_t cols = static_cast<std::uint32_t>(f.mat.cols());
    const std::uint32_t route = static_cast<std::uint32_t>(f.route);
    out.write(kRawMagic, sizeof(kRawMagic));
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    out.write(reinterpret_cast<const char*>(&route), sizeof(route));
    out.write(reinterpret_cast<const char*>(&f.epsilon), sizeof(f.epsilon));
    out.write(reinterpret_cast<const char*>(&f.q), sizeof(f.q));
    // Eigen stores column-major by default; dump the buffer as-is.
    out.write(reinterpret_cast<const char*>(f.mat.data()),
              static_cast<std::streamsize>(sizeof(qcore::Complex) * f.mat.size()));
    finish(out, path);
}

coupling::CouplingMatrix read_matrix_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    char magic[8];
    std::uint32_t version = 0, rows = 0, cols = 0, route = 0;
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kRawMagic, sizeof(magic)) != 0) {
        throw IoError("'" + path.string() + "' is not a raw matrix dump");
    }
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    in.read(reinterpret_cast<char*>(&route), sizeof(route));

    coupling::CouplingMatrix f;
    f.route = static_cast<coupling::Route>(route);
    in.read(reinterpret_cast<char*>(&f.epsilon), sizeof(f.epsilon));
    in.read(reinterpret_cast<char*>(&f.q), sizeof(f.q));
    f.dim = static_cast<int>(rows);
    f.mat.resize(rows, cols);
    in.read(reinterpret_cast<char*>(f.mat.data()),
            static_cast<std::streamsize>(sizeof(qcore::Complex) * f.mat.size()));
    if (!in) throw IoError("truncated raw matrix dump '" + path.string() + "'");
    return f;
}

void write_inversion_csv(const std::filesystem::path& path,
                         const observables::InversionSeries& series) {
    auto out = open_out(path, std::ios::out);
    out << "t,w\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_g17(series.times[k]) << ',' << format_g17(series.w[k]) << '\n';
    }
    finish(out, path);
}

void write_qgrid_csv(const std::filesystem::path& path, const observables::QGrid& grid) {
    auto out = open_out(path, std::ios::out);
    // Header row: blank corner, then the re axis.
    out << "im\\re";
    for (Eigen::Index j = 0; j < grid.re_axis.size(); ++j) {
        out << ',' << format_g17(grid.re_axis(j));
    }
    out << '\n';
    for (Eigen::Index i = 0; i < grid.im_axis.size(); ++i) {
        out << format_g17(grid.im_axis(i));
        for (Eigen::Index j = 0; j < grid.re_axis.size(); ++j) {
            out << ',' << format_g17(grid.values(i, j));
        }
        out << '\n';
    }
    finish(out, path);
}

void write_qgrid_flat_csv(const std::filesystem::path& path, const observables::QGrid& grid) {
    auto out = open_out(path, std::ios::out);
    out << "re,im,q\n";
    for (Eigen::Index i = 0; i < grid.im_axis.size(); ++i) {
        for (Eigen::Index j = 0; j < grid.re_axis.size(); ++j) {
            out << format_g17(grid.re_axis(j)) << ',' << format_g17(grid.im_axis(i)) << ','
                << format_g17(grid.values(i, j)) << '\n';
        }
    }
    finish(out, path);
}

void write_trajectory_csv(const std::filesystem::path& path, const dynamics::Trajectory& traj) {
    auto out = open_out(path, std::ios::out);
    out << "t";
    const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().size();
    for (Eigen::Index i = 0; i < dim; ++i) out << ",re_" << i << ",im_" << i;
    out << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << format_g17(traj.times[k]);
        for (Eigen::Index i = 0; i < dim; ++i) {
            out << ',' << format_g17(traj.states[k](i).real()) << ','
                << format_g17(traj.states[k](i).imag());
        }
        out << '\n';
    }
    finish(out, path);
}

} // namespace qion::io
