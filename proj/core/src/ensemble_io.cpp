#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

#include "vmrf/error.hpp"
#include "vmrf/path_engine.hpp"

namespace vmrf {

static_assert(std::endian::native == std::endian::little, "ensemble files are written in host order, which must be little-endian");

namespace {

constexpr char kMagic[4] = {'G', 'V', 'P', 'E'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) fail(ErrorCode::io_error, "truncated ensemble file");
    return v;
}

}  // namespace

void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(ensemble.kind));
    put(out, ensemble.grid.horizon());
    put(out, static_cast<std::uint64_t>(ensemble.grid.steps()));
    put(out, static_cast<std::uint64_t>(ensemble.paths()));
    put(out, ensemble.seed);
    out.write(reinterpret_cast<const char*>(ensemble.values.data()),
              static_cast<std::streamsize>(ensemble.values.size() * sizeof(double)));
    if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

PathEnsemble read_ensemble_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) fail(ErrorCode::io_error, path + " is not an ensemble file");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion) fail(ErrorCode::io_error, "unsupported ensemble file version");
    const auto kind = get<std::uint32_t>(in);
    if (kind > static_cast<std::uint32_t>(EnsembleKind::state_path)) fail(ErrorCode::io_error, "unknown ensemble kind");
    const auto horizon = get<double>(in);
    const auto steps = get<std::uint64_t>(in);
    const auto paths = get<std::uint64_t>(in);
    const auto seed = get<std::uint64_t>(in);
    if (steps < 1 || steps > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
        fail(ErrorCode::io_error, "corrupt step count in ensemble file");
    PathEnsemble ens;
    ens.grid = TimeGrid(horizon, static_cast<int>(steps));
    ens.kind = static_cast<EnsembleKind>(kind);
    ens.seed = seed;
    ens.values.resize(static_cast<Eigen::Index>(paths), static_cast<Eigen::Index>(steps + 1));
    in.read(reinterpret_cast<char*>(ens.values.data()), static_cast<std::streamsize>(ens.values.size() * sizeof(double)));
    if (!in) fail(ErrorCode::io_error, "truncated ensemble body in " + path);
    return ens;
}

void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
    out << "path";
    for (int k = 0; k <= ensemble.grid.steps(); ++k) out << ",t" << k;
    out << "\r\n" << std::setprecision(17);
    for (Eigen::Index p = 0; p < ensemble.paths(); ++p) {
        out << p;
        for (Eigen::Index k = 0; k < ensemble.values.cols(); ++k) out << ',' << ensemble.values(p, k);
        out << "\r\n";
    }
    if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

}  // namespace vmrf
