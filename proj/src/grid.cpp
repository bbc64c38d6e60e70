#include "fmcm/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fmcm {

namespace {

int span_count(double a, double b, double h) {
    const double raw = (b - a) / h;
    const double rounded = std::round(raw);
    if (rounded < 1.0 || std::abs(raw - rounded) > 1e-9) {
        throw DomainError("grid extent is not an integral multiple of h");
    }
    return static_cast<int>(rounded);
}

}  // namespace

GridField make_grid(double a1, double b1, double a2, double b2, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid spacing must be positive");
    if (!(b1 > a1) || !(b2 > a2)) throw DomainError("grid rectangle is empty");
    GridField field;
    field.a1 = a1;
    field.a2 = a2;
    field.h = h;
    field.nx = span_count(a1, b1, h) + 1;
    field.ny = span_count(a2, b2, h) + 1;
    field.values.assign(static_cast<std::size_t>(field.nx) * field.ny, 0.0);
    return field;
}

void fill(GridField& field, const std::function<double(const Eigen::Vector2d&)>& fn) {
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            field.at(i, j) = fn(field.point(i, j));
        }
    }
}

void fill_boundary(GridField& field,
                   const std::function<double(const Eigen::Vector2d&)>& fn) {
    for (int i = 0; i < field.nx; ++i) {
        field.at(i, 0) = fn(field.point(i, 0));
        field.at(i, field.ny - 1) = fn(field.point(i, field.ny - 1));
    }
    for (int j = 0; j < field.ny; ++j) {
        field.at(0, j) = fn(field.point(0, j));
        field.at(field.nx - 1, j) = fn(field.point(field.nx - 1, j));
    }
}

void write_grid_csv(std::ostream& os, const GridField& field) {
    os << "x1,x2,value\n";
    char buf[96];
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", field.x1(i),
                          field.x2(j), field.at(i, j));
            os << buf;
        }
    }
}

GridField read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x1,x2,value", 0) != 0) {
        throw ConfigError("grid csv: missing x1,x2,value header");
    }
    std::vector<double> xs, ys, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x, y, v;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3) {
            throw ConfigError("grid csv: malformed row '" + line + "'");
        }
        xs.push_back(x);
        ys.push_back(y);
        vals.push_back(v);
    }
    if (vals.empty()) throw ConfigError("grid csv: no data rows");

    int nx = 0;
    while (nx < static_cast<int>(ys.size()) && ys[nx] == ys[0]) ++nx;
    if (nx < 1 || vals.size() % nx != 0) {
        throw ConfigError("grid csv: rows do not form a rectangular grid");
    }
    const int ny = static_cast<int>(vals.size()) / nx;
    GridField field;
    field.a1 = xs[0];
    field.a2 = ys[0];
    field.h = nx > 1 ? xs[1] - xs[0] : (ny > 1 ? ys[static_cast<std::size_t>(nx)] - ys[0] : 1.0);
    field.nx = nx;
    field.ny = ny;
    field.values = std::move(vals);
    return field;
}

namespace {

constexpr char kGridMagic[8] = {'F', 'M', 'C', 'M', 'G', 'R', 'D', '1'};

void put_bytes(std::ostream& os, const void* src, std::size_t n) {
    os.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
}

void get_bytes(std::istream& is, void* dst, std::size_t n) {
    if (!is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n))) {
        throw ConfigError("grid binary: truncated stream");
    }
}

}  // namespace

void write_grid_binary(std::ostream& os, const GridField& field) {
    put_bytes(os, kGridMagic, sizeof kGridMagic);
    const std::int32_t nx = field.nx, ny = field.ny;
    put_bytes(os, &nx, 4);
    put_bytes(os, &ny, 4);
    put_bytes(os, &field.h, 8);
    put_bytes(os, &field.a1, 8);
    put_bytes(os, &field.a2, 8);
    put_bytes(os, field.values.data(), field.values.size() * 8);
}

GridField read_grid_binary(std::istream& is) {
    char magic[8];
    get_bytes(is, magic, 8);
    if (std::memcmp(magic, kGridMagic, 8) != 0) {
        throw ConfigError("grid binary: bad magic");
    }
    std::int32_t nx = 0, ny = 0;
    get_bytes(is, &nx, 4);
    get_bytes(is, &ny, 4);
    if (nx < 1 || ny < 1 || static_cast<std::int64_t>(nx) * ny > (1 << 28)) {
        throw ConfigError("grid binary: implausible dimensions");
    }
    GridField field;
    field.nx = nx;
    field.ny = ny;
    get_bytes(is, &field.h, 8);
    get_bytes(is, &field.a1, 8);
    get_bytes(is, &field.a2, 8);
    field.values.resize(static_cast<std::size_t>(nx) * ny);
    get_bytes(is, field.values.data(), field.values.size() * 8);
    return field;
}

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
    std::ifstream is(path, mode);
    if (!is) throw ConfigError("cannot open for reading: " + path);
    return is;
}

}  // namespace

void save_grid_csv(const std::string& path, const GridField& field) {
    auto os = open_out(path, std::ios::out);
    write_grid_csv(os, field);
}

GridField load_grid_csv(const std::string& path) {
    auto is = open_in(path, std::ios::in);
    return read_grid_csv(is);
}

void save_grid_binary(const std::string& path, const GridField& field) {
    auto os = open_out(path, std::ios::out | std::ios::binary);
    write_grid_binary(os, field);
}

GridField load_grid_binary(const std::string& path) {
    auto is = open_in(path, std::ios::in | std::ios::binary);
    return read_grid_binary(is);
}

}  // namespace fmcm
