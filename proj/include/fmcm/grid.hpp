#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fmcm/errors.hpp"

namespace fmcm {

/**
 * Uniform node-centered grid over the rectangle [a1, b1] x [a2, b2] with
 * spacing h in both directions.  values is row-major over x2 rows:
 * index (i, j) = j * nx + i holds the value at (a1 + i h, a2 + j h).
 * The outermost rim carries Dirichlet data and is left untouched by solves.
 */
struct GridField {
    double a1 = 0.0, a2 = 0.0;
    double h = 1.0;
    int nx = 0, ny = 0;
    std::vector<double> values;

    double x1(int i) const { return a1 + i * h; }
    double x2(int j) const { return a2 + j * h; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * nx + i];
    }
    Eigen::Vector2d point(int i, int j) const { return {x1(i), x2(j)}; }
};

/// Grid over [a1, b1] x [a2, b2]; (b - a)/h must be integral within 1e-9.
GridField make_grid(double a1, double b1, double a2, double b2, double h);

/// Evaluates fn at every node.
void fill(GridField& field, const std::function<double(const Eigen::Vector2d&)>& fn);

/// Evaluates fn on the rim only.
void fill_boundary(GridField& field,
                   const std::function<double(const Eigen::Vector2d&)>& fn);

/// CSV export, header "x1,x2,value", one row per node, %.17g round-trip
/// precision, row-major in j then i.
void write_grid_csv(std::ostream& os, const GridField& field);
GridField read_grid_csv(std::istream& is);

/// Compact binary format: magic "FMCMGRD1", int32 nx, ny, float64 h, a1, a2,
/// then nx*ny float64 values row-major, everything little-endian.
void write_grid_binary(std::ostream& os, const GridField& field);
GridField read_grid_binary(std::istream& is);

void save_grid_csv(const std::string& path, const GridField& field);
GridField load_grid_csv(const std::string& path);
void save_grid_binary(const std::string& path, const GridField& field);
GridField load_grid_binary(const std::string& path);

}  // namespace fmcm
