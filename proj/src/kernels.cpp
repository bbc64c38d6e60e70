#include "fmcm/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fmcm/errors.hpp"

namespace fmcm {

double graph_operator(const Params& params, const Eigen::Vector2d& grad,
                      const Eigen::Matrix2d& hess) {
    const double s2 = 1.0 + grad.squaredNorm();
    const double q = 1.0 / std::sqrt(s2);
    const double q3 = q * q * q;
    return -hess.trace() * q + grad.dot(hess * grad) * q3 + params.c0 -
           params.c * q;
}

namespace {

struct NodeStencil {
    double dC, dE, dW, dN, dS, dNE, dNW, dSE, dSW;
};

struct NodeEval {
    double residual;
    NodeStencil stencil;
};

NodeEval eval_node(const GridField& phi, const Params& params, int i, int j) {
    const double h = phi.h;
    const double C = phi.at(i, j);
    const double E = phi.at(i + 1, j), W = phi.at(i - 1, j);
    const double N = phi.at(i, j + 1), S = phi.at(i, j - 1);
    const double NE = phi.at(i + 1, j + 1), NW = phi.at(i - 1, j + 1);
    const double SE = phi.at(i + 1, j - 1), SW = phi.at(i - 1, j - 1);

    const double p1 = (E - W) / (2.0 * h);
    const double p2 = (N - S) / (2.0 * h);
    const double M11 = (E - 2.0 * C + W) / (h * h);
    const double M22 = (N - 2.0 * C + S) / (h * h);
    const double M12 = (NE + SW - NW - SE) / (4.0 * h * h);

    const double q = 1.0 / std::sqrt(1.0 + p1 * p1 + p2 * p2);
    const double q3 = q * q * q;
    const double q5 = q3 * q * q;
    const double A = M11 + M22;
    const double B = M11 * p1 * p1 + 2.0 * M12 * p1 * p2 + M22 * p2 * p2;

    NodeEval out;
    out.residual = -A * q + B * q3 + params.c0 - params.c * q;

    const double dM11 = -q + p1 * p1 * q3;
    const double dM22 = -q + p2 * p2 * q3;
    const double dM12 = 2.0 * p1 * p2 * q3;
    const double Mp1 = M11 * p1 + M12 * p2;
    const double Mp2 = M12 * p1 + M22 * p2;
    const double dp1 =
        p1 * q3 * (A + params.c) + 2.0 * Mp1 * q3 - 3.0 * p1 * q5 * B;
    const double dp2 =
        p2 * q3 * (A + params.c) + 2.0 * Mp2 * q3 - 3.0 * p2 * q5 * B;

    const double ih2 = 1.0 / (h * h);
    const double i2h = 1.0 / (2.0 * h);
    const double i4h2 = 1.0 / (4.0 * h * h);
    out.stencil.dC = -2.0 * ih2 * (dM11 + dM22);
    out.stencil.dE = dM11 * ih2 + dp1 * i2h;
    out.stencil.dW = dM11 * ih2 - dp1 * i2h;
    out.stencil.dN = dM22 * ih2 + dp2 * i2h;
    out.stencil.dS = dM22 * ih2 - dp2 * i2h;
    out.stencil.dNE = dM12 * i4h2;
    out.stencil.dSW = dM12 * i4h2;
    out.stencil.dNW = -dM12 * i4h2;
    out.stencil.dSE = -dM12 * i4h2;
    return out;
}

void require_interior(const GridField& field) {
    if (field.nx < 3 || field.ny < 3) {
        throw DomainError("grid has no interior nodes");
    }
}

}  // namespace

int interior_count(const GridField& field) {
    require_interior(field);
    return (field.nx - 2) * (field.ny - 2);
}

void assemble_residual(const GridField& phi, const Params& params, Exec exec,
                       std::vector<double>& out) {
    require_interior(phi);
    out.assign(phi.values.size(), 0.0);
    const int ny = phi.ny, nx = phi.nx;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            out[static_cast<std::size_t>(j) * nx + i] =
                eval_node(phi, params, i, j).residual;
        }
    }
    (void)exec;
}

void assemble_jacobian(const GridField& phi, const Params& params, Exec exec,
                       std::vector<Eigen::Triplet<double>>& out) {
    require_interior(phi);
    const int ny = phi.ny, nx = phi.nx;
    const int n = interior_count(phi);
    out.assign(static_cast<std::size_t>(n) * 9,
               Eigen::Triplet<double>(0, 0, 0.0));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const int row = interior_index(phi, i, j);
            const NodeStencil st = eval_node(phi, params, i, j).stencil;
            Eigen::Triplet<double>* slot = out.data() + 9 * row;
            int used = 0;
            auto emit = [&](int ii, int jj, double v) {
                if (ii >= 1 && ii <= nx - 2 && jj >= 1 && jj <= ny - 2) {
                    slot[used++] = Eigen::Triplet<double>(
                        row, interior_index(phi, ii, jj), v);
                }
            };
            emit(i, j, st.dC);
            emit(i + 1, j, st.dE);
            emit(i - 1, j, st.dW);
            emit(i, j + 1, st.dN);
            emit(i, j - 1, st.dS);
            emit(i + 1, j + 1, st.dNE);
            emit(i - 1, j + 1, st.dNW);
            emit(i + 1, j - 1, st.dSE);
            emit(i - 1, j - 1, st.dSW);
            for (; used < 9; ++used) {
                slot[used] = Eigen::Triplet<double>(row, row, 0.0);
            }
        }
    }
    (void)exec;
}

void sample_field(GridField& field,
                  const std::function<double(const Eigen::Vector2d&)>& fn,
                  Exec exec) {
    const int ny = field.ny, nx = field.nx;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            field.at(i, j) = fn(field.point(i, j));
        }
    }
    (void)exec;
}

}  // namespace fmcm
