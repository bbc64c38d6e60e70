/**
 * Timing harness for the grid kernels: serial versus OpenMP execution of
 * residual assembly, Jacobian assembly, and field sampling on a large grid.
 * Reports the best wall time over a few repetitions and cross-checks that
 * both paths produce bitwise identical output.
 */
#include <chrono>
#include <cstdio>
#include <numbers>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SparseCore>

#include "fmcm/kernels.hpp"
#include "fmcm/params.hpp"
#include "fmcm/subsolution.hpp"

using namespace fmcm;
namespace nb = std::numbers;

namespace {

double best_of(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-18s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                same ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    double half = 20.0;
    double h = 0.1;
    int reps = 5;
    CLI::App app{"grid kernel timings, serial vs parallel"};
    app.add_option("--half", half, "domain half-width, grid [-half,half]^2");
    app.add_option("--spacing", h, "grid spacing");
    app.add_option("--reps", reps, "repetitions, best time is kept");
    CLI11_PARSE(app, argc, argv);

    const Params p = make_params(nb::pi / 4, 1.0, 3);
    SphereMeasure mu;
    mu.add_atom_at_angle(0.4, 1.5);
    mu.add_atom_at_angle(2.0, 0.7);
    mu.add_atom_at_angle(4.4, 2.2);
    auto fn = [&](const Eigen::Vector2d& x) { return eval_phi_star(mu, p, x); };

    GridField grid = make_grid(-half, half, -half, half, h);
    std::printf("grid %d x %d (%d interior nodes), %d reps\n\n", grid.nx, grid.ny,
                interior_count(grid), reps);

    GridField filled_s = grid, filled_p = grid;
    const double sample_s =
        best_of(reps, [&] { sample_field(filled_s, fn, Exec::Serial); });
    const double sample_p =
        best_of(reps, [&] { sample_field(filled_p, fn, Exec::Parallel); });
    report("sample_field", sample_s, sample_p,
           filled_s.values == filled_p.values);

    std::vector<double> res_s, res_p;
    const double residual_s = best_of(
        reps, [&] { assemble_residual(filled_s, p, Exec::Serial, res_s); });
    const double residual_p = best_of(
        reps, [&] { assemble_residual(filled_s, p, Exec::Parallel, res_p); });
    report("assemble_residual", residual_s, residual_p, res_s == res_p);

    std::vector<Eigen::Triplet<double>> tr_s, tr_p;
    const double jacobian_s = best_of(
        reps, [&] { assemble_jacobian(filled_s, p, Exec::Serial, tr_s); });
    const double jacobian_p = best_of(
        reps, [&] { assemble_jacobian(filled_s, p, Exec::Parallel, tr_p); });
    bool same = tr_s.size() == tr_p.size();
    for (std::size_t k = 0; same && k < tr_s.size(); ++k) {
        same = tr_s[k].row() == tr_p[k].row() && tr_s[k].col() == tr_p[k].col() &&
               tr_s[k].value() == tr_p[k].value();
    }
    report("assemble_jacobian", jacobian_s, jacobian_p, same);
    return 0;
}
