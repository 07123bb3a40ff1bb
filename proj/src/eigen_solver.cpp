#include "jmott/eigen_solver.hpp"

#include <cmath>
#include <random>
#include <string>

namespace jmott {

double residual_norm(const SparseOperator& h, const CVector& v, double value)
{
    return (h.matrix() * v - value * v).norm();
}

Spectrum full_spectrum(const SparseOperator& h, std::size_t max_dim)
{
    if (!h.square()) throw DimensionError("spectrum needs a square operator");
    if (h.dim() > max_dim)
        throw DimensionError("dimension " + std::to_string(h.dim()) + " exceeds dense spectral limit " +
                             std::to_string(max_dim));
    if (h.dim() == 0) return {};
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.dense());
    if (solver.info() != Eigen::Success) throw NumericalError("dense Hermitian eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigenpair lowest_eigenpair(const SparseOperator& h, const EigenOptions& opts)
{
    if (!h.square() || h.dim() == 0) throw DimensionError("lowest eigenpair needs a nonempty square operator");
    if (h.dim() <= opts.dense_threshold) {
        auto spec = full_spectrum(h, opts.dense_threshold);
        Eigenpair out;
        out.value = spec.values(0);
        out.vector = spec.vectors.col(0);
        out.residual = residual_norm(h, out.vector, out.value);
        out.dense = true;
        return out;
    }
    return lanczos_lowest(h, opts);
}

Eigenpair lanczos_lowest(const SparseOperator& h, const EigenOptions& opts)
{
    const auto n = static_cast<Eigen::Index>(h.dim());
    if (!h.square() || n == 0) throw DimensionError("Lanczos needs a nonempty square operator");
    const int m = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, n));

    std::mt19937 rng(opts.seed);
    std::normal_distribution<double> gauss;
    CVector start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = cplx(gauss(rng), gauss(rng));
    start.normalize();

    CMatrix basis(n, m);
    double scale = 1.0;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        RVector alpha = RVector::Zero(m);
        RVector beta = RVector::Zero(m);
        basis.col(0) = start;
        int steps = m;
        for (int j = 0; j < m; ++j) {
            CVector w = h.matrix() * basis.col(j);
            alpha(j) = basis.col(j).dot(w).real();
            // Full reorthogonalisation, twice for stability.
            for (int pass = 0; pass < 2; ++pass)
                w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
            beta(j) = w.norm();
            scale = std::max(scale, std::abs(alpha(j)));
            if (j + 1 == m) break;
            if (beta(j) < 1e-14 * scale) {  // invariant subspace
                steps = j + 1;
                break;
            }
            basis.col(j + 1) = w / beta(j);
        }

        RMatrix tri = RMatrix::Zero(steps, steps);
        for (int j = 0; j < steps; ++j) {
            tri(j, j) = alpha(j);
            if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<RMatrix> small(tri);
        const double theta = small.eigenvalues()(0);
        CVector ritz = basis.leftCols(steps) * small.eigenvectors().col(0).cast<cplx>();
        ritz.normalize();

        const double res = residual_norm(h, ritz, theta);
        if (res < opts.tolerance * std::max(1.0, std::abs(theta))) return {theta, ritz, res, false};
        start = ritz;
    }
    throw NumericalError("Lanczos did not converge within the restart cap");
}

}  // namespace jmott
