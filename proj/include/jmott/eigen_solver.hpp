#pragma once

#include <cstddef>

#include "jmott/fock.hpp"

namespace jmott {

struct EigenOptions {
    std::size_t dense_threshold = 2000;  ///< dims at or below this use a dense solve
    int krylov_dim = 120;
    int max_restarts = 200;
    double tolerance = 1e-11;  ///< Lanczos residual target
    unsigned seed = 12345;
};

struct Eigenpair {
    double value = 0.0;
    CVector vector;
    double residual = 0.0;
    bool dense = true;
};

struct Spectrum {
    RVector values;   ///< ascending
    CMatrix vectors;  ///< columns are orthonormal eigenvectors
};

/// Lowest eigenpair of a Hermitian operator.
Eigenpair lowest_eigenpair(const SparseOperator& h, const EigenOptions& opts = {});

/// Restarted Lanczos with full reorthogonalisation; throws NumericalError
/// after `max_restarts` restarts without reaching `tolerance`.
Eigenpair lanczos_lowest(const SparseOperator& h, const EigenOptions& opts = {});

/// Full dense spectrum. Throws DimensionError above `max_dim`.
Spectrum full_spectrum(const SparseOperator& h, std::size_t max_dim = 8000);

double residual_norm(const SparseOperator& h, const CVector& v, double value);

}  // namespace jmott
