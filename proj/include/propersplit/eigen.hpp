#pragma once

#include <vector>

#include "propersplit/matrix.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

struct Eigenvalue {
    double re = 0.0;
    double im = 0.0;
    double modulus() const;
};

/// Spectrum of a square matrix. Complex eigenvalues come in conjugate
/// pairs; the list is sorted by descending modulus (ties by descending
/// real part, then imaginary part) so output is deterministic.
struct Spectrum {
    std::vector<Eigenvalue> eigenvalues;
    double spectral_radius = 0.0;
};

/// Computes all eigenvalues by Householder reduction to Hessenberg form
/// followed by the Francis double-shift QR iteration with 2x2
/// trailing-block extraction. Throws NonConvergence if the sweep budget
/// (100 * n) is exhausted.
Spectrum eigenvalues(const Matrix& a, const ToleranceConfig& cfg = {});

double spectral_radius(const Matrix& a, const ToleranceConfig& cfg = {});

}  // namespace propersplit
