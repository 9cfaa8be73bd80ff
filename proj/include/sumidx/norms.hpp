#pragma once

#include <cstdint>

#include "sumidx/forms.hpp"

namespace sumidx {

enum class NormKind { exact_analytic, ascent_lower_estimate, bruteforce };

inline const char* to_string(NormKind k) {
    switch (k) {
    case NormKind::exact_analytic: return "exact_analytic";
    case NormKind::ascent_lower_estimate: return "ascent_lower_estimate";
    default: return "bruteforce";
    }
}

struct NormEstimate {
    double value = 0.0;
    NormKind kind = NormKind::ascent_lower_estimate;
    int restarts_used = 0;
    bool converged = false;
};

struct AscentOptions {
    int restarts = 16;
    double tol = 1e-10;
    int max_iters = 1000;
    std::uint64_t seed = 0;
};

/// l_p norm of a vector, p in [1, inf].
double lp_norm(std::span<const double> v, double p);

/// Writes the unit vector of the l_p ball at which the functional c attains
/// its l_{p*} norm; returns that norm. For p = 1 the vector is a signed basis
/// vector (largest |c_j|, lowest index on ties), for p = inf the sign vector.
/// A zero functional leaves `out` untouched and returns 0.
double dual_norming_vector(std::span<const double> c, double p, std::span<double> out);

/// Block-coordinate ascent for the operator norm of a scalar-valued form on
/// the product of its slot balls. Cyclically replaces one slot by the
/// dual-norming vector of the partial contraction; the objective is
/// non-decreasing (checked at runtime). Best value over seeded restarts is
/// returned as a lower estimate of the true norm. Non-convergence within
/// max_iters is reported through `converged`, not an exception.
NormEstimate operator_norm_ascent(const MultilinearForm& form, const AscentOptions& options = {});

/// Small-instance oracle. Exact largest singular value for bilinear l2 x l2
/// forms; exact extreme-point enumeration when every slot exponent is 1 or
/// inf; otherwise a dense angular grid over the product of unit spheres
/// (kind = bruteforce) at the given resolution.
NormEstimate operator_norm_bruteforce(const MultilinearForm& form, int resolution = 24,
                                      std::size_t budget = std::size_t{1} << 22);

/// Weak-l_q norm of a family: the operator norm of the n x d row matrix from
/// l_dual^d to l_q^n, where dual is the conjugate of the ambient exponent.
/// Exact for (q = 2, ambient 2) via a symmetric Jacobi eigensolver and for
/// dual = 1 via the column formula; otherwise a power-type ascent lower
/// estimate (see weak_q_norm_estimate for the flag).
double weak_q_norm(const VectorFamily& family, double q);
NormEstimate weak_q_norm_estimate(const VectorFamily& family, double q,
                                  const AscentOptions& options = {});

/// Largest singular value of a row-major matrix, computed with a hand-rolled
/// cyclic Jacobi eigensolver on the Gram matrix.
double spectral_norm(std::span<const double> data, int rows, int cols);

/// Exact Rademacher cotype quotient: (sum_k ||x_k||^q)^{1/q} divided by the
/// root mean square of ||sum_k e_k x_k|| over all 2^n sign patterns, norms in
/// the ambient l_{q*} space. n <= 20 (size error beyond; use the Monte Carlo
/// fallback).
double rademacher_cotype_quotient(const VectorFamily& family, double q);

/// Monte Carlo fallback for larger families; sign patterns drawn from the
/// seeded generator.
double rademacher_cotype_quotient_mc(const VectorFamily& family, double q, int samples,
                                     std::uint64_t seed);

/// The coordinate operator has norm exactly 1.
NormEstimate coordinate_operator_norm();

/// Sup-norm estimate for an m-homogeneous polynomial on the l_{q*} ball:
/// exact analytic value for the diagonal probe, ascent on the associated
/// symmetric form otherwise (flagged lower estimate).
NormEstimate polynomial_norm_estimate(const HomogeneousPolynomial& poly, double ambient_exponent,
                                      const AscentOptions& options = {});

/// Quotient of the summing inequality for one polynomial and family:
/// (sum_k ||P(x_k)||^p)^{1/p} / (weak_q_norm(family)^m * ||P||_est).
double pol_quotient(const HomogeneousPolynomial& poly, const VectorFamily& family, double p,
                    double q, const AscentOptions& options = {});

} // namespace sumidx
