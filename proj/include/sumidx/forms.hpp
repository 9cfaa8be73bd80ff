#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sumidx/errors.hpp"

namespace sumidx {

enum class FormCodomain { scalar, c0_coordinates };

/// Coefficient storage. Dense tensors are materialized; the diagonal form and
/// the coordinate operator are implicit and never materialize n^m entries.
enum class FormStorage { dense, diagonal, coordinate };

inline constexpr std::size_t kDefaultCoeffBudget = std::size_t{1} << 24;

/// Growth exponent of random-sign operator norms on l_p products:
/// 1/2 - 1/p for p >= 2 (so 1/2 at p = inf), 0 otherwise.
double ksz_alpha(double p);

/// An m-linear form on (R^n)^m with a domain exponent per slot. Immutable
/// after construction; cheap to copy for small n, move otherwise.
class MultilinearForm {
public:
    MultilinearForm(int order, int dim, FormStorage storage, FormCodomain codomain,
                    std::vector<double> coefficients, std::vector<double> domain_exponents,
                    std::uint64_t seed = 0);

    int order() const { return order_; }
    int dim() const { return dim_; }
    FormStorage storage() const { return storage_; }
    FormCodomain codomain() const { return codomain_; }
    std::uint64_t seed() const { return seed_; }
    double domain_exponent(int slot) const { return exponents_.at(static_cast<std::size_t>(slot)); }
    const std::vector<double>& domain_exponents() const { return exponents_; }

    /// Dense coefficient payload (empty for implicit storage).
    std::span<const double> coefficients() const { return coefficients_; }

    /// Coefficient at a multi-index; works for dense and diagonal storage.
    double coefficient(std::span<const int> index) const;

private:
    int order_;
    int dim_;
    FormStorage storage_;
    FormCodomain codomain_;
    std::vector<double> coefficients_;
    std::vector<double> exponents_;
    std::uint64_t seed_;
};

/// Number of dense coefficients n^m, guarded against the budget.
std::size_t dense_size_checked(int order, int dim, std::size_t budget);

/// Random-sign form: i.i.d. uniform +-1 coefficients from a seeded
/// deterministic generator. Same seed, same form.
MultilinearForm build_ksz_form(int m, int n, std::uint64_t seed, double domain_exponent = 2.0,
                               std::size_t budget = kDefaultCoeffBudget);

/// Diagonal form: 1 on the main diagonal, 0 elsewhere (implicit storage).
MultilinearForm build_diagonal_form(int m, int n, double domain_exponent = 2.0);

/// The c0-valued coordinate operator (implicit storage): its outputs are all
/// coordinate products of the inputs. Operator norm is exactly 1.
MultilinearForm build_coordinate_operator(int m, int n, double domain_exponent);

/// Full contraction of the form against one vector per slot. Inputs must
/// match the form dimension; scalar codomain only.
double evaluate_form(const MultilinearForm& form, std::span<const std::vector<double>> inputs);

/// Complex evaluation (real coefficients, complex inputs).
std::complex<double> evaluate_form(const MultilinearForm& form,
                                   std::span<const std::vector<std::complex<double>>> inputs);

/// Contraction of every slot except `free_slot`; returns the coefficient
/// vector of the resulting linear functional.
std::vector<double> partial_contraction(const MultilinearForm& form,
                                        std::span<const std::vector<double>> inputs, int free_slot);

/// n vectors in a d-dimensional sequence space with exponent q*.
class VectorFamily {
public:
    VectorFamily(int count, int ambient_dim, double ambient_exponent, std::vector<double> data);

    static VectorFamily unit_basis(int count, int ambient_dim, double ambient_exponent);

    int count() const { return count_; }
    int ambient_dim() const { return dim_; }
    double ambient_exponent() const { return exponent_; }
    std::span<const double> data() const { return data_; }
    std::span<const double> vec(int k) const;
    double& at(int k, int j) { return data_[static_cast<std::size_t>(k) * dim_ + j]; }
    double at(int k, int j) const { return data_[static_cast<std::size_t>(k) * dim_ + j]; }

private:
    int count_;
    int dim_;
    double exponent_;
    std::vector<double> data_; // row-major count x dim
};

/// c0 output norm of the coordinate operator at one index tuple: the product
/// over slots of the largest first-n coordinate magnitude of the chosen
/// vector.
double coordinate_output_norm(std::span<const VectorFamily> families, std::span<const int> tuple,
                              int n);

/// Mixed l_p aggregate of the form evaluated over every index tuple of the
/// families (output c0 norms for the coordinate operator). p > 0; the
/// quasi-norm range p < 1 is admitted.
double mixed_power_sum(const MultilinearForm& form, std::span<const VectorFamily> families,
                       double p);

/// The m-homogeneous probe polynomial x -> sum_i x_i^m together with its
/// associated symmetric form (the diagonal form).
struct HomogeneousPolynomial {
    int degree;
    int dim;
    bool diagonal; // true for the probe built by diagonal_polynomial
    MultilinearForm associated_form;

    double operator()(std::span<const double> x) const;
};

HomogeneousPolynomial diagonal_polynomial(int m, int n);

/// Exact sup-norm of the diagonal polynomial (and the diagonal form) on the
/// unit ball of l_{q*}^n: max(1, n^{1 - m/q*}); both values are attained.
double diagonal_form_norm(int m, int n, double ambient_exponent);

} // namespace sumidx
