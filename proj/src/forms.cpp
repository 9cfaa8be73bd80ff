#include "sumidx/forms.hpp"

#include <cmath>
#include <sstream>

#include "sumidx/rng.hpp"

namespace sumidx {

namespace {

void check_exponent(double p) {
    if (!(p >= 1.0))
        throw parameter_error("domain exponent must lie in [1, inf]");
}

std::size_t pow_checked(int base, int exp, std::size_t budget) {
    std::size_t size = 1;
    for (int i = 0; i < exp; ++i) {
        if (size > budget / static_cast<std::size_t>(base)) {
            std::ostringstream msg;
            msg << "dense tensor " << base << "^" << exp << " exceeds the coefficient budget "
                << budget;
            throw size_error(msg.str());
        }
        size *= static_cast<std::size_t>(base);
    }
    return size;
}

} // namespace

double ksz_alpha(double p) {
    if (!(p >= 1.0))
        throw parameter_error("ksz_alpha requires p in [1, inf]");
    if (std::isinf(p))
        return 0.5;
    return p >= 2.0 ? 0.5 - 1.0 / p : 0.0;
}

std::size_t dense_size_checked(int order, int dim, std::size_t budget) {
    if (order < 1 || dim < 1)
        throw parameter_error("form order and dimension must be >= 1");
    return pow_checked(dim, order, budget);
}

MultilinearForm::MultilinearForm(int order, int dim, FormStorage storage, FormCodomain codomain,
                                 std::vector<double> coefficients,
                                 std::vector<double> domain_exponents, std::uint64_t seed)
    : order_(order), dim_(dim), storage_(storage), codomain_(codomain),
      coefficients_(std::move(coefficients)), exponents_(std::move(domain_exponents)),
      seed_(seed) {
    if (order_ < 1 || dim_ < 1)
        throw parameter_error("form order and dimension must be >= 1");
    if (exponents_.size() != static_cast<std::size_t>(order_))
        throw parameter_error("one domain exponent per slot required");
    for (double p : exponents_)
        check_exponent(p);
    if (storage_ == FormStorage::dense) {
        std::size_t expected = 1;
        for (int i = 0; i < order_; ++i)
            expected *= static_cast<std::size_t>(dim_);
        if (coefficients_.size() != expected)
            throw parameter_error("dense coefficient payload has the wrong size");
    } else if (!coefficients_.empty()) {
        throw parameter_error("implicit storage carries no coefficient payload");
    }
    if (storage_ == FormStorage::coordinate && codomain_ != FormCodomain::c0_coordinates)
        throw parameter_error("the coordinate operator is c0-valued");
    if (storage_ != FormStorage::coordinate && codomain_ == FormCodomain::c0_coordinates)
        throw parameter_error("c0 codomain is reserved for the coordinate operator");
}

double MultilinearForm::coefficient(std::span<const int> index) const {
    if (index.size() != static_cast<std::size_t>(order_))
        throw parameter_error("multi-index size must equal the form order");
    for (int i : index)
        if (i < 0 || i >= dim_)
            throw parameter_error("multi-index out of range");
    switch (storage_) {
    case FormStorage::dense: {
        std::size_t flat = 0;
        for (int i : index)
            flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return coefficients_[flat];
    }
    case FormStorage::diagonal: {
        for (std::size_t k = 1; k < index.size(); ++k)
            if (index[k] != index[0])
                return 0.0;
        return 1.0;
    }
    default:
        throw parameter_error("the coordinate operator has no scalar coefficients");
    }
}

MultilinearForm build_ksz_form(int m, int n, std::uint64_t seed, double domain_exponent,
                               std::size_t budget) {
    const std::size_t size = dense_size_checked(m, n, budget);
    check_exponent(domain_exponent);
    rng::Generator gen(seed);
    std::vector<double> coeffs(size);
    for (double& c : coeffs)
        c = gen.next_sign();
    return MultilinearForm(m, n, FormStorage::dense, FormCodomain::scalar, std::move(coeffs),
                           std::vector<double>(static_cast<std::size_t>(m), domain_exponent),
                           seed);
}

MultilinearForm build_diagonal_form(int m, int n, double domain_exponent) {
    if (m < 1 || n < 1)
        throw parameter_error("form order and dimension must be >= 1");
    check_exponent(domain_exponent);
    return MultilinearForm(m, n, FormStorage::diagonal, FormCodomain::scalar, {},
                           std::vector<double>(static_cast<std::size_t>(m), domain_exponent));
}

MultilinearForm build_coordinate_operator(int m, int n, double domain_exponent) {
    if (m < 1 || n < 1)
        throw parameter_error("form order and dimension must be >= 1");
    check_exponent(domain_exponent);
    return MultilinearForm(m, n, FormStorage::coordinate, FormCodomain::c0_coordinates, {},
                           std::vector<double>(static_cast<std::size_t>(m), domain_exponent));
}

namespace {

template <typename Scalar>
void check_inputs(const MultilinearForm& form, std::span<const std::vector<Scalar>> inputs) {
    if (inputs.size() != static_cast<std::size_t>(form.order()))
        throw parameter_error("one input vector per slot required");
    for (const auto& x : inputs)
        if (x.size() != static_cast<std::size_t>(form.dim()))
            throw parameter_error("input dimension must equal the form dimension");
}

template <typename Scalar>
Scalar evaluate_dense(const MultilinearForm& form, std::span<const std::vector<Scalar>> inputs) {
    const int n = form.dim();
    const int m = form.order();
    const std::span<const double> coeffs = form.coefficients();
    std::size_t block = coeffs.size() / static_cast<std::size_t>(n);
    std::vector<Scalar> buf(block);
    // First contraction reads the raw coefficients; later ones shrink in place.
    {
        const auto& x = inputs[static_cast<std::size_t>(m - 1)];
        for (std::size_t i = 0; i < block; ++i) {
            Scalar acc{};
            const std::size_t base = i * static_cast<std::size_t>(n);
            for (int j = 0; j < n; ++j)
                acc += coeffs[base + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            buf[i] = acc;
        }
    }
    for (int slot = m - 2; slot >= 0; --slot) {
        block /= static_cast<std::size_t>(n);
        const auto& x = inputs[static_cast<std::size_t>(slot)];
        for (std::size_t i = 0; i < block; ++i) {
            Scalar acc{};
            const std::size_t base = i * static_cast<std::size_t>(n);
            for (int j = 0; j < n; ++j)
                acc += buf[base + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            buf[i] = acc;
        }
    }
    return buf[0];
}

template <typename Scalar>
Scalar evaluate_diagonal(const MultilinearForm& form, std::span<const std::vector<Scalar>> inputs) {
    Scalar total{};
    for (int i = 0; i < form.dim(); ++i) {
        Scalar term = inputs[0][static_cast<std::size_t>(i)];
        for (int s = 1; s < form.order(); ++s)
            term *= inputs[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        total += term;
    }
    return total;
}

template <typename Scalar>
Scalar evaluate_generic(const MultilinearForm& form, std::span<const std::vector<Scalar>> inputs) {
    if (form.codomain() != FormCodomain::scalar)
        throw parameter_error("evaluation requires a scalar-valued form");
    check_inputs(form, inputs);
    if (form.storage() == FormStorage::dense)
        return evaluate_dense(form, inputs);
    return evaluate_diagonal(form, inputs);
}

} // namespace

double evaluate_form(const MultilinearForm& form, std::span<const std::vector<double>> inputs) {
    return evaluate_generic(form, inputs);
}

std::complex<double> evaluate_form(const MultilinearForm& form,
                                   std::span<const std::vector<std::complex<double>>> inputs) {
    return evaluate_generic(form, inputs);
}

std::vector<double> partial_contraction(const MultilinearForm& form,
                                        std::span<const std::vector<double>> inputs,
                                        int free_slot) {
    if (form.codomain() != FormCodomain::scalar)
        throw parameter_error("partial contraction requires a scalar-valued form");
    check_inputs<double>(form, inputs);
    const int m = form.order();
    const int n = form.dim();
    if (free_slot < 0 || free_slot >= m)
        throw parameter_error("free slot out of range");

    if (form.storage() == FormStorage::diagonal) {
        std::vector<double> c(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            double term = 1.0;
            for (int s = 0; s < m; ++s)
                if (s != free_slot)
                    term *= inputs[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
            c[static_cast<std::size_t>(j)] = term;
        }
        return c;
    }

    const std::span<const double> coeffs = form.coefficients();
    std::vector<double> buf(coeffs.begin(), coeffs.end());
    std::size_t size = buf.size();
    // Contract trailing slots down to free_slot+1 (last index each time)...
    for (int slot = m - 1; slot > free_slot; --slot) {
        const auto& x = inputs[static_cast<std::size_t>(slot)];
        size /= static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < size; ++i) {
            double acc = 0.0;
            const std::size_t base = i * static_cast<std::size_t>(n);
            for (int j = 0; j < n; ++j)
                acc += buf[base + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            buf[i] = acc;
        }
    }
    // ...then leading slots (first index each time), leaving free_slot.
    for (int slot = 0; slot < free_slot; ++slot) {
        const auto& x = inputs[static_cast<std::size_t>(slot)];
        size /= static_cast<std::size_t>(n);
        for (std::size_t rest = 0; rest < size; ++rest) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += buf[static_cast<std::size_t>(j) * size + rest] *
                       x[static_cast<std::size_t>(j)];
            buf[rest] = acc;
        }
    }
    buf.resize(static_cast<std::size_t>(n));
    return buf;
}

VectorFamily::VectorFamily(int count, int ambient_dim, double ambient_exponent,
                           std::vector<double> data)
    : count_(count), dim_(ambient_dim), exponent_(ambient_exponent), data_(std::move(data)) {
    if (count_ < 1 || dim_ < 1)
        throw parameter_error("family count and dimension must be >= 1");
    check_exponent(exponent_);
    if (data_.size() != static_cast<std::size_t>(count_) * static_cast<std::size_t>(dim_))
        throw parameter_error("family payload has the wrong size");
}

VectorFamily VectorFamily::unit_basis(int count, int ambient_dim, double ambient_exponent) {
    if (count > ambient_dim)
        throw parameter_error("unit basis family needs ambient dimension >= count");
    std::vector<double> data(static_cast<std::size_t>(count) * static_cast<std::size_t>(ambient_dim),
                             0.0);
    for (int k = 0; k < count; ++k)
        data[static_cast<std::size_t>(k) * static_cast<std::size_t>(ambient_dim) +
             static_cast<std::size_t>(k)] = 1.0;
    return VectorFamily(count, ambient_dim, ambient_exponent, std::move(data));
}

std::span<const double> VectorFamily::vec(int k) const {
    if (k < 0 || k >= count_)
        throw parameter_error("family index out of range");
    return {data_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
}

double coordinate_output_norm(std::span<const VectorFamily> families, std::span<const int> tuple,
                              int n) {
    if (families.size() != tuple.size())
        throw parameter_error("one family index per slot required");
    double product = 1.0;
    for (std::size_t s = 0; s < families.size(); ++s) {
        if (families[s].ambient_dim() < n)
            throw parameter_error("family dimension must be >= the output dimension");
        const auto x = families[s].vec(tuple[s]);
        double best = 0.0;
        for (int j = 0; j < n; ++j)
            best = std::max(best, std::abs(x[static_cast<std::size_t>(j)]));
        product *= best;
    }
    return product;
}

namespace {

double mixed_sum_dense(const MultilinearForm& form, std::span<const VectorFamily> families,
                       double p) {
    const int n = form.dim();
    const int m = form.order();
    const int count = families[0].count();
    // Sequential mode products: after step s the buffer is indexed by
    // (k_0..k_s, i_{s+1}..i_{m-1}).
    std::vector<double> cur(form.coefficients().begin(), form.coefficients().end());
    std::size_t lead = 1; // count^s
    std::size_t tail = cur.size() / static_cast<std::size_t>(n); // n^{m-s-1}
    for (int s = 0; s < m; ++s) {
        const VectorFamily& fam = families[static_cast<std::size_t>(s)];
        std::vector<double> next(lead * static_cast<std::size_t>(count) * tail);
        for (std::size_t lead_idx = 0; lead_idx < lead; ++lead_idx) {
            const std::size_t in_base = lead_idx * static_cast<std::size_t>(n) * tail;
            const std::size_t out_base = lead_idx * static_cast<std::size_t>(count) * tail;
            for (int k = 0; k < count; ++k) {
                const auto x = fam.vec(k);
                for (std::size_t rest = 0; rest < tail; ++rest) {
                    double acc = 0.0;
                    for (int i = 0; i < n; ++i)
                        acc += cur[in_base + static_cast<std::size_t>(i) * tail + rest] *
                               x[static_cast<std::size_t>(i)];
                    next[out_base + static_cast<std::size_t>(k) * tail + rest] = acc;
                }
            }
        }
        cur = std::move(next);
        lead *= static_cast<std::size_t>(count);
        tail = (s + 1 < m) ? tail / static_cast<std::size_t>(n) : tail;
    }
    double sum = 0.0;
    for (double v : cur)
        sum += std::pow(std::abs(v), p);
    return std::pow(sum, 1.0 / p);
}

double mixed_sum_diagonal(const MultilinearForm& form, std::span<const VectorFamily> families,
                          double p) {
    const int n = form.dim();
    const int m = form.order();
    const int count = families[0].count();
    std::vector<int> tuple(static_cast<std::size_t>(m), 0);
    double sum = 0.0;
    while (true) {
        double value = 0.0;
        for (int i = 0; i < n; ++i) {
            double term = 1.0;
            for (int s = 0; s < m; ++s)
                term *= families[static_cast<std::size_t>(s)].at(tuple[static_cast<std::size_t>(s)],
                                                                 i);
            value += term;
        }
        sum += std::pow(std::abs(value), p);
        int slot = m - 1;
        while (slot >= 0 && ++tuple[static_cast<std::size_t>(slot)] == count) {
            tuple[static_cast<std::size_t>(slot)] = 0;
            --slot;
        }
        if (slot < 0)
            break;
    }
    return std::pow(sum, 1.0 / p);
}

double mixed_sum_coordinate(const MultilinearForm& form, std::span<const VectorFamily> families,
                            double p) {
    const int n = form.dim();
    // The c0 output norm factors across slots, so the p-sum is a product of
    // per-slot sums.
    double product = 1.0;
    for (const VectorFamily& fam : families) {
        if (fam.ambient_dim() < n)
            throw parameter_error("family dimension must be >= the output dimension");
        double slot_sum = 0.0;
        for (int k = 0; k < fam.count(); ++k) {
            const auto x = fam.vec(k);
            double best = 0.0;
            for (int j = 0; j < n; ++j)
                best = std::max(best, std::abs(x[static_cast<std::size_t>(j)]));
            slot_sum += std::pow(best, p);
        }
        product *= slot_sum;
    }
    return std::pow(product, 1.0 / p);
}

} // namespace

double mixed_power_sum(const MultilinearForm& form, std::span<const VectorFamily> families,
                       double p) {
    if (!(p > 0.0))
        throw parameter_error("mixed power sum requires p > 0");
    if (families.size() != static_cast<std::size_t>(form.order()))
        throw parameter_error("one family per slot required");
    const int count = families[0].count();
    for (const VectorFamily& fam : families) {
        if (fam.count() != count)
            throw parameter_error("families must share the same count");
        if (form.storage() != FormStorage::coordinate &&
            fam.ambient_dim() != form.dim())
            throw parameter_error("family dimension must equal the form dimension");
    }
    switch (form.storage()) {
    case FormStorage::dense:
        return mixed_sum_dense(form, families, p);
    case FormStorage::diagonal:
        return mixed_sum_diagonal(form, families, p);
    default:
        return mixed_sum_coordinate(form, families, p);
    }
}

double HomogeneousPolynomial::operator()(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dim))
        throw parameter_error("input dimension must equal the polynomial dimension");
    if (diagonal) {
        double total = 0.0;
        for (double xi : x) {
            double term = 1.0;
            for (int k = 0; k < degree; ++k)
                term *= xi;
            total += term;
        }
        return total;
    }
    std::vector<std::vector<double>> inputs(static_cast<std::size_t>(degree),
                                            std::vector<double>(x.begin(), x.end()));
    return evaluate_form(associated_form, inputs);
}

HomogeneousPolynomial diagonal_polynomial(int m, int n) {
    return HomogeneousPolynomial{m, n, true, build_diagonal_form(m, n)};
}

double diagonal_form_norm(int m, int n, double ambient_exponent) {
    if (m < 1 || n < 1)
        throw parameter_error("degree and dimension must be >= 1");
    check_exponent(ambient_exponent);
    const double ratio = std::isinf(ambient_exponent)
                             ? 0.0
                             : static_cast<double>(m) / ambient_exponent;
    return std::max(1.0, std::pow(static_cast<double>(n), 1.0 - ratio));
}

} // namespace sumidx
