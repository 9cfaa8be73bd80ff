#include "sumidx/norms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sumidx/rng.hpp"
#include "sumidx/spaces.hpp"

namespace sumidx {

double lp_norm(std::span<const double> v, double p) {
    if (!(p >= 1.0))
        throw parameter_error("lp_norm requires p in [1, inf]");
    if (std::isinf(p)) {
        double best = 0.0;
        for (double x : v)
            best = std::max(best, std::abs(x));
        return best;
    }
    double sum = 0.0;
    for (double x : v)
        sum += std::pow(std::abs(x), p);
    return std::pow(sum, 1.0 / p);
}

double dual_norming_vector(std::span<const double> c, double p, std::span<double> out) {
    if (out.size() != c.size())
        throw parameter_error("output span size mismatch");
    if (!(p >= 1.0))
        throw parameter_error("dual norming requires p in [1, inf]");
    if (p == 1.0) {
        // Signed basis vector at the largest |c_j|; lowest index on ties.
        std::size_t best = 0;
        double best_abs = std::abs(c[0]);
        for (std::size_t j = 1; j < c.size(); ++j) {
            const double a = std::abs(c[j]);
            if (a > best_abs) {
                best_abs = a;
                best = j;
            }
        }
        if (best_abs == 0.0)
            return 0.0;
        std::fill(out.begin(), out.end(), 0.0);
        out[best] = c[best] > 0.0 ? 1.0 : -1.0;
        return best_abs;
    }
    if (std::isinf(p)) {
        double sum = 0.0;
        for (double x : c)
            sum += std::abs(x);
        if (sum == 0.0)
            return 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            out[j] = c[j] >= 0.0 ? 1.0 : -1.0;
        return sum;
    }
    const double p_star = p / (p - 1.0);
    const double norm = lp_norm(c, p_star);
    if (norm == 0.0)
        return 0.0;
    const double scale = std::pow(norm, p_star - 1.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double magnitude = std::pow(std::abs(c[j]), p_star - 1.0);
        out[j] = (c[j] >= 0.0 ? magnitude : -magnitude) / scale;
    }
    return norm;
}

namespace {

void random_unit_vector(rng::Generator& gen, double p, std::span<double> out) {
    for (double& x : out)
        x = gen.next_gaussian();
    const double norm = lp_norm(out, std::isinf(p) ? kInfinity : p);
    if (norm == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        out[0] = 1.0;
        return;
    }
    for (double& x : out)
        x /= norm;
}

struct AscentResult {
    double value;
    bool converged;
};

AscentResult ascend_once(const MultilinearForm& form, rng::Generator gen,
                         const AscentOptions& options) {
    const int m = form.order();
    const int n = form.dim();
    std::vector<std::vector<double>> x(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int s = 0; s < m; ++s)
        random_unit_vector(gen, form.domain_exponent(s), x[static_cast<std::size_t>(s)]);

    double value = 0.0;
    bool converged = false;
    for (int iter = 0; iter < options.max_iters; ++iter) {
        const double sweep_start = value;
        for (int s = 0; s < m; ++s) {
            const std::vector<double> c = partial_contraction(form, x, s);
            std::vector<double>& slot = x[static_cast<std::size_t>(s)];
            const double attained = dual_norming_vector(c, form.domain_exponent(s), slot);
            if (attained == 0.0)
                continue; // zero functional; keep the current slot vector
            if (attained < value - 1e-12 * std::max(1.0, value))
                throw internal_error("ascent objective decreased");
            value = attained;
        }
        if (value == 0.0) {
            converged = true; // zero form
            break;
        }
        if (value - sweep_start < options.tol * value) {
            converged = true;
            break;
        }
    }
    return {value, converged};
}

} // namespace

NormEstimate operator_norm_ascent(const MultilinearForm& form, const AscentOptions& options) {
    if (form.codomain() != FormCodomain::scalar)
        throw parameter_error("ascent requires a scalar-valued form");
    if (options.restarts < 1 || options.max_iters < 1)
        throw parameter_error("ascent needs at least one restart and one iteration");
    NormEstimate best{0.0, NormKind::ascent_lower_estimate, options.restarts, false};
    for (int r = 0; r < options.restarts; ++r) {
        const AscentResult result =
            ascend_once(form, rng::Generator(rng::derive_seed(options.seed, static_cast<std::uint64_t>(r))),
                        options);
        if (r == 0 || result.value > best.value) {
            best.value = result.value;
            best.converged = result.converged;
        }
    }
    return best;
}

namespace {

bool is_vertex_exponent(double p) { return p == 1.0 || std::isinf(p); }

/// Candidate count for vertex enumeration of one slot.
std::size_t vertex_candidates(double p, int n) {
    if (p == 1.0)
        return 2 * static_cast<std::size_t>(n);
    return std::size_t{1} << n;
}

void vertex_candidate(double p, int n, std::size_t index, std::span<double> out) {
    if (p == 1.0) {
        std::fill(out.begin(), out.end(), 0.0);
        out[index / 2] = (index % 2 == 0) ? 1.0 : -1.0;
        return;
    }
    for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] = ((index >> j) & 1) ? -1.0 : 1.0;
}

NormEstimate bruteforce_enumerate(const MultilinearForm& form, std::size_t budget) {
    const int m = form.order();
    const int n = form.dim();
    // The last slot is solved exactly through the dual norm, so only the
    // leading m-1 slots are enumerated.
    std::size_t total = 1;
    for (int s = 0; s + 1 < m; ++s) {
        const std::size_t c = vertex_candidates(form.domain_exponent(s), n);
        if (total > budget / c)
            throw size_error("extreme-point enumeration exceeds the search budget");
        total *= c;
    }
    std::vector<std::vector<double>> x(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double best = 0.0;
    for (std::size_t combo = 0; combo < total; ++combo) {
        std::size_t rest = combo;
        for (int s = 0; s + 1 < m; ++s) {
            const std::size_t c = vertex_candidates(form.domain_exponent(s), n);
            vertex_candidate(form.domain_exponent(s), n, rest % c, x[static_cast<std::size_t>(s)]);
            rest /= c;
        }
        const std::vector<double> c = partial_contraction(form, x, m - 1);
        const double dual_p = conjugate_exponent(form.domain_exponent(m - 1));
        best = std::max(best, lp_norm(c, dual_p));
    }
    return NormEstimate{best, NormKind::exact_analytic, 0, true};
}

/// Recursive angular grid over the Euclidean unit sphere, renormalized to the
/// slot's l_p sphere.
void sphere_grid(int dim, int resolution, std::vector<std::vector<double>>& out) {
    std::vector<double> angles(static_cast<std::size_t>(std::max(dim - 1, 0)));
    std::vector<std::size_t> idx(angles.size(), 0);
    if (dim == 1) {
        out.push_back({1.0});
        out.push_back({-1.0});
        return;
    }
    const double pi = 3.14159265358979323846;
    while (true) {
        for (std::size_t k = 0; k < angles.size(); ++k) {
            const double span = (k + 1 == angles.size()) ? 2.0 * pi : pi;
            angles[k] = span * static_cast<double>(idx[k]) / static_cast<double>(resolution);
        }
        std::vector<double> v(static_cast<std::size_t>(dim));
        double sin_prod = 1.0;
        for (int j = 0; j < dim; ++j) {
            if (j + 1 < dim) {
                v[static_cast<std::size_t>(j)] = sin_prod * std::cos(angles[static_cast<std::size_t>(j)]);
                sin_prod *= std::sin(angles[static_cast<std::size_t>(j)]);
            } else {
                v[static_cast<std::size_t>(j)] = sin_prod;
            }
        }
        out.push_back(std::move(v));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == static_cast<std::size_t>(resolution)) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size())
            break;
    }
}

NormEstimate bruteforce_grid(const MultilinearForm& form, int resolution, std::size_t budget) {
    const int m = form.order();
    const int n = form.dim();
    std::vector<std::vector<std::vector<double>>> grids(static_cast<std::size_t>(m - 1));
    std::size_t total = 1;
    for (int s = 0; s + 1 < m; ++s) {
        sphere_grid(n, resolution, grids[static_cast<std::size_t>(s)]);
        auto& grid = grids[static_cast<std::size_t>(s)];
        const double p = form.domain_exponent(s);
        for (auto& v : grid) {
            const double norm = lp_norm(v, p);
            if (norm > 0.0)
                for (double& c : v)
                    c /= norm;
        }
        if (total > budget / grid.size())
            throw size_error("grid search exceeds the search budget");
        total *= grid.size();
    }
    std::vector<std::vector<double>> x(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double best = 0.0;
    for (std::size_t combo = 0; combo < total; ++combo) {
        std::size_t rest = combo;
        for (int s = 0; s + 1 < m; ++s) {
            const auto& grid = grids[static_cast<std::size_t>(s)];
            x[static_cast<std::size_t>(s)] = grid[rest % grid.size()];
            rest /= grid.size();
        }
        const std::vector<double> c = partial_contraction(form, x, m - 1);
        best = std::max(best, lp_norm(c, conjugate_exponent(form.domain_exponent(m - 1))));
    }
    return NormEstimate{best, NormKind::bruteforce, 0, true};
}

} // namespace

NormEstimate operator_norm_bruteforce(const MultilinearForm& form, int resolution,
                                      std::size_t budget) {
    if (form.codomain() != FormCodomain::scalar)
        throw parameter_error("brute force requires a scalar-valued form");
    const int m = form.order();
    const int n = form.dim();
    if (m == 2 && form.domain_exponent(0) == 2.0 && form.domain_exponent(1) == 2.0) {
        Eigen::MatrixXd a(n, n);
        std::vector<int> index(2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                index[0] = i;
                index[1] = j;
                a(i, j) = form.coefficient(index);
            }
        const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
        return NormEstimate{sigma, NormKind::exact_analytic, 0, true};
    }
    // The last slot is always solved exactly through the dual norm, so
    // enumeration is exact whenever every leading slot is vertex-type.
    bool leading_vertex = true;
    for (int s = 0; s + 1 < m; ++s)
        if (!is_vertex_exponent(form.domain_exponent(s)))
            leading_vertex = false;
    if (leading_vertex)
        return bruteforce_enumerate(form, budget);
    if (resolution < 2)
        throw parameter_error("grid resolution must be >= 2");
    return bruteforce_grid(form, resolution, budget);
}

double spectral_norm(std::span<const double> data, int rows, int cols) {
    if (rows < 1 || cols < 1 || data.size() != static_cast<std::size_t>(rows) * cols)
        throw parameter_error("matrix shape mismatch");
    // Gram matrix on the smaller side, then cyclic Jacobi.
    const bool use_cols = cols <= rows;
    const int d = use_cols ? cols : rows;
    std::vector<double> gram(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    auto entry = [&](int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; };
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            double acc = 0.0;
            if (use_cols)
                for (int k = 0; k < rows; ++k)
                    acc += entry(k, a) * entry(k, b);
            else
                for (int k = 0; k < cols; ++k)
                    acc += entry(a, k) * entry(b, k);
            gram[static_cast<std::size_t>(a) * d + b] = acc;
            gram[static_cast<std::size_t>(b) * d + a] = acc;
        }
    auto at = [&](int i, int j) -> double& { return gram[static_cast<std::size_t>(i) * d + j]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                off += at(i, j) * at(i, j);
        if (off <= 1e-30 * std::max(1.0, std::abs(at(0, 0))))
            break;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const double apq = at(i, j);
                if (apq == 0.0)
                    continue;
                const double app = at(i, i);
                const double aqq = at(j, j);
                const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                for (int k = 0; k < d; ++k) {
                    const double aik = at(i, k);
                    const double ajk = at(j, k);
                    at(i, k) = c * aik - s * ajk;
                    at(j, k) = s * aik + c * ajk;
                }
                for (int k = 0; k < d; ++k) {
                    const double aki = at(k, i);
                    const double akj = at(k, j);
                    at(k, i) = c * aki - s * akj;
                    at(k, j) = s * aki + c * akj;
                }
            }
    }
    double lambda = 0.0;
    for (int i = 0; i < d; ++i)
        lambda = std::max(lambda, at(i, i));
    return std::sqrt(std::max(0.0, lambda));
}

namespace {

/// Alternating maximization of v^T X u over the l_{q*} ball (v) and the
/// l_dual ball (u); the value sup_u ||Xu||_q is reported after each u step.
AscentResult weak_norm_ascend_once(const VectorFamily& family, double q, double dual,
                                   rng::Generator gen, const AscentOptions& options) {
    const int rows = family.count();
    const int cols = family.ambient_dim();
    std::vector<double> u(static_cast<std::size_t>(cols));
    std::vector<double> y(static_cast<std::size_t>(rows));
    std::vector<double> w(static_cast<std::size_t>(rows));
    std::vector<double> z(static_cast<std::size_t>(cols));
    random_unit_vector(gen, dual, u);
    double value = 0.0;
    bool converged = false;
    for (int iter = 0; iter < options.max_iters; ++iter) {
        for (int k = 0; k < rows; ++k) {
            const auto row = family.vec(k);
            double acc = 0.0;
            for (int j = 0; j < cols; ++j)
                acc += row[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(k)] = acc;
        }
        const double current = lp_norm(y, q);
        if (current < value - 1e-12 * std::max(1.0, value))
            throw internal_error("weak-norm ascent objective decreased");
        const double gain = current - value;
        value = current;
        if (value == 0.0) {
            converged = true;
            break;
        }
        if (iter > 0 && gain < options.tol * value) {
            converged = true;
            break;
        }
        // v = dual-norming of y in l_{q*}; for q in [1,inf) this is the
        // gradient direction sign(y)|y|^{q-1} rescaled.
        dual_norming_vector(y, conjugate_exponent(q), w);
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int k = 0; k < rows; ++k)
                acc += family.at(k, j) * w[static_cast<std::size_t>(k)];
            z[static_cast<std::size_t>(j)] = acc;
        }
        if (dual_norming_vector(z, dual, u) == 0.0) {
            converged = true;
            break;
        }
    }
    return {value, converged};
}

} // namespace

NormEstimate weak_q_norm_estimate(const VectorFamily& family, double q,
                                  const AscentOptions& options) {
    if (!(q >= 1.0) || std::isinf(q))
        throw parameter_error("weak norm requires q in [1, inf)");
    const double dual = conjugate_exponent(family.ambient_exponent());
    if (q == 2.0 && dual == 2.0) {
        const double value = spectral_norm(family.data(), family.count(), family.ambient_dim());
        return NormEstimate{value, NormKind::exact_analytic, 0, true};
    }
    if (dual == 1.0) {
        // Attained at a basis vector of the dual ball: best column q-norm.
        double best = 0.0;
        for (int j = 0; j < family.ambient_dim(); ++j) {
            double sum = 0.0;
            for (int k = 0; k < family.count(); ++k)
                sum += std::pow(std::abs(family.at(k, j)), q);
            best = std::max(best, std::pow(sum, 1.0 / q));
        }
        return NormEstimate{best, NormKind::exact_analytic, 0, true};
    }
    NormEstimate best{0.0, NormKind::ascent_lower_estimate, options.restarts, false};
    for (int r = 0; r < options.restarts; ++r) {
        const AscentResult result = weak_norm_ascend_once(
            family, q, dual, rng::Generator(rng::derive_seed(options.seed, 0x77656b00ull + r)),
            options);
        if (r == 0 || result.value > best.value) {
            best.value = result.value;
            best.converged = result.converged;
        }
    }
    return best;
}

double weak_q_norm(const VectorFamily& family, double q) {
    return weak_q_norm_estimate(family, q).value;
}

double rademacher_cotype_quotient(const VectorFamily& family, double q) {
    if (!(q >= 1.0))
        throw parameter_error("cotype quotient requires q >= 1");
    const int n = family.count();
    if (n > 20)
        throw size_error("exact Rademacher average limited to n <= 20; use the Monte Carlo "
                         "fallback");
    const int d = family.ambient_dim();
    const double amb = family.ambient_exponent();
    double numerator = 0.0;
    for (int k = 0; k < n; ++k)
        numerator += std::pow(lp_norm(family.vec(k), amb), q);
    numerator = std::pow(numerator, 1.0 / q);

    // Gray-code walk over all 2^n sign patterns.
    std::vector<double> signs(static_cast<std::size_t>(n), 1.0);
    std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < n; ++k) {
        const auto x = family.vec(k);
        for (int j = 0; j < d; ++j)
            sum[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
    }
    double mean_square = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t i = 0;;) {
        const double norm = lp_norm(sum, amb);
        mean_square += norm * norm;
        if (++i == patterns)
            break;
        int flip = 0;
        std::uint64_t v = i;
        while ((v & 1) == 0) {
            v >>= 1;
            ++flip;
        }
        signs[static_cast<std::size_t>(flip)] = -signs[static_cast<std::size_t>(flip)];
        const auto x = family.vec(flip);
        const double delta = 2.0 * signs[static_cast<std::size_t>(flip)];
        for (int j = 0; j < d; ++j)
            sum[static_cast<std::size_t>(j)] += delta * x[static_cast<std::size_t>(j)];
    }
    mean_square /= static_cast<double>(patterns);
    const double rms = std::sqrt(mean_square);
    if (rms == 0.0)
        throw data_error("all signed sums vanish; quotient undefined");
    return numerator / rms;
}

double rademacher_cotype_quotient_mc(const VectorFamily& family, double q, int samples,
                                     std::uint64_t seed) {
    if (!(q >= 1.0))
        throw parameter_error("cotype quotient requires q >= 1");
    if (samples < 1)
        throw parameter_error("at least one sample required");
    const int n = family.count();
    const int d = family.ambient_dim();
    const double amb = family.ambient_exponent();
    double numerator = 0.0;
    for (int k = 0; k < n; ++k)
        numerator += std::pow(lp_norm(family.vec(k), amb), q);
    numerator = std::pow(numerator, 1.0 / q);

    rng::Generator gen(seed);
    std::vector<double> sum(static_cast<std::size_t>(d));
    double mean_square = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (int k = 0; k < n; ++k) {
            const double sign = gen.next_sign();
            const auto x = family.vec(k);
            for (int j = 0; j < d; ++j)
                sum[static_cast<std::size_t>(j)] += sign * x[static_cast<std::size_t>(j)];
        }
        const double norm = lp_norm(sum, amb);
        mean_square += norm * norm;
    }
    mean_square /= static_cast<double>(samples);
    const double rms = std::sqrt(mean_square);
    if (rms == 0.0)
        throw data_error("all sampled signed sums vanish; quotient undefined");
    return numerator / rms;
}

NormEstimate coordinate_operator_norm() {
    return NormEstimate{1.0, NormKind::exact_analytic, 0, true};
}

NormEstimate polynomial_norm_estimate(const HomogeneousPolynomial& poly, double ambient_exponent,
                                      const AscentOptions& options) {
    if (poly.diagonal)
        return NormEstimate{diagonal_form_norm(poly.degree, poly.dim, ambient_exponent),
                            NormKind::exact_analytic, 0, true};
    MultilinearForm form(poly.associated_form.order(), poly.associated_form.dim(),
                         poly.associated_form.storage(), poly.associated_form.codomain(),
                         std::vector<double>(poly.associated_form.coefficients().begin(),
                                             poly.associated_form.coefficients().end()),
                         std::vector<double>(static_cast<std::size_t>(poly.degree),
                                             ambient_exponent),
                         poly.associated_form.seed());
    return operator_norm_ascent(form, options);
}

double pol_quotient(const HomogeneousPolynomial& poly, const VectorFamily& family, double p,
                    double q, const AscentOptions& options) {
    if (!(p > 0.0))
        throw parameter_error("pol_quotient requires p > 0");
    if (!(q >= 1.0) || std::isinf(q))
        throw parameter_error("pol_quotient requires q in [1, inf)");
    if (family.ambient_dim() != poly.dim)
        throw parameter_error("family dimension must equal the polynomial dimension");
    const double weak = weak_q_norm(family, q);
    if (weak == 0.0)
        throw data_error("degenerate family: weak norm is zero");
    const NormEstimate norm = polynomial_norm_estimate(poly, family.ambient_exponent(), options);
    if (norm.value == 0.0)
        throw data_error("degenerate polynomial: norm estimate is zero");
    double sum = 0.0;
    for (int k = 0; k < family.count(); ++k)
        sum += std::pow(std::abs(poly(family.vec(k))), p);
    const double numerator = std::pow(sum, 1.0 / p);
    double weak_power = 1.0;
    for (int i = 0; i < poly.degree; ++i)
        weak_power *= weak;
    return numerator / (weak_power * norm.value);
}

} // namespace sumidx
