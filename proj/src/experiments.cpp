#include "sumidx/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sumidx/rng.hpp"

namespace sumidx {

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::ksz_scalar: return "ksz_scalar";
    case Scenario::diagonal_scalar: return "diagonal_scalar";
    case Scenario::coordinate_c0: return "coordinate_c0";
    default: return "custom";
    }
}

const char* to_string(NormMethod m) {
    switch (m) {
    case NormMethod::analytic: return "analytic";
    case NormMethod::ascent: return "ascent";
    default: return "bruteforce";
    }
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::lower_violated: return "lower_violated";
    case Verdict::upper_violated: return "upper_violated";
    default: return "inconclusive";
    }
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "ksz_scalar" || name == "ksz")
        return Scenario::ksz_scalar;
    if (name == "diagonal_scalar" || name == "diagonal")
        return Scenario::diagonal_scalar;
    if (name == "coordinate_c0" || name == "coordinate")
        return Scenario::coordinate_c0;
    if (name == "custom")
        return Scenario::custom;
    throw parameter_error("unknown scenario: " + name);
}

NormMethod norm_method_from_string(const std::string& name) {
    if (name == "analytic")
        return NormMethod::analytic;
    if (name == "ascent")
        return NormMethod::ascent;
    if (name == "bruteforce")
        return NormMethod::bruteforce;
    throw parameter_error("unknown norm method: " + name);
}

void ExperimentConfig::validate() const {
    if (m < 1)
        throw parameter_error("degree m must be >= 1");
    if (!(p > 0.0))
        throw parameter_error("p must be positive");
    if (!(q >= 1.0) || std::isinf(q))
        throw parameter_error("q must lie in [1, inf)");
    if (n_grid.size() < 3)
        throw parameter_error("n_grid must contain at least 3 dimensions");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1)
            throw parameter_error("n_grid entries must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw parameter_error("n_grid must be strictly increasing");
    }
    const bool randomized =
        scenario == Scenario::ksz_scalar ||
        (scenario == Scenario::custom && custom_form == FormStorage::dense);
    if (randomized && seeds.empty())
        throw parameter_error("randomized scenarios need at least one seed");
    if (seeds.empty())
        throw parameter_error("at least one seed (series label) is required");
}

IndexQuery query_for(const ExperimentConfig& config) {
    IndexQuery query;
    query.variant = Variant::multilinear;
    query.field = Field::real;
    query.m = config.m;
    query.p = config.p;
    query.q = config.q;
    const double q_star = conjugate_exponent(config.q);
    const double domain_cotype = std::max(q_star, 2.0);
    query.domains.assign(static_cast<std::size_t>(config.m),
                         SpaceDescriptor::sequence(q_star, domain_cotype));
    query.codomain = config.scenario == Scenario::coordinate_c0 ? SpaceDescriptor::c0_space()
                                                                : SpaceDescriptor::scalar();
    return query;
}

std::vector<std::string> check_scenario_regions(const ExperimentConfig& config) {
    std::vector<std::string> warnings;
    const int m = config.m;
    const double p = config.p;
    const double q = config.q;
    const double md = static_cast<double>(m);
    std::ostringstream msg;
    switch (config.scenario) {
    case Scenario::ksz_scalar: {
        const double p_low = 2.0 * md / (md + 1.0);
        const double q_low = 2.0 * md * p / (md * p + 2.0 * md - p);
        if (!(p_low <= p && p <= 2.0)) {
            msg << "p=" << p << " outside [" << p_low << ", 2]";
            warnings.push_back(msg.str());
        } else if (!(q_low <= q && q <= 2.0)) {
            msg << "q=" << q << " outside [" << q_low << ", 2]";
            warnings.push_back(msg.str());
        }
        break;
    }
    case Scenario::diagonal_scalar: {
        const double q_low = md * p / (md * p + 1.0 - p);
        if (!(p > 2.0)) {
            msg << "p=" << p << " not above 2";
            warnings.push_back(msg.str());
        } else if (!(q >= q_low)) {
            msg << "q=" << q << " below mp/(mp+1-p)=" << q_low;
            warnings.push_back(msg.str());
        }
        break;
    }
    case Scenario::coordinate_c0:
        if (!(q >= 1.0 && q <= 2.0)) {
            msg << "q=" << q << " outside [1, 2]";
            warnings.push_back(msg.str());
        }
        break;
    default:
        break;
    }
    return warnings;
}

namespace {

MultilinearForm build_scenario_form(const ExperimentConfig& config, int n, std::uint64_t seed,
                                    std::uint64_t grid_index) {
    const double q_star = conjugate_exponent(config.q);
    switch (config.scenario) {
    case Scenario::ksz_scalar:
        return build_ksz_form(config.m, n, rng::derive_seed(seed, grid_index), q_star,
                              config.coeff_budget);
    case Scenario::diagonal_scalar:
        return build_diagonal_form(config.m, n, q_star);
    case Scenario::coordinate_c0:
        return build_coordinate_operator(config.m, n, q_star);
    default:
        if (config.custom_form == FormStorage::diagonal)
            return build_diagonal_form(config.m, n, q_star);
        if (config.custom_form == FormStorage::coordinate)
            return build_coordinate_operator(config.m, n, q_star);
        return build_ksz_form(config.m, n, rng::derive_seed(seed, grid_index), q_star,
                              config.coeff_budget);
    }
}

double scenario_norm(const ExperimentConfig& config, const MultilinearForm& form, int n,
                     std::uint64_t seed, std::uint64_t grid_index) {
    // The coordinate operator's norm is analytic for every method; it is
    // c0-valued and outside the scalar ascent's scope.
    if (form.storage() == FormStorage::coordinate)
        return coordinate_operator_norm().value;
    const double q_star = conjugate_exponent(config.q);
    switch (config.norm_method) {
    case NormMethod::analytic:
        if (form.storage() == FormStorage::diagonal)
            return diagonal_form_norm(config.m, n, q_star);
        throw parameter_error("no analytic norm is available for random-sign forms; use ascent "
                              "or bruteforce");
    case NormMethod::ascent: {
        AscentOptions options = config.ascent;
        options.seed = rng::derive_seed(seed, 0x6e6f726dull + grid_index);
        return operator_norm_ascent(form, options).value;
    }
    default:
        return operator_norm_bruteforce(form).value;
    }
}

} // namespace

std::vector<RatioSeries> run_ratio_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<RatioSeries> all;
    all.reserve(config.seeds.size());
    const double q_star = conjugate_exponent(config.q);
    for (std::uint64_t seed : config.seeds) {
        RatioSeries series;
        series.scenario = config.scenario;
        series.preset = config.preset;
        series.seed = seed;
        series.points.reserve(config.n_grid.size());
        for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
            const int n = config.n_grid[gi];
            const MultilinearForm form = build_scenario_form(config, n, seed, gi);
            std::vector<VectorFamily> families(
                static_cast<std::size_t>(config.m),
                VectorFamily::unit_basis(n, n, q_star));
            const double mixed = mixed_power_sum(form, families, config.p);
            const double norm = scenario_norm(config, form, n, seed, gi);
            double weak_product = 1.0;
            for (const VectorFamily& fam : families) {
                const double w = weak_q_norm(fam, config.q);
                // Basis families have weak norm exactly 1; anything else is
                // an indexing bug.
                if (std::abs(w - 1.0) > 1e-12)
                    throw internal_error("weak norm of a unit basis family is not 1");
                weak_product *= w;
            }
            if (!(norm > 0.0))
                throw data_error("norm estimate vanished; ratio undefined");
            RatioPoint point;
            point.n = n;
            point.mixed_sum = mixed;
            point.norm = norm;
            point.weak_product = weak_product;
            point.ratio = mixed / (norm * weak_product);
            series.points.push_back(point);
        }
        all.push_back(std::move(series));
    }
    return all;
}

ExponentFit fit_exponent(const RatioSeries& series) {
    const std::size_t n = series.points.size();
    if (n < 3)
        throw data_error("exponent fit needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const RatioPoint& pt : series.points) {
        if (!(pt.ratio > 0.0))
            throw data_error("nonpositive ratio; cannot fit a power law");
        sx += std::log(static_cast<double>(pt.n));
        sy += std::log(pt.ratio);
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (const RatioPoint& pt : series.points) {
        const double dx = std::log(static_cast<double>(pt.n)) - mx;
        const double dy = std::log(pt.ratio) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (const RatioPoint& pt : series.points) {
        const double predicted = fit.intercept + fit.slope * std::log(static_cast<double>(pt.n));
        const double r = std::log(pt.ratio) - predicted;
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
    fit.n_used = static_cast<int>(n);
    return fit;
}

double unit_vector_probe(const MultilinearForm& form, double p, double norm_value) {
    if (!(p > 0.0))
        throw parameter_error("probe requires p > 0");
    if (!(norm_value > 0.0))
        throw data_error("degenerate form: norm is zero");
    double sum = 0.0;
    const double md = static_cast<double>(form.order());
    switch (form.storage()) {
    case FormStorage::dense:
        for (double c : form.coefficients())
            sum += std::pow(std::abs(c), p);
        break;
    case FormStorage::diagonal:
        sum = static_cast<double>(form.dim());
        break;
    default:
        // Coordinate outputs at basis tuples all have c0 norm 1.
        sum = std::pow(static_cast<double>(form.dim()), md);
        break;
    }
    return std::pow(sum, 1.0 / p) / norm_value;
}

double unit_vector_probe(const MultilinearForm& form, double p) {
    if (form.storage() == FormStorage::coordinate)
        return unit_vector_probe(form, p, coordinate_operator_norm().value);
    return unit_vector_probe(form, p, operator_norm_ascent(form).value);
}

VerificationReport verify_against_bounds(const ExponentFit& fit, const IndexQuery& query,
                                         double tolerance) {
    if (!(tolerance >= 0.0))
        throw parameter_error("tolerance must be nonnegative");
    VerificationReport report;
    report.fitted = fit;
    report.tolerance = tolerance;
    report.theoretical = aggregate_bounds(query);
    const auto& agg = report.theoretical;
    if (!agg.lower && !agg.upper && !agg.exact) {
        report.verdict = Verdict::inconclusive;
        return report;
    }
    if (agg.upper && fit.slope > agg.upper->value + tolerance) {
        report.verdict = Verdict::upper_violated;
        return report;
    }
    // Witness constructions attain the proven exact exponent; falling short
    // of it flags the lower direction.
    if (agg.exact && fit.slope < agg.exact->value - tolerance) {
        report.verdict = Verdict::lower_violated;
        return report;
    }
    report.verdict = Verdict::consistent;
    return report;
}

std::vector<ExperimentConfig> scenario_presets() {
    std::vector<ExperimentConfig> presets;

    ExperimentConfig coordinate_m2;
    coordinate_m2.scenario = Scenario::coordinate_c0;
    coordinate_m2.m = 2;
    coordinate_m2.p = 2.0;
    coordinate_m2.q = 2.0;
    coordinate_m2.norm_method = NormMethod::analytic;
    coordinate_m2.preset = "coordinate-c0-m2";
    presets.push_back(coordinate_m2);

    ExperimentConfig coordinate_m3 = coordinate_m2;
    coordinate_m3.m = 3;
    coordinate_m3.preset = "coordinate-c0-m3";
    presets.push_back(coordinate_m3);

    ExperimentConfig diagonal;
    diagonal.scenario = Scenario::diagonal_scalar;
    diagonal.m = 2;
    diagonal.p = 4.0;
    diagonal.q = 2.0;
    diagonal.norm_method = NormMethod::analytic;
    diagonal.preset = "diagonal-m2";
    presets.push_back(diagonal);

    ExperimentConfig ksz;
    ksz.scenario = Scenario::ksz_scalar;
    ksz.m = 2;
    ksz.p = 2.0;
    ksz.q = 2.0;
    ksz.norm_method = NormMethod::ascent;
    ksz.seeds = {0, 1, 2, 3, 4};
    ksz.preset = "ksz-m2";
    presets.push_back(ksz);

    return presets;
}

ExperimentConfig preset_by_name(const std::string& name) {
    for (ExperimentConfig& preset : scenario_presets())
        if (preset.preset == name)
            return preset;
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; available:";
    for (const ExperimentConfig& preset : scenario_presets())
        msg << " " << preset.preset;
    throw parameter_error(msg.str());
}

} // namespace sumidx
