#pragma once

#include <string>
#include <vector>

#include "sumidx/bounds.hpp"
#include "sumidx/norms.hpp"

namespace sumidx {

enum class Scenario { ksz_scalar, diagonal_scalar, coordinate_c0, custom };
enum class NormMethod { analytic, ascent, bruteforce };

const char* to_string(Scenario s);
const char* to_string(NormMethod m);
Scenario scenario_from_string(const std::string& name);
NormMethod norm_method_from_string(const std::string& name);

struct ExperimentConfig {
    Scenario scenario = Scenario::coordinate_c0;
    int m = 2;
    double p = 2.0;
    double q = 2.0;
    std::vector<int> n_grid = {2, 4, 8, 16, 32, 64};
    std::vector<std::uint64_t> seeds = {0};
    NormMethod norm_method = NormMethod::analytic;
    AscentOptions ascent;
    std::size_t coeff_budget = kDefaultCoeffBudget;
    // For scenario custom: which construction to run and on which domain.
    FormStorage custom_form = FormStorage::dense; // dense = random signs
    std::string preset; // label carried into artifacts; empty when ad hoc

    void validate() const;
};

struct RatioPoint {
    int n = 0;
    double mixed_sum = 0.0;
    double norm = 0.0;
    double weak_product = 0.0;
    double ratio = 0.0;
};

struct RatioSeries {
    Scenario scenario = Scenario::coordinate_c0;
    std::string preset;
    std::uint64_t seed = 0;
    std::vector<RatioPoint> points;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int n_used = 0;
};

enum class Verdict { consistent, lower_violated, upper_violated, inconclusive };

const char* to_string(Verdict v);

struct VerificationReport {
    ExponentFit fitted;
    AggregateBounds theoretical;
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
};

/// The index question a scenario empirically probes (domains l_{q*}, scalar
/// or c0 codomain).
IndexQuery query_for(const ExperimentConfig& config);

/// Non-fatal hypothesis check for the scenario's region; returns warning
/// strings (empty when everything holds).
std::vector<std::string> check_scenario_regions(const ExperimentConfig& config);

/// One series per seed: for every n builds the scenario's form, evaluates the
/// mixed power sum over unit-basis witness families, the operator norm
/// (analytic where available, otherwise per norm_method) and the weak-norm
/// product, and records the definitional ratio. Deterministic given config
/// and seeds; per-(seed, n) randomness is split from the series seed.
std::vector<RatioSeries> run_ratio_experiment(const ExperimentConfig& config);

/// Ordinary least squares of log(ratio) on log(n).
ExponentFit fit_exponent(const RatioSeries& series);

/// Canonical lower-bound witness ratio from unit-vector probes:
/// (sum over basis tuples |coefficient|^p)^{1/p} / norm.
double unit_vector_probe(const MultilinearForm& form, double p, double norm_value);

/// Overload computing the norm itself (ascent with defaults for scalar
/// forms, exact 1 for the coordinate operator).
double unit_vector_probe(const MultilinearForm& form, double p);

/// Compares a fitted slope against aggregate_bounds for the query. The slope
/// must stay below every proven upper bound, and for scenarios with a proven
/// exact index the witness must reach it from below.
VerificationReport verify_against_bounds(const ExponentFit& fit, const IndexQuery& query,
                                         double tolerance);

/// Canned reproductions of the three witness constructions; every preset has
/// its region hypotheses pre-verified.
std::vector<ExperimentConfig> scenario_presets();

/// Looks up a preset by its CLI name (e.g. "coordinate-c0-m2").
ExperimentConfig preset_by_name(const std::string& name);

} // namespace sumidx
