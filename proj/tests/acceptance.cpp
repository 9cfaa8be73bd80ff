// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion carries its own tolerance and wall-clock
// budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sumidx/bounds.hpp"
#include "sumidx/experiments.hpp"
#include "sumidx/norms.hpp"
#include "sumidx/rng.hpp"

using namespace sumidx;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title, double time_budget_seconds)
        : number_(number), title_(std::move(title)), budget_(time_budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& detail) {
        if (!ok) {
            ok_ = false;
            if (!detail.empty())
                details_.push_back(detail);
        }
    }

    void note(const std::string& detail) { details_.push_back(detail); }

    void finish() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > budget_) {
            ok_ = false;
            details_.push_back("runtime " + std::to_string(elapsed) + "s exceeded " +
                               std::to_string(budget_) + "s");
        }
        std::printf("criterion %d [%s] %s (%.2fs < %.0fs)\n", number_, ok_ ? "PASS" : "FAIL",
                    title_.c_str(), elapsed, budget_);
        for (const std::string& d : details_)
            std::printf("    %s %s\n", ok_ ? "note:" : "fail:", d.c_str());
        if (!ok_)
            ++g_failures;
    }

private:
    int number_;
    std::string title_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
    bool ok_ = true;
    std::vector<std::string> details_;
};

std::vector<int> integer_grid(int lo, int hi) {
    std::vector<int> grid;
    for (int n = lo; n <= hi; ++n)
        grid.push_back(n);
    return grid;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void criterion_coordinate() {
    Criterion crit(1, "coordinate operator recovers slope m/p (1.0 and 1.5)", 5.0);
    for (const auto& [name, expected] :
         std::vector<std::pair<std::string, double>>{{"coordinate-c0-m2", 1.0},
                                                     {"coordinate-c0-m3", 1.5}}) {
        ExperimentConfig config = preset_by_name(name);
        config.n_grid = integer_grid(2, 64);
        const ExponentFit fit = fit_exponent(run_ratio_experiment(config)[0]);
        crit.check(std::abs(fit.slope - expected) <= 1e-9,
                   name + " slope " + fmt(fit.slope) + " vs " + fmt(expected));
        crit.note(name + " slope " + fmt(fit.slope));
    }
    crit.finish();
}

void criterion_diagonal() {
    Criterion crit(2, "diagonal form recovers slope m-1+1/p-m/q = 0.25", 30.0);
    ExperimentConfig config = preset_by_name("diagonal-m2");
    const ExponentFit analytic = fit_exponent(run_ratio_experiment(config)[0]);
    crit.check(std::abs(analytic.slope - 0.25) <= 1e-9,
               "analytic slope " + fmt(analytic.slope) + " vs 0.25");
    crit.note("analytic slope " + fmt(analytic.slope));

    config.norm_method = NormMethod::ascent;
    const ExponentFit ascent = fit_exponent(run_ratio_experiment(config)[0]);
    crit.check(std::abs(ascent.slope - 0.25) <= 0.05,
               "ascent slope " + fmt(ascent.slope) + " vs 0.25 +- 0.05");
    crit.note("ascent slope " + fmt(ascent.slope));
    crit.finish();
}

void criterion_ksz() {
    Criterion crit(3, "random-sign form recovers slope 0.5 within 0.15 (median of 5 seeds)",
                   120.0);
    ExperimentConfig config = preset_by_name("ksz-m2");
    config.n_grid = integer_grid(2, 64);
    config.ascent.restarts = 16;
    std::vector<double> slopes;
    for (const RatioSeries& series : run_ratio_experiment(config))
        slopes.push_back(fit_exponent(series).slope);
    const double median = median_of(slopes);
    crit.check(std::abs(median - 0.5) <= 0.15, "median slope " + fmt(median) + " vs 0.5 +- 0.15");
    std::string all = "per-seed slopes:";
    for (double s : slopes)
        all += " " + fmt(s);
    crit.note(all + "; median " + fmt(median));
    crit.finish();
}

void criterion_formula_identities() {
    Criterion crit(4, "formula identities across 1000 random admissible tuples", 5.0);
    rng::Generator gen(2024);
    int corollary_checked = 0;
    double corollary_worst = 0.0;
    while (corollary_checked < 1000) {
        const int m = 1 + static_cast<int>(gen.next_u64() % 4);
        const double r = 2.0 + 3.0 * gen.next_unit();
        const double s_cap = std::min(2.0, m * r / (m * r - 1.0));
        const double s = 1.0 + 0.999 * (s_cap - 1.0) * gen.next_unit();
        double t;
        try {
            t = cotype_coincidence_t(m, r, s);
        } catch (const region_error&) {
            continue;
        }
        const double p = 1e-3 + 2.0 * t * gen.next_unit();
        const double q = 1.0 + 4.0 * gen.next_unit();
        const double corollary = mult_upper_from_cotype(m, r, p, q, s).value;
        const double composed =
            mult_upper_from_coincidence(m, p, q, CoincidencePair{t, s}).value;
        corollary_worst = std::max(corollary_worst, std::abs(corollary - composed));
        ++corollary_checked;
    }
    crit.check(corollary_worst <= 1e-12,
               "corollary vs composition worst gap " + fmt(corollary_worst));
    crit.note("corollary vs composition worst gap " + fmt(corollary_worst));

    int exact_checked = 0;
    double exact_worst = 0.0;
    while (exact_checked < 1000) {
        const int m = 1 + static_cast<int>(gen.next_u64() % 4);
        const double md = m;
        const double p_low = 2.0 * md / (md + 1.0);
        const double p = p_low + (2.0 - p_low) * gen.next_unit();
        const double q_low = 2.0 * md * p / (md * p + 2.0 * md - p);
        if (q_low > 2.0)
            continue;
        const double q = q_low + (2.0 - q_low) * gen.next_unit();
        double exact;
        try {
            exact = exact_index_scalar(m, p, q).value;
        } catch (const no_exact_result_error&) {
            continue;
        }
        const double s = scalar_coincidence_s(m, p);
        const double composed =
            mult_upper_from_coincidence(m, p, q, CoincidencePair{p, s}).value;
        exact_worst = std::max(exact_worst, std::abs(exact - composed));
        ++exact_checked;
    }
    crit.check(exact_worst <= 1e-12, "scalar exact vs composition worst gap " + fmt(exact_worst));
    crit.note("scalar exact vs composition worst gap " + fmt(exact_worst));

    int pol_checked = 0;
    double pol_worst = 0.0;
    while (pol_checked < 1000) {
        const int m = 1 + static_cast<int>(gen.next_u64() % 4);
        const double r = 2.0 + 3.0 * gen.next_unit();
        const double p_low = 2.0 * r / (m * r + 2.0);
        const double p = p_low + (r - p_low) * (0.001 + 0.998 * gen.next_unit());
        const double exact = pol_exact_q1(m, p, r, false).value;
        const double upper =
            pol_upper_from_coincidence(m, p, 1.0, CoincidencePair{r, 1.0}).value;
        const double lower = pol_cotype_lower(m, p, 1.0, r).value;
        pol_worst = std::max(pol_worst, std::abs(exact - upper));
        pol_worst = std::max(pol_worst, std::abs(exact - lower));
        ++pol_checked;
    }
    crit.check(pol_worst <= 1e-12, "q=1 exact vs upper/lower worst gap " + fmt(pol_worst));
    crit.note("q=1 exact vs upper/lower worst gap " + fmt(pol_worst));
    crit.finish();
}

void criterion_norm_oracles() {
    Criterion crit(5, "ascent matches singular-value and extreme-point oracles", 10.0);
    rng::Generator gen(777);
    double l2_worst = 0.0, vertex_worst = 0.0, weak_worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(gen.next_u64() % 4);
        std::vector<double> coeffs(static_cast<std::size_t>(n) * n);
        for (double& c : coeffs)
            c = gen.next_gaussian();

        const MultilinearForm l2_form(2, n, FormStorage::dense, FormCodomain::scalar, coeffs,
                                      {2.0, 2.0});
        AscentOptions options;
        options.seed = 1000 + trial;
        const double l2_oracle = operator_norm_bruteforce(l2_form).value;
        l2_worst = std::max(l2_worst,
                            std::abs(operator_norm_ascent(l2_form, options).value - l2_oracle));

        const double pa = (gen.next_u64() & 1) ? 1.0 : kInfinity;
        const double pb = (gen.next_u64() & 1) ? 1.0 : kInfinity;
        const MultilinearForm vertex_form(2, n, FormStorage::dense, FormCodomain::scalar, coeffs,
                                          {pa, pb});
        options.restarts = 32;
        const double vertex_oracle = operator_norm_bruteforce(vertex_form).value;
        vertex_worst =
            std::max(vertex_worst,
                     std::abs(operator_norm_ascent(vertex_form, options).value - vertex_oracle));

        const VectorFamily family(n, n, 2.0, coeffs);
        weak_worst = std::max(weak_worst, std::abs(weak_q_norm(family, 2.0) - l2_oracle));
    }
    crit.check(l2_worst <= 1e-6, "ascent vs singular values worst gap " + fmt(l2_worst));
    crit.check(vertex_worst <= 1e-6, "ascent vs enumeration worst gap " + fmt(vertex_worst));
    crit.check(weak_worst <= 1e-9, "weak norm vs singular values worst gap " + fmt(weak_worst));
    crit.note("gaps: l2 " + fmt(l2_worst) + ", vertex " + fmt(vertex_worst) + ", weak " +
              fmt(weak_worst));
    crit.finish();
}

void criterion_rademacher() {
    Criterion crit(6, "Rademacher quotient is exactly 1 on orthonormal l2 families", 10.0);
    double exact_worst = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const VectorFamily basis = VectorFamily::unit_basis(n, n, 2.0);
        exact_worst = std::max(exact_worst,
                               std::abs(rademacher_cotype_quotient(basis, 2.0) - 1.0));
    }
    crit.check(exact_worst <= 1e-12, "exact enumeration worst gap " + fmt(exact_worst));

    const VectorFamily basis = VectorFamily::unit_basis(12, 12, 2.0);
    const double mc = rademacher_cotype_quotient_mc(basis, 2.0, 100000, 2026);
    crit.check(std::abs(mc - 1.0) <= 1e-2, "Monte Carlo value " + fmt(mc) + " vs 1.0 +- 1e-2");
    crit.note("exact worst gap " + fmt(exact_worst) + ", Monte Carlo " + fmt(mc));
    crit.finish();
}

void criterion_properties() {
    Criterion crit(7, "module invariants hold over seeded randomized runs", 60.0);
    rng::Generator gen(31337);

    // Branch continuity at p = t and q = s.
    double continuity_worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const int m = 1 + static_cast<int>(gen.next_u64() % 4);
        const double t = 1.0 + 3.0 * gen.next_unit();
        const double s = 1.0 + gen.next_unit();
        const double q = s + gen.next_unit();
        const double at_pt = mult_upper_from_coincidence(m, t, q, CoincidencePair{t, s}).value;
        continuity_worst =
            std::max(continuity_worst,
                     std::abs(at_pt - (static_cast<double>(m) / s - static_cast<double>(m) / q)));
        const double p = t * (0.2 + 0.8 * gen.next_unit());
        const double at_qs = mult_upper_from_coincidence(m, p, s, CoincidencePair{t, s}).value;
        continuity_worst = std::max(
            continuity_worst,
            std::abs(at_qs - (static_cast<double>(m) / p - static_cast<double>(m) / t)));
    }
    crit.check(continuity_worst <= 1e-12, "branch continuity worst gap " + fmt(continuity_worst));

    // Bound ordering on random queries (aggregate_bounds throws internal_error
    // on violations; exercising it is the assertion).
    int ordered = 0;
    try {
        for (int i = 0; i < 300; ++i) {
            IndexQuery query;
            query.variant = (gen.next_u64() & 1) ? Variant::polynomial : Variant::multilinear;
            query.m = 1 + static_cast<int>(gen.next_u64() % 3);
            query.p = 0.3 + 5.0 * gen.next_unit();
            query.q = 1.0 + 3.0 * gen.next_unit();
            const int kind = static_cast<int>(gen.next_u64() % 3);
            query.codomain = kind == 0   ? SpaceDescriptor::scalar()
                             : kind == 1 ? SpaceDescriptor::c0_space()
                                         : SpaceDescriptor::abstract_space(2.0 + 2.0 * gen.next_unit());
            const double q_star = conjugate_exponent(query.q);
            query.domains.assign(query.variant == Variant::polynomial
                                     ? 1
                                     : static_cast<std::size_t>(query.m),
                                 SpaceDescriptor::sequence(q_star, std::max(q_star, 2.0)));
            const AggregateBounds agg = aggregate_bounds(query);
            if (agg.lower && agg.upper && agg.lower->value <= agg.upper->value + 1e-9)
                ++ordered;
            if (agg.upper)
                crit.check(agg.upper->value >= -1e-12, "negative upper bound");
            if (agg.exact)
                crit.check(agg.exact->value >= -1e-12, "negative exact value");
        }
    } catch (const internal_error& e) {
        crit.check(false, std::string("bound ordering: ") + e.what());
    }

    // Ascent monotonicity is asserted inside the iteration; running it on
    // random forms (including vertex-type slots) exercises the assertion.
    try {
        for (int i = 0; i < 10; ++i) {
            const int n = 3 + static_cast<int>(gen.next_u64() % 3);
            std::vector<double> coeffs(static_cast<std::size_t>(n) * n * n);
            for (double& c : coeffs)
                c = gen.next_gaussian();
            const double exps[3] = {2.0, 1.0 + 2.0 * gen.next_unit(), kInfinity};
            const MultilinearForm form(3, n, FormStorage::dense, FormCodomain::scalar, coeffs,
                                       {exps[i % 3], exps[(i + 1) % 3], exps[(i + 2) % 3]});
            AscentOptions options;
            options.seed = i;
            options.restarts = 4;
            operator_norm_ascent(form, options);
        }
    } catch (const internal_error& e) {
        crit.check(false, std::string("ascent monotonicity: ") + e.what());
    }

    // Slot linearity of evaluation.
    double linearity_worst = 0.0;
    const MultilinearForm form = build_ksz_form(3, 5, 2027);
    for (int i = 0; i < 100; ++i) {
        std::vector<std::vector<double>> inputs(3, std::vector<double>(5));
        for (auto& v : inputs)
            for (double& x : v)
                x = gen.next_gaussian();
        const int slot = static_cast<int>(gen.next_u64() % 3);
        std::vector<double> x(5), y(5);
        for (int j = 0; j < 5; ++j) {
            x[static_cast<std::size_t>(j)] = gen.next_gaussian();
            y[static_cast<std::size_t>(j)] = gen.next_gaussian();
        }
        const double a = gen.next_gaussian();
        const double b = gen.next_gaussian();
        auto eval_with = [&](const std::vector<double>& v) {
            std::vector<std::vector<double>> modified = inputs;
            modified[static_cast<std::size_t>(slot)] = v;
            return evaluate_form(form, modified);
        };
        std::vector<double> combo(5);
        for (int j = 0; j < 5; ++j)
            combo[static_cast<std::size_t>(j)] =
                a * x[static_cast<std::size_t>(j)] + b * y[static_cast<std::size_t>(j)];
        linearity_worst = std::max(linearity_worst, std::abs(eval_with(combo) - a * eval_with(x) -
                                                             b * eval_with(y)));
    }
    crit.check(linearity_worst <= 1e-12, "slot linearity worst gap " + fmt(linearity_worst));

    // Weak-norm monotonicity in q.
    bool monotone = true;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> data(25);
        for (double& x : data)
            x = gen.next_gaussian();
        const VectorFamily family(5, 5, (gen.next_u64() & 1) ? 2.0 : 2.5, data);
        double previous = kInfinity;
        for (double q : {1.0, 1.5, 2.0, 3.0}) {
            const double w = weak_q_norm(family, q);
            monotone = monotone && w <= previous + 1e-9;
            previous = w;
        }
    }
    crit.check(monotone, "weak norm not monotone in q");

    // Determinism of the experiment layer.
    ExperimentConfig config = preset_by_name("ksz-m2");
    config.n_grid = {2, 4, 8, 16};
    config.seeds = {0, 1, 2};
    const std::vector<RatioSeries> a = run_ratio_experiment(config);
    const std::vector<RatioSeries> b = run_ratio_experiment(config);
    bool identical = a.size() == b.size();
    for (std::size_t i = 0; identical && i < a.size(); ++i)
        for (std::size_t j = 0; identical && j < a[i].points.size(); ++j)
            identical = a[i].points[j].mixed_sum == b[i].points[j].mixed_sum &&
                        a[i].points[j].norm == b[i].points[j].norm &&
                        a[i].points[j].ratio == b[i].points[j].ratio;
    crit.check(identical, "experiment reruns are not bit-identical");

    // Slope recovery on synthetic power laws.
    double recovery_worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double slope = -1.0 + 3.0 * gen.next_unit();
        const double scale = 0.5 + gen.next_unit();
        RatioSeries series;
        for (int n : {2, 4, 8, 16, 32}) {
            RatioPoint pt;
            pt.n = n;
            pt.ratio = scale * std::pow(n, slope);
            series.points.push_back(pt);
        }
        recovery_worst = std::max(recovery_worst,
                                  std::abs(fit_exponent(series).slope - slope));
    }
    crit.check(recovery_worst <= 1e-12, "slope recovery worst gap " + fmt(recovery_worst));

    crit.finish();
}

} // namespace

int main() {
    std::printf("acceptance suite (tool version %s)\n", "0.1.0");
    criterion_coordinate();
    criterion_diagonal();
    criterion_ksz();
    criterion_formula_identities();
    criterion_norm_oracles();
    criterion_rademacher();
    criterion_properties();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
