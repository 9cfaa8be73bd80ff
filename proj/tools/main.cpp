#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

#include "sumidx/bounds.hpp"
#include "sumidx/experiments.hpp"
#include "sumidx/io.hpp"
#include "sumidx/norms.hpp"

namespace {

using namespace sumidx;

enum class OutputFormat { table, json, csv };

OutputFormat format_from_string(const std::string& name) {
    if (name == "table")
        return OutputFormat::table;
    if (name == "json")
        return OutputFormat::json;
    if (name == "csv")
        return OutputFormat::csv;
    throw parameter_error("unknown output format: " + name);
}

/// Aligned table / CSV / JSON printer for small result sets.
void print_rows(OutputFormat format, const std::vector<std::string>& headers,
                const std::vector<std::vector<std::string>>& rows) {
    if (format == OutputFormat::csv) {
        for (std::size_t i = 0; i < headers.size(); ++i)
            std::cout << headers[i] << (i + 1 < headers.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                std::cout << row[i] << (i + 1 < row.size() ? "," : "\n");
        return;
    }
    if (format == OutputFormat::json) {
        std::cout << "[";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::cout << (r ? ",\n " : "\n ") << "{";
            for (std::size_t i = 0; i < headers.size(); ++i) {
                std::cout << (i ? "," : "") << '"' << headers[i] << "\":\"" << rows[r][i] << '"';
            }
            std::cout << "}";
        }
        std::cout << (rows.empty() ? "]" : "\n]") << "\n";
        return;
    }
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i)
        widths[i] = headers[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::cout << row[i];
            if (i + 1 < row.size())
                std::cout << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        std::cout << "\n";
    };
    emit(headers);
    for (const auto& row : rows)
        emit(row);
}

std::string join_invocation(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i)
            out += ' ';
        out += argv[i];
    }
    return out;
}

std::size_t coeff_budget_from_env(std::size_t fallback) {
    if (const char* env = std::getenv("SUMIDX_COEFF_BUDGET")) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end == env || value == 0)
            throw parameter_error("SUMIDX_COEFF_BUDGET must be a positive integer");
        return static_cast<std::size_t>(value);
    }
    return fallback;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stoi(item));
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::strtoull(item.c_str(), nullptr, 10));
    return out;
}

double parse_exponent(const std::string& text) {
    if (text == "inf" || text == "infinity")
        return kInfinity;
    return std::stod(text);
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

struct BoundsArgs {
    std::string variant = "mult";
    int m = 0;
    double p = 0.0;
    double q = 0.0;
    std::string domain = "abstract";
    std::string domain_exponent = "";
    std::string domain_cotype = "";
    std::string codomain = "abstract";
    std::string codomain_exponent = "";
    std::string cotype = "";
    std::string field = "real";
    std::string cotype_table_path = "";
    std::string format = "table";
};

CotypeTable load_cotype_table(const std::string& path) {
    CotypeTable table;
    if (path.empty())
        return table;
    const ConfigFile file = ConfigFile::parse(path);
    if (const auto* entries = file.section("cotype"))
        for (const auto& [key, value] : *entries)
            table.overrides.emplace_back(parse_exponent(key), parse_exponent(value));
    return table;
}

SpaceDescriptor make_descriptor(const std::string& kind, const std::string& exponent_text,
                                const std::string& cotype_text, double q,
                                const CotypeTable& table) {
    if (kind == "scalar")
        return SpaceDescriptor::scalar();
    if (kind == "c0")
        return SpaceDescriptor::c0_space();
    if (kind == "abstract") {
        const double cotype = cotype_text.empty() ? kInfinity : parse_exponent(cotype_text);
        return SpaceDescriptor::abstract_space(cotype);
    }
    double exponent;
    if (kind == "lq-star")
        exponent = conjugate_exponent(q);
    else if (kind == "lp") {
        if (exponent_text.empty())
            throw parameter_error("domain kind 'lp' needs an exponent");
        exponent = parse_exponent(exponent_text);
    } else {
        throw parameter_error("unknown space kind '" + kind +
                              "' (expected lq-star, lp, c0, scalar or abstract)");
    }
    const double cotype =
        cotype_text.empty() ? table.lookup(exponent) : parse_exponent(cotype_text);
    return SpaceDescriptor::sequence(exponent, cotype);
}

IndexQuery query_from_args(const BoundsArgs& args) {
    IndexQuery query;
    if (args.variant == "mult" || args.variant == "multilinear")
        query.variant = Variant::multilinear;
    else if (args.variant == "pol" || args.variant == "polynomial")
        query.variant = Variant::polynomial;
    else
        throw parameter_error("unknown variant '" + args.variant + "' (expected mult or pol)");
    query.field = args.field == "complex" ? Field::complex : Field::real;
    query.m = args.m;
    query.p = args.p;
    query.q = args.q;
    const CotypeTable table = load_cotype_table(args.cotype_table_path);
    const SpaceDescriptor domain =
        make_descriptor(args.domain, args.domain_exponent, args.domain_cotype, args.q, table);
    const std::size_t slots = query.variant == Variant::polynomial
                                  ? 1
                                  : static_cast<std::size_t>(std::max(args.m, 1));
    query.domains.assign(slots, domain);
    query.codomain =
        make_descriptor(args.codomain, args.codomain_exponent, args.cotype, args.q, table);
    return query;
}

int run_bounds(const BoundsArgs& args) {
    const IndexQuery query = query_from_args(args);
    const AggregateBounds bounds = aggregate_bounds(query);
    std::vector<std::vector<std::string>> rows;
    auto add = [&](const char* label, const std::optional<BoundResult>& bound) {
        if (bound)
            rows.push_back({label, format_double(bound->value), bound->region, bound->citation});
        else
            rows.push_back({label, "(none)", "", ""});
    };
    add("lower", bounds.lower);
    add("upper", bounds.upper);
    add("exact", bounds.exact);
    print_rows(format_from_string(args.format), {"direction", "value", "region", "citation"},
               rows);
    return 0;
}

// ---------------------------------------------------------------------------
// construct / norm
// ---------------------------------------------------------------------------

struct FormArgs {
    std::string form = "ksz";
    int m = 2;
    int n = 4;
    std::uint64_t seed = 0;
    std::string exponent = "2";
};

MultilinearForm build_from_args(const FormArgs& args, std::size_t budget) {
    const double exponent = parse_exponent(args.exponent);
    if (args.form == "ksz")
        return build_ksz_form(args.m, args.n, args.seed, exponent, budget);
    if (args.form == "diagonal")
        return build_diagonal_form(args.m, args.n, exponent);
    if (args.form == "coordinate")
        return build_coordinate_operator(args.m, args.n, exponent);
    throw parameter_error("unknown form '" + args.form +
                          "' (expected ksz, diagonal or coordinate)");
}

int run_construct(const FormArgs& args, const std::string& out_path) {
    const std::size_t budget = coeff_budget_from_env(kDefaultCoeffBudget);
    const MultilinearForm form = build_from_args(args, budget);
    save_form(out_path, form);
    std::cout << "wrote " << args.form << " form: order " << form.order() << ", dim "
              << form.dim() << ", seed " << form.seed() << " -> " << out_path << "\n";
    return 0;
}

int run_norm(const std::string& in_path, const FormArgs& args, const std::string& method,
             int restarts, double tol, int max_iters, int resolution, std::uint64_t seed,
             const std::string& format) {
    const std::size_t budget = coeff_budget_from_env(kDefaultCoeffBudget);
    const MultilinearForm form =
        in_path.empty() ? build_from_args(args, budget) : load_form(in_path);
    NormEstimate estimate;
    if (form.storage() == FormStorage::coordinate) {
        estimate = coordinate_operator_norm();
    } else if (method == "ascent") {
        AscentOptions options;
        options.restarts = restarts;
        options.tol = tol;
        options.max_iters = max_iters;
        options.seed = seed;
        estimate = operator_norm_ascent(form, options);
    } else if (method == "bruteforce") {
        estimate = operator_norm_bruteforce(form, resolution);
    } else if (method == "analytic") {
        if (form.storage() != FormStorage::diagonal)
            throw parameter_error("analytic norms exist only for diagonal and coordinate forms");
        estimate = NormEstimate{diagonal_form_norm(form.order(), form.dim(),
                                                   form.domain_exponent(0)),
                                NormKind::exact_analytic, 0, true};
    } else {
        throw parameter_error("unknown norm method '" + method + "'");
    }
    print_rows(format_from_string(format), {"value", "kind", "restarts_used", "converged"},
               {{format_double(estimate.value), to_string(estimate.kind),
                 std::to_string(estimate.restarts_used), estimate.converged ? "yes" : "no"}});
    return 0;
}

// ---------------------------------------------------------------------------
// estimate / verify / presets / report
// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string preset;
    std::string scenario;
    std::string custom_form = "ksz";
    int m = -1;
    double p = -1.0;
    double q = -1.0;
    std::string n_grid;
    int seed_count = -1;
    std::uint64_t master_seed = 0;
    bool master_seed_given = false;
    std::string seed_list;
    std::string norm_method;
    int restarts = -1;
    double tol = -1.0;
    int max_iters = -1;
    std::string config_path;
    std::string out_prefix = "sumidx_run";
    bool verify = false;
    double tolerance = -1.0;
    std::string format = "table";
};

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "scenario")
        config.scenario = scenario_from_string(value);
    else if (key == "m")
        config.m = std::stoi(value);
    else if (key == "p")
        config.p = std::stod(value);
    else if (key == "q")
        config.q = std::stod(value);
    else if (key == "n_grid")
        config.n_grid = parse_int_list(value);
    else if (key == "seeds")
        config.seeds = parse_u64_list(value);
    else if (key == "norm_method")
        config.norm_method = norm_method_from_string(value);
    else if (key == "restarts")
        config.ascent.restarts = std::stoi(value);
    else if (key == "tol")
        config.ascent.tol = std::stod(value);
    else if (key == "max_iters")
        config.ascent.max_iters = std::stoi(value);
    else if (key == "budget")
        config.coeff_budget = static_cast<std::size_t>(std::stoull(value));
    else if (key == "form")
        config.custom_form = value == "diagonal"     ? FormStorage::diagonal
                             : value == "coordinate" ? FormStorage::coordinate
                                                     : FormStorage::dense;
    else
        throw schema_error("unknown config key '" + key + "'");
}

ExperimentConfig config_from_estimate_args(const EstimateArgs& args) {
    // Precedence: built-in defaults < preset < config file < flags.
    ExperimentConfig config;
    if (!args.preset.empty())
        config = preset_by_name(args.preset);
    if (!args.config_path.empty()) {
        const ConfigFile file = ConfigFile::parse(args.config_path);
        const auto* entries =
            !args.preset.empty() ? file.section(args.preset) : nullptr;
        if (entries == nullptr && !args.scenario.empty())
            entries = file.section(args.scenario);
        if (entries == nullptr)
            entries = file.section("");
        if (entries != nullptr)
            for (const auto& [key, value] : *entries)
                apply_config_entry(config, key, value);
    }
    if (!args.scenario.empty())
        config.scenario = scenario_from_string(args.scenario);
    if (args.m > 0)
        config.m = args.m;
    if (args.p > 0.0)
        config.p = args.p;
    if (args.q > 0.0)
        config.q = args.q;
    if (!args.n_grid.empty())
        config.n_grid = parse_int_list(args.n_grid);
    if (!args.seed_list.empty())
        config.seeds = parse_u64_list(args.seed_list);
    else if (args.seed_count > 0 || args.master_seed_given) {
        const std::size_t count = args.seed_count > 0 ? static_cast<std::size_t>(args.seed_count)
                                                      : config.seeds.size();
        config.seeds.clear();
        for (std::size_t i = 0; i < count; ++i)
            config.seeds.push_back(args.master_seed + i);
    }
    if (!args.norm_method.empty())
        config.norm_method = norm_method_from_string(args.norm_method);
    if (args.restarts > 0)
        config.ascent.restarts = args.restarts;
    if (args.tol > 0.0)
        config.ascent.tol = args.tol;
    if (args.max_iters > 0)
        config.ascent.max_iters = args.max_iters;
    config.coeff_budget = coeff_budget_from_env(config.coeff_budget);
    if (!args.custom_form.empty() && args.scenario == "custom")
        config.custom_form = args.custom_form == "diagonal"     ? FormStorage::diagonal
                             : args.custom_form == "coordinate" ? FormStorage::coordinate
                                                                : FormStorage::dense;
    return config;
}

double default_tolerance(const ExperimentConfig& config) {
    const bool randomized = config.scenario == Scenario::ksz_scalar ||
                            (config.scenario == Scenario::custom &&
                             config.custom_form == FormStorage::dense);
    if (config.norm_method == NormMethod::analytic && !randomized)
        return 1e-9;
    return 0.15;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int run_estimate(const EstimateArgs& args, const std::string& invocation) {
    ExperimentConfig config = config_from_estimate_args(args);
    config.validate();
    for (const std::string& warning : check_scenario_regions(config))
        std::cerr << "warning: scenario hypothesis violated: " << warning << "\n";

    const std::vector<RatioSeries> series = run_ratio_experiment(config);
    Artifact artifact;
    artifact.run = make_run_record(invocation, canonical_config_json(config));
    artifact.config = config;
    artifact.series = series;

    const double tolerance = args.tolerance > 0.0 ? args.tolerance : default_tolerance(config);
    const IndexQuery query = query_for(config);
    std::vector<double> slopes;
    std::vector<std::vector<std::string>> rows;
    for (const RatioSeries& s : series) {
        const ExponentFit fit = fit_exponent(s);
        artifact.fits.emplace_back(s.seed, fit);
        slopes.push_back(fit.slope);
        std::vector<std::string> row = {std::to_string(s.seed), format_double(fit.slope),
                                        format_double(fit.intercept),
                                        format_double(fit.residual_rms)};
        if (args.verify) {
            const VerificationReport report = verify_against_bounds(fit, query, tolerance);
            artifact.reports.emplace_back(s.seed, report);
            row.push_back(to_string(report.verdict));
        }
        rows.push_back(std::move(row));
    }

    const std::filesystem::path jsonl = args.out_prefix + ".jsonl";
    const std::filesystem::path points_csv = args.out_prefix + "_points.csv";
    const std::filesystem::path fits_csv = args.out_prefix + "_fits.csv";
    write_artifact_jsonl(jsonl, artifact);
    write_points_csv(points_csv, artifact);
    write_fits_csv(fits_csv, artifact);

    std::vector<std::string> headers = {"seed", "slope", "intercept", "residual_rms"};
    if (args.verify)
        headers.push_back("verdict");
    const double median_slope = median(slopes);
    {
        std::vector<std::string> row = {"median", format_double(median_slope), "", ""};
        if (args.verify) {
            ExponentFit median_fit;
            median_fit.slope = median_slope;
            median_fit.n_used = static_cast<int>(slopes.size());
            const VerificationReport report =
                verify_against_bounds(median_fit, query, tolerance);
            row.push_back(to_string(report.verdict));
        }
        rows.push_back(std::move(row));
    }
    print_rows(format_from_string(args.format), headers, rows);
    std::cerr << "artifacts: " << jsonl.string() << ", " << points_csv.string() << ", "
              << fits_csv.string() << "\n";
    return 0;
}

int run_verify(const std::string& in_path, double tolerance, const std::string& format) {
    const Artifact artifact = read_artifact_jsonl(in_path);
    if (!artifact.config)
        throw data_error("artifact has no config record; cannot rebuild the query");
    const IndexQuery query = query_for(*artifact.config);
    const double tol = tolerance > 0.0 ? tolerance : default_tolerance(*artifact.config);
    if (artifact.fits.empty())
        throw data_error("artifact has no fit records");
    std::vector<std::vector<std::string>> rows;
    int violations = 0;
    for (const auto& [seed, fit] : artifact.fits) {
        const VerificationReport report = verify_against_bounds(fit, query, tol);
        if (report.verdict != Verdict::consistent && report.verdict != Verdict::inconclusive)
            ++violations;
        rows.push_back({std::to_string(seed), format_double(fit.slope),
                        report.theoretical.exact ? format_double(report.theoretical.exact->value)
                                                 : "(none)",
                        to_string(report.verdict)});
    }
    print_rows(format_from_string(format), {"seed", "slope", "exact", "verdict"}, rows);
    if (violations > 0)
        std::cerr << violations << " verdict(s) violated the theoretical bounds\n";
    return 0;
}

int run_presets(const std::string& format) {
    std::vector<std::vector<std::string>> rows;
    for (const ExperimentConfig& preset : scenario_presets()) {
        const AggregateBounds bounds = aggregate_bounds(query_for(preset));
        std::ostringstream grid;
        for (std::size_t i = 0; i < preset.n_grid.size(); ++i)
            grid << (i ? "," : "") << preset.n_grid[i];
        rows.push_back({preset.preset, to_string(preset.scenario), std::to_string(preset.m),
                        format_double(preset.p), format_double(preset.q),
                        to_string(preset.norm_method), grid.str(),
                        std::to_string(preset.seeds.size()),
                        bounds.exact ? format_double(bounds.exact->value) : "(none)"});
    }
    print_rows(format_from_string(format),
               {"preset", "scenario", "m", "p", "q", "norm_method", "n_grid", "seeds",
                "exact_exponent"},
               rows);
    return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& format) {
    if (inputs.empty())
        throw parameter_error("report needs at least one artifact file");
    struct Entry {
        std::string preset;
        std::string scenario;
        std::uint64_t seed;
        double slope;
        std::string verdict;
    };
    std::vector<Entry> entries;
    std::set<std::string> seen;
    int flagged = 0;
    for (const std::string& path : inputs) {
        const Artifact artifact = read_artifact_jsonl(path);
        const std::string scenario =
            artifact.config ? to_string(artifact.config->scenario) : "custom";
        const std::string preset = artifact.config ? artifact.config->preset : "";
        for (const auto& [seed, fit] : artifact.fits) {
            std::string verdict = "(unverified)";
            for (const auto& [vseed, report] : artifact.reports)
                if (vseed == seed)
                    verdict = to_string(report.verdict);
            std::ostringstream key;
            key << preset << '|' << scenario << '|' << seed << '|' << format_double(fit.slope)
                << '|' << verdict;
            if (!seen.insert(key.str()).second)
                continue; // identical rows from merged runs collapse
            if (verdict != "consistent" && verdict != "(unverified)")
                ++flagged;
            entries.push_back({preset, scenario, seed, fit.slope, verdict});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.scenario, a.preset, a.seed) < std::tie(b.scenario, b.preset, b.seed);
    });
    std::vector<std::vector<std::string>> rows;
    for (const Entry& e : entries)
        rows.push_back({e.preset.empty() ? "(ad hoc)" : e.preset, e.scenario,
                        std::to_string(e.seed), format_double(e.slope), e.verdict});
    print_rows(format_from_string(format), {"preset", "scenario", "seed", "slope", "verdict"},
               rows);
    if (flagged > 0)
        std::cerr << "FLAG: " << flagged << " verdict(s) are not consistent\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Summability index toolkit: bound calculator, extremal constructions and "
                 "growth-exponent experiments"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    BoundsArgs bounds_args;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "Evaluate index bounds for a query");
    bounds_cmd->add_option("--variant", bounds_args.variant, "mult or pol")->required();
    bounds_cmd->add_option("--m", bounds_args.m, "degree m >= 1")->required();
    bounds_cmd->add_option("--p", bounds_args.p, "summing exponent p > 0")->required();
    bounds_cmd->add_option("--q", bounds_args.q, "weak exponent q >= 1")->required();
    bounds_cmd->add_option("--domain", bounds_args.domain,
                           "domain kind: lq-star, lp, c0, scalar, abstract (default abstract)");
    bounds_cmd->add_option("--domain-exponent", bounds_args.domain_exponent,
                           "sequence exponent for --domain lp");
    bounds_cmd->add_option("--domain-cotype", bounds_args.domain_cotype,
                           "cotype of the domain (defaults to the cotype table)");
    bounds_cmd->add_option("--codomain", bounds_args.codomain,
                           "codomain kind (default abstract)");
    bounds_cmd->add_option("--codomain-exponent", bounds_args.codomain_exponent,
                           "sequence exponent for --codomain lp");
    bounds_cmd->add_option("--cotype", bounds_args.cotype,
                           "cotype of the codomain (defaults to the cotype table)");
    bounds_cmd->add_option("--field", bounds_args.field, "real or complex (default real)");
    bounds_cmd->add_option("--cotype-table", bounds_args.cotype_table_path,
                           "config file with a [cotype] section of exponent = cotype overrides");
    bounds_cmd->add_option("--format", bounds_args.format, "table, json or csv");

    FormArgs construct_args;
    std::string construct_out = "form.sumidx";
    CLI::App* construct_cmd = app.add_subcommand("construct", "Build and save a form");
    construct_cmd->add_option("--form", construct_args.form, "ksz, diagonal or coordinate")
        ->required();
    construct_cmd->add_option("--m", construct_args.m, "order")->required();
    construct_cmd->add_option("--n", construct_args.n, "dimension per slot")->required();
    construct_cmd->add_option("--seed", construct_args.seed, "seed (default 0)");
    construct_cmd->add_option("--exponent", construct_args.exponent,
                              "domain exponent per slot (default 2, 'inf' allowed)");
    construct_cmd->add_option("--out", construct_out, "output path");

    FormArgs norm_args;
    std::string norm_in;
    std::string norm_method = "ascent";
    int norm_restarts = 16;
    double norm_tol = 1e-10;
    int norm_max_iters = 1000;
    int norm_resolution = 24;
    std::uint64_t norm_seed = 0;
    std::string norm_format = "table";
    CLI::App* norm_cmd = app.add_subcommand("norm", "Estimate the operator norm of a form");
    norm_cmd->add_option("--in", norm_in, "serialized form file");
    norm_cmd->add_option("--form", norm_args.form, "ksz, diagonal or coordinate (inline build)");
    norm_cmd->add_option("--m", norm_args.m, "order (inline build)");
    norm_cmd->add_option("--n", norm_args.n, "dimension (inline build)");
    norm_cmd->add_option("--seed", norm_seed, "ascent restart seed (default 0)");
    norm_cmd->add_option("--form-seed", norm_args.seed, "seed for the inline ksz build");
    norm_cmd->add_option("--exponent", norm_args.exponent, "domain exponent (inline build)");
    norm_cmd->add_option("--method", norm_method, "ascent, bruteforce or analytic");
    norm_cmd->add_option("--restarts", norm_restarts, "ascent restarts (default 16)");
    norm_cmd->add_option("--tol", norm_tol, "ascent relative tolerance (default 1e-10)");
    norm_cmd->add_option("--max-iters", norm_max_iters, "ascent sweep limit (default 1000)");
    norm_cmd->add_option("--resolution", norm_resolution, "grid resolution (default 24)");
    norm_cmd->add_option("--format", norm_format, "table, json or csv");

    EstimateArgs estimate_args;
    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "Run a dimension-sweep experiment and fit the exponent");
    estimate_cmd->add_option("--preset", estimate_args.preset, "preset name (see presets)");
    estimate_cmd->add_option("--scenario", estimate_args.scenario,
                             "ksz_scalar, diagonal_scalar, coordinate_c0 or custom");
    estimate_cmd->add_option("--custom-form", estimate_args.custom_form,
                             "for --scenario custom: ksz, diagonal or coordinate");
    estimate_cmd->add_option("--m", estimate_args.m, "degree");
    estimate_cmd->add_option("--p", estimate_args.p, "summing exponent");
    estimate_cmd->add_option("--q", estimate_args.q, "weak exponent");
    estimate_cmd->add_option("--n-grid", estimate_args.n_grid,
                             "comma-separated strictly increasing dimensions");
    estimate_cmd->add_option("--seeds", estimate_args.seed_count,
                             "number of seeds (values master, master+1, ...)");
    auto* master_opt = estimate_cmd->add_option("--seed", estimate_args.master_seed,
                                                "master seed (default 0)");
    estimate_cmd->add_option("--seed-list", estimate_args.seed_list,
                             "explicit comma-separated seed values (overrides --seeds/--seed)");
    estimate_cmd->add_option("--norm-method", estimate_args.norm_method,
                             "analytic, ascent or bruteforce");
    estimate_cmd->add_option("--restarts", estimate_args.restarts, "ascent restarts");
    estimate_cmd->add_option("--tol", estimate_args.tol, "ascent tolerance");
    estimate_cmd->add_option("--max-iters", estimate_args.max_iters, "ascent sweep limit");
    estimate_cmd->add_option("--config", estimate_args.config_path,
                             "config file (sections per preset/scenario)");
    estimate_cmd->add_option("--out", estimate_args.out_prefix,
                             "artifact prefix (default sumidx_run)");
    estimate_cmd->add_flag("--verify", estimate_args.verify,
                           "verify fitted slopes against the bound calculator");
    estimate_cmd->add_option("--tolerance", estimate_args.tolerance,
                             "verification tolerance (default 1e-9 analytic, 0.15 randomized)");
    estimate_cmd->add_option("--format", estimate_args.format, "table, json or csv");

    std::string verify_in;
    double verify_tolerance = -1.0;
    std::string verify_format = "table";
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Re-verify the fits stored in an artifact");
    verify_cmd->add_option("--in", verify_in, "artifact .jsonl file")->required();
    verify_cmd->add_option("--tolerance", verify_tolerance, "verification tolerance");
    verify_cmd->add_option("--format", verify_format, "table, json or csv");

    std::string presets_format = "table";
    CLI::App* presets_cmd = app.add_subcommand("presets", "List canned scenario presets");
    presets_cmd->add_option("--format", presets_format, "table, json or csv");

    std::vector<std::string> report_inputs;
    std::string report_format = "table";
    CLI::App* report_cmd =
        app.add_subcommand("report", "Merge artifacts into a consolidated table");
    report_cmd->add_option("--in", report_inputs, "artifact .jsonl files")->required();
    report_cmd->add_option("--format", report_format, "table, json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        estimate_args.master_seed_given = master_opt->count() > 0;
        if (bounds_cmd->parsed())
            return run_bounds(bounds_args);
        if (construct_cmd->parsed())
            return run_construct(construct_args, construct_out);
        if (norm_cmd->parsed())
            return run_norm(norm_in, norm_args, norm_method, norm_restarts, norm_tol,
                            norm_max_iters, norm_resolution, norm_seed, norm_format);
        if (estimate_cmd->parsed())
            return run_estimate(estimate_args, join_invocation(argc, argv));
        if (verify_cmd->parsed())
            return run_verify(verify_in, verify_tolerance, verify_format);
        if (presets_cmd->parsed())
            return run_presets(presets_format);
        if (report_cmd->parsed())
            return run_report(report_inputs, report_format);
    } catch (const region_error& e) {
        std::cerr << "region error: " << e.what() << "\n";
        return 2;
    } catch (const size_error& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return 3;
    } catch (const schema_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 4;
    } catch (const parameter_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        std::cerr << "internal error (please report): " << e.what() << "\n";
        return 70;
    }
    return 0;
}
