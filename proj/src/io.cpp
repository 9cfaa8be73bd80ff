#include "sumidx/io.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>

namespace sumidx {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

const char* kFormMagic = "SUMIDXFORM1";

const char* storage_name(FormStorage s) {
    switch (s) {
    case FormStorage::dense: return "dense";
    case FormStorage::diagonal: return "diagonal";
    default: return "coordinate";
    }
}

FormStorage storage_from_name(const std::string& name) {
    if (name == "dense")
        return FormStorage::dense;
    if (name == "diagonal")
        return FormStorage::diagonal;
    if (name == "coordinate")
        return FormStorage::coordinate;
    throw schema_error("form header field 'storage' has unknown value '" + name + "'");
}

const char* codomain_name(FormCodomain c) {
    return c == FormCodomain::scalar ? "scalar" : "c0_coordinates";
}

FormCodomain codomain_from_name(const std::string& name) {
    if (name == "scalar")
        return FormCodomain::scalar;
    if (name == "c0_coordinates")
        return FormCodomain::c0_coordinates;
    throw schema_error("form header field 'codomain' has unknown value '" + name + "'");
}

void append_le_double(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double read_le_double(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(bits);
}

json exponent_to_json(double e) {
    if (std::isinf(e))
        return json("inf");
    return json(e);
}

double exponent_from_json(const json& j, const char* field) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf")
            return kInfinity;
        throw schema_error(std::string("field '") + field + "' has a non-numeric value");
    }
    if (!j.is_number())
        throw schema_error(std::string("field '") + field + "' must be a number or \"inf\"");
    return j.get<double>();
}

} // namespace

void save_form(const std::filesystem::path& path, const MultilinearForm& form) {
    json header;
    header["order"] = form.order();
    header["dim"] = form.dim();
    header["storage"] = storage_name(form.storage());
    header["codomain"] = codomain_name(form.codomain());
    header["seed"] = form.seed();
    json exps = json::array();
    for (double e : form.domain_exponents())
        exps.push_back(exponent_to_json(e));
    header["exponents"] = exps;
    header["coeff_count"] = form.coefficients().size();

    std::string payload;
    payload.reserve(form.coefficients().size() * 8);
    for (double c : form.coefficients())
        append_le_double(payload, c);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot open form file for writing: " + path.string());
    out << kFormMagic << '\n' << header.dump() << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw data_error("failed writing form file: " + path.string());
}

MultilinearForm load_form(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open form file: " + path.string());
    std::string magic;
    std::getline(in, magic);
    if (magic != kFormMagic)
        throw schema_error("form file magic mismatch (expected " + std::string(kFormMagic) + ")");
    std::string header_line;
    std::getline(in, header_line);
    json header;
    try {
        header = json::parse(header_line);
    } catch (const json::exception& e) {
        throw schema_error(std::string("form header is not valid JSON: ") + e.what());
    }
    for (const char* field : {"order", "dim", "storage", "codomain", "seed", "exponents",
                              "coeff_count"})
        if (!header.contains(field))
            throw schema_error(std::string("form header missing field '") + field + "'");
    const int order = header["order"].get<int>();
    const int dim = header["dim"].get<int>();
    const FormStorage storage = storage_from_name(header["storage"].get<std::string>());
    const FormCodomain codomain = codomain_from_name(header["codomain"].get<std::string>());
    const std::uint64_t seed = header["seed"].get<std::uint64_t>();
    std::vector<double> exponents;
    for (const json& e : header["exponents"])
        exponents.push_back(exponent_from_json(e, "exponents"));
    const std::size_t count = header["coeff_count"].get<std::size_t>();
    std::vector<double> coeffs(count);
    if (count > 0) {
        std::vector<unsigned char> raw(count * 8);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw schema_error("form payload truncated");
        for (std::size_t i = 0; i < count; ++i)
            coeffs[i] = read_le_double(raw.data() + i * 8);
    }
    return MultilinearForm(order, dim, storage, codomain, std::move(coeffs), std::move(exponents),
                           seed);
}

RunRecord make_run_record(const std::string& invocation, const std::string& canonical_input) {
    RunRecord record;
    record.version = kToolVersion;
    record.invocation = invocation;
    char digest[40];
    std::snprintf(digest, sizeof(digest), "fnv1a64:%016" PRIx64, fnv1a64(canonical_input));
    record.input_digest = digest;
    std::time_t now;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[64];
    std::snprintf(stamp, sizeof(stamp), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min,
                  tm_utc.tm_sec);
    record.timestamp = stamp;
    return record;
}

namespace {

json config_to_json(const ExperimentConfig& config) {
    json j;
    j["scenario"] = to_string(config.scenario);
    j["m"] = config.m;
    j["p"] = config.p;
    j["q"] = config.q;
    j["n_grid"] = config.n_grid;
    j["seeds"] = config.seeds;
    j["norm_method"] = to_string(config.norm_method);
    j["ascent_restarts"] = config.ascent.restarts;
    j["ascent_tol"] = config.ascent.tol;
    j["ascent_max_iters"] = config.ascent.max_iters;
    j["coeff_budget"] = config.coeff_budget;
    j["custom_form"] = storage_name(config.custom_form);
    j["preset"] = config.preset;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    for (const char* field : {"scenario", "m", "p", "q", "n_grid", "seeds", "norm_method"})
        if (!j.contains(field))
            throw schema_error(std::string("config record missing field '") + field + "'");
    config.scenario = scenario_from_string(j["scenario"].get<std::string>());
    config.m = j["m"].get<int>();
    config.p = j["p"].get<double>();
    config.q = j["q"].get<double>();
    config.n_grid = j["n_grid"].get<std::vector<int>>();
    config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    config.norm_method = norm_method_from_string(j["norm_method"].get<std::string>());
    if (j.contains("ascent_restarts"))
        config.ascent.restarts = j["ascent_restarts"].get<int>();
    if (j.contains("ascent_tol"))
        config.ascent.tol = j["ascent_tol"].get<double>();
    if (j.contains("ascent_max_iters"))
        config.ascent.max_iters = j["ascent_max_iters"].get<int>();
    if (j.contains("coeff_budget"))
        config.coeff_budget = j["coeff_budget"].get<std::size_t>();
    if (j.contains("custom_form"))
        config.custom_form = storage_from_name(j["custom_form"].get<std::string>());
    if (j.contains("preset"))
        config.preset = j["preset"].get<std::string>();
    return config;
}

json bound_to_json(const std::optional<BoundResult>& bound) {
    if (!bound)
        return json(nullptr);
    json j;
    j["value"] = bound->value;
    j["direction"] = to_string(bound->direction);
    j["region"] = bound->region;
    j["citation"] = bound->citation;
    return j;
}

std::optional<BoundResult> bound_from_json(const json& j) {
    if (j.is_null())
        return std::nullopt;
    for (const char* field : {"value", "direction", "region", "citation"})
        if (!j.contains(field))
            throw schema_error(std::string("bound record missing field '") + field + "'");
    BoundResult bound;
    bound.value = j["value"].get<double>();
    const std::string dir = j["direction"].get<std::string>();
    bound.direction = dir == "lower"   ? BoundDirection::lower
                      : dir == "upper" ? BoundDirection::upper
                                       : BoundDirection::exact;
    bound.region = j["region"].get<std::string>();
    bound.citation = j["citation"].get<std::string>();
    return bound;
}

Verdict verdict_from_string(const std::string& name) {
    if (name == "consistent")
        return Verdict::consistent;
    if (name == "lower_violated")
        return Verdict::lower_violated;
    if (name == "upper_violated")
        return Verdict::upper_violated;
    if (name == "inconclusive")
        return Verdict::inconclusive;
    throw schema_error("verdict record has unknown verdict '" + name + "'");
}

} // namespace

std::string canonical_config_json(const ExperimentConfig& config) {
    return config_to_json(config).dump();
}

void write_artifact_jsonl(const std::filesystem::path& path, const Artifact& artifact) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot open artifact for writing: " + path.string());
    json run;
    run["record"] = "run";
    run["version"] = artifact.run.version;
    run["timestamp"] = artifact.run.timestamp;
    run["invocation"] = artifact.run.invocation;
    run["input_digest"] = artifact.run.input_digest;
    if (artifact.config)
        run["config"] = config_to_json(*artifact.config);
    out << run.dump() << '\n';
    for (const RatioSeries& series : artifact.series) {
        for (const RatioPoint& pt : series.points) {
            json j;
            j["record"] = "point";
            j["scenario"] = to_string(series.scenario);
            j["preset"] = series.preset;
            j["seed"] = series.seed;
            j["n"] = pt.n;
            j["mixed_sum"] = pt.mixed_sum;
            j["norm"] = pt.norm;
            j["weak_product"] = pt.weak_product;
            j["ratio"] = pt.ratio;
            out << j.dump() << '\n';
        }
    }
    for (const auto& [seed, fit] : artifact.fits) {
        json j;
        j["record"] = "fit";
        j["scenario"] = artifact.config ? to_string(artifact.config->scenario) : "custom";
        j["preset"] = artifact.config ? artifact.config->preset : "";
        j["seed"] = seed;
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["residual_rms"] = fit.residual_rms;
        j["n_used"] = fit.n_used;
        out << j.dump() << '\n';
    }
    for (const auto& [seed, report] : artifact.reports) {
        json j;
        j["record"] = "verdict";
        j["scenario"] = artifact.config ? to_string(artifact.config->scenario) : "custom";
        j["preset"] = artifact.config ? artifact.config->preset : "";
        j["seed"] = seed;
        j["slope"] = report.fitted.slope;
        j["intercept"] = report.fitted.intercept;
        j["residual_rms"] = report.fitted.residual_rms;
        j["n_used"] = report.fitted.n_used;
        j["tolerance"] = report.tolerance;
        j["verdict"] = to_string(report.verdict);
        j["lower"] = bound_to_json(report.theoretical.lower);
        j["upper"] = bound_to_json(report.theoretical.upper);
        j["exact"] = bound_to_json(report.theoretical.exact);
        out << j.dump() << '\n';
    }
    if (!out)
        throw data_error("failed writing artifact: " + path.string());
}

Artifact read_artifact_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open artifact: " + path.string());
    Artifact artifact;
    std::string line;
    std::size_t line_no = 0;
    auto series_for = [&](Scenario scenario, const std::string& preset,
                          std::uint64_t seed) -> RatioSeries& {
        for (RatioSeries& s : artifact.series)
            if (s.scenario == scenario && s.preset == preset && s.seed == seed)
                return s;
        RatioSeries s;
        s.scenario = scenario;
        s.preset = preset;
        s.seed = seed;
        artifact.series.push_back(std::move(s));
        return artifact.series.back();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw schema_error("artifact line " + std::to_string(line_no) +
                               " is not valid JSON: " + e.what());
        }
        if (!j.contains("record"))
            throw schema_error("artifact line " + std::to_string(line_no) +
                               " missing field 'record'");
        const std::string kind = j["record"].get<std::string>();
        if (kind == "run") {
            for (const char* field : {"version", "timestamp", "invocation", "input_digest"})
                if (!j.contains(field))
                    throw schema_error(std::string("run record missing field '") + field + "'");
            artifact.run.version = j["version"].get<std::string>();
            artifact.run.timestamp = j["timestamp"].get<std::string>();
            artifact.run.invocation = j["invocation"].get<std::string>();
            artifact.run.input_digest = j["input_digest"].get<std::string>();
            if (j.contains("config"))
                artifact.config = config_from_json(j["config"]);
        } else if (kind == "point") {
            for (const char* field :
                 {"scenario", "preset", "seed", "n", "mixed_sum", "norm", "weak_product", "ratio"})
                if (!j.contains(field))
                    throw schema_error(std::string("point record missing field '") + field + "'");
            RatioSeries& series = series_for(scenario_from_string(j["scenario"].get<std::string>()),
                                             j["preset"].get<std::string>(),
                                             j["seed"].get<std::uint64_t>());
            RatioPoint pt;
            pt.n = j["n"].get<int>();
            pt.mixed_sum = j["mixed_sum"].get<double>();
            pt.norm = j["norm"].get<double>();
            pt.weak_product = j["weak_product"].get<double>();
            pt.ratio = j["ratio"].get<double>();
            series.points.push_back(pt);
        } else if (kind == "fit") {
            for (const char* field : {"seed", "slope", "intercept", "residual_rms", "n_used"})
                if (!j.contains(field))
                    throw schema_error(std::string("fit record missing field '") + field + "'");
            ExponentFit fit;
            fit.slope = j["slope"].get<double>();
            fit.intercept = j["intercept"].get<double>();
            fit.residual_rms = j["residual_rms"].get<double>();
            fit.n_used = j["n_used"].get<int>();
            artifact.fits.emplace_back(j["seed"].get<std::uint64_t>(), fit);
        } else if (kind == "verdict") {
            for (const char* field : {"seed", "slope", "tolerance", "verdict"})
                if (!j.contains(field))
                    throw schema_error(std::string("verdict record missing field '") + field +
                                       "'");
            VerificationReport report;
            report.fitted.slope = j["slope"].get<double>();
            if (j.contains("intercept"))
                report.fitted.intercept = j["intercept"].get<double>();
            if (j.contains("residual_rms"))
                report.fitted.residual_rms = j["residual_rms"].get<double>();
            if (j.contains("n_used"))
                report.fitted.n_used = j["n_used"].get<int>();
            report.tolerance = j["tolerance"].get<double>();
            report.verdict = verdict_from_string(j["verdict"].get<std::string>());
            if (j.contains("lower"))
                report.theoretical.lower = bound_from_json(j["lower"]);
            if (j.contains("upper"))
                report.theoretical.upper = bound_from_json(j["upper"]);
            if (j.contains("exact"))
                report.theoretical.exact = bound_from_json(j["exact"]);
            artifact.reports.emplace_back(j["seed"].get<std::uint64_t>(), report);
        } else {
            throw schema_error("artifact line " + std::to_string(line_no) +
                               " has unknown record kind '" + kind + "'");
        }
    }
    return artifact;
}

void write_points_csv(const std::filesystem::path& path, const Artifact& artifact) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot open CSV for writing: " + path.string());
    out << "scenario,seed,n,mixed_sum,norm,weak_product,ratio\n";
    for (const RatioSeries& series : artifact.series)
        for (const RatioPoint& pt : series.points)
            out << to_string(series.scenario) << ',' << series.seed << ',' << pt.n << ','
                << format_double(pt.mixed_sum) << ',' << format_double(pt.norm) << ','
                << format_double(pt.weak_product) << ',' << format_double(pt.ratio) << '\n';
}

void write_fits_csv(const std::filesystem::path& path, const Artifact& artifact) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot open CSV for writing: " + path.string());
    out << "scenario,seed,slope,intercept,residual_rms,n_used\n";
    const std::string scenario =
        artifact.config ? to_string(artifact.config->scenario) : "custom";
    for (const auto& [seed, fit] : artifact.fits)
        out << scenario << ',' << seed << ',' << format_double(fit.slope) << ','
            << format_double(fit.intercept) << ',' << format_double(fit.residual_rms) << ','
            << fit.n_used << '\n';
}

double CotypeTable::lookup(double exponent) const {
    for (const auto& [e, r] : overrides)
        if (std::abs(e - exponent) <= 1e-12 || (std::isinf(e) && std::isinf(exponent)))
            return r;
    if (std::isinf(exponent))
        return kInfinity; // c0-like spaces have no finite cotype
    return std::max(exponent, 2.0);
}

ConfigFile ConfigFile::parse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open config file: " + path.string());
    ConfigFile file;
    file.sections.push_back({"", {}});
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t\r");
        const auto end = s.find_last_not_of(" \t\r");
        if (begin == std::string::npos)
            return std::string();
        return s.substr(begin, end - begin + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw schema_error("config line " + std::to_string(line_no) +
                                   ": unterminated section header");
            file.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw schema_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        file.sections.back().second.emplace_back(trim(line.substr(0, eq)),
                                                 trim(line.substr(eq + 1)));
    }
    return file;
}

const std::vector<std::pair<std::string, std::string>>*
ConfigFile::section(const std::string& name) const {
    for (const auto& [section_name, entries] : sections)
        if (section_name == name)
            return &entries;
    return nullptr;
}

} // namespace sumidx
