#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sumidx/experiments.hpp"
#include "sumidx/forms.hpp"

namespace sumidx {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit hash; platform-stable input digests.
std::uint64_t fnv1a64(std::string_view data);

/// Formats a double with 17 significant digits ('.' decimal point, no
/// locale); round-trips bit-exactly through strtod.
std::string format_double(double value);

/// Writes a form as a one-line JSON header followed by the raw little-endian
/// coefficient payload (dense storage only). Round-trips bit-exactly.
void save_form(const std::filesystem::path& path, const MultilinearForm& form);
MultilinearForm load_form(const std::filesystem::path& path);

/// Provenance header recorded at the top of every artifact.
struct RunRecord {
    std::string timestamp;   // ISO-8601 UTC; honors SOURCE_DATE_EPOCH
    std::string version;     // tool version
    std::string invocation;  // full command line
    std::string input_digest; // fnv1a64 over the canonical config
};

RunRecord make_run_record(const std::string& invocation, const std::string& canonical_input);

/// Full result bundle of one experiment invocation.
struct Artifact {
    RunRecord run;
    std::optional<ExperimentConfig> config;
    std::vector<RatioSeries> series;
    std::vector<std::pair<std::uint64_t, ExponentFit>> fits; // keyed by seed
    std::vector<std::pair<std::uint64_t, VerificationReport>> reports;
    std::vector<std::string> scenario_labels; // parallel to series (scenario string)
};

/// Canonical JSON of a config (sorted keys, no timestamp); digest input.
std::string canonical_config_json(const ExperimentConfig& config);

/// JSON-lines artifact: one run record, then one record per point, fit and
/// verdict. Re-parses to an identical in-memory artifact.
void write_artifact_jsonl(const std::filesystem::path& path, const Artifact& artifact);
Artifact read_artifact_jsonl(const std::filesystem::path& path);

/// CSV tables: data points (columns scenario, seed, n, mixed_sum, norm,
/// weak_product, ratio) and fit summaries.
void write_points_csv(const std::filesystem::path& path, const Artifact& artifact);
void write_fits_csv(const std::filesystem::path& path, const Artifact& artifact);

/// Cotype lookup for sequence-space descriptors. Built-in rule: l_s has
/// cotype max(s, 2); s = inf (c0-like) has none. A config file section
/// [cotype] with `s = r` entries overrides single exponents.
struct CotypeTable {
    std::vector<std::pair<double, double>> overrides;

    double lookup(double exponent) const;
};

/// Flat key-value config file with [section] headers, `key = value` lines and
/// '#' comments. Used both for experiment configs and the cotype table.
struct ConfigFile {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

    static ConfigFile parse(const std::filesystem::path& path);
    const std::vector<std::pair<std::string, std::string>>* section(const std::string& name) const;
};

} // namespace sumidx
