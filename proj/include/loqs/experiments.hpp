// Canned, seed-reproducible experiments behind the command-line runner.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace loqs {

struct UnknownExperiment : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidParameter : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamSpec {
    std::string name;
    std::string type;  // "float", "int", "string"
    std::string default_value;
    double min = 0, max = 0;          // for numeric types
    std::vector<std::string> choices;  // for string types (empty = free)
    std::string doc;
};

struct ExperimentInfo {
    std::string id;
    std::string summary;
    std::vector<ParamSpec> params;
};

struct ExperimentResult {
    // ordered key/value payload; all numeric values already formatted with
    // %.12g so that equal inputs give byte-identical documents
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::string> series_header;
    std::vector<std::vector<std::string>> series;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Validates `params` against the schema (throws InvalidParameter naming
/// the offending field), then runs the experiment.
ExperimentResult run_experiment(const std::string& id,
                                const std::map<std::string, std::string>& params,
                                std::uint64_t seed);

/// The self-describing result document (key = value plus series block).
std::string render_document(const std::string& id,
                            const std::map<std::string, std::string>& params, std::uint64_t seed,
                            const ExperimentResult& result);

std::string render_series_csv(const ExperimentResult& result);

/// key = value file parser ([section] headers group keys as section.key)
std::map<std::string, std::string> parse_param_file(const std::string& text);

std::string library_version();

}  // namespace loqs
