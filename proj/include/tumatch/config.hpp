#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tumatch/basis.hpp"
#include "tumatch/types.hpp"

namespace tumatch {

// Parsed and validated run configuration. Unknown basis kinds, shape
// mismatches and malformed sections are rejected at load time; CLI flags
// override individual fields afterwards.
struct RunConfig {
    TypeSpace space;
    BasisSet basis;

    std::optional<Margins> margins;          // inline or from margin files
    std::optional<std::vector<double>> lambda; // surplus weights

    // solver section
    double sigma = 1.0;
    double tol = 1e-10;
    long max_iter = 100000;

    // estimator section
    std::string method = "mm"; // np | sp | mm
    double pseudo_count = 0.0;

    // geometry section
    std::optional<std::vector<std::vector<double>>> directions;
    std::size_t n_directions = 360;
    std::optional<std::vector<double>> sigma_grid;

    // identify section
    std::optional<std::vector<double>> covariations_in;

    // io section
    std::optional<std::string> couples_path;
    std::optional<std::string> margins_men_path;
    std::optional<std::string> margins_women_path;
    std::optional<std::string> output_path;
    std::string format = "json"; // json | csv

    // resolved margins: inline config first, then margin files; throws
    // ConfigError when absent and required
    Margins require_margins() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

} // namespace tumatch
