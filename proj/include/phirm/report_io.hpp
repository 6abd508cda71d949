#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phirm/baselines.hpp"
#include "phirm/metric.hpp"

namespace phirm {

nlohmann::ordered_json to_json(const PhenotypeSummary& s);
nlohmann::ordered_json to_json(const PhirmReport& r);
nlohmann::ordered_json to_json(const BaselineScores& b);
nlohmann::ordered_json to_json(const PhirmConfig& cfg);

/// Non-finite doubles serialize as strings ("inf" for an exact-match
/// PSNR); everything else as JSON numbers.
nlohmann::ordered_json json_double(double v);

/// RFC 4180 field quoting: fields containing comma, quote or newline are
/// wrapped in double quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// One CRLF-terminated record.
std::string csv_line(const std::vector<std::string>& fields);

/// Fixed column order shared by `score pair --csv` and `score batch --csv`.
const std::vector<std::string>& report_csv_header();

/// Row values for one scored pair, in report_csv_header() order.
std::vector<std::string> report_csv_fields(const std::string& original,
                                           const std::string& reconstructed,
                                           const PhirmReport& r,
                                           const BaselineScores& b);

/// Doubles formatted with enough digits to round-trip exactly.
std::string format_double(double v);

}  // namespace phirm
