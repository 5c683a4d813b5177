// artifacts.hpp -- run outputs: CSV series (17 significant digits, stable
// column order), a minimal built-in SVG line plot, and JSON metadata checked
// against the shipped schema.
#pragma once

#include "tailsim/observe.hpp"

#include <string>

namespace tailsim {

// Columns: tau, re, im, abs, lpi, flags.
void write_series_csv(const std::string& path, const TimeSeries& s);
TimeSeries read_series_csv(const std::string& path);

// log|f| against log tau as a standalone SVG polyline plot.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const TimeSeries& s);

// Validates a metadata object against a small structural subset of the JSON
// schema shipped at schemas/run_metadata.schema.json (type / required /
// properties).  Returns an empty string on success, else the first violation.
std::string validate_against_schema(const std::string& schema_json,
                                    const std::string& doc_json);

} // namespace tailsim
