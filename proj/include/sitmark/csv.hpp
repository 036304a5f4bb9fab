// csv.hpp — CSV emission and ingestion.
//
// Dialect: comma separator, '.' decimal point, ISO-8601 dates, mandatory
// header row. Doubles print with %.17g so files round-trip bit-exactly.
// Files are written to a temporary name and renamed into place, so no
// output is ever left partially written.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sitmark/index_tpi.hpp"

namespace sitmark::csv {

std::string format_double(double value);

// Row-building helper: join already-formatted cells.
std::string join_row(std::span<const std::string> cells);

// Writes content via <path>.tmp + atomic rename. Throws std::runtime_error
// on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a 64-bit content hash, hex-encoded; used by the run manifest.
std::string fnv1a_hex(const std::string& content);

// Provider quote file: header provider_id,raw_price,capability_score,volume,
// mmlu,humaneval,gsm8k. Errors carry file:line context.
std::vector<ProviderQuote> read_provider_quotes(const std::string& path);

}  // namespace sitmark::csv
