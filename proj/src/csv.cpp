#include "sitmark/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sitmark::csv {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string join_row(std::span<const std::string> cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            row += ',';
        }
        row += cells[i];
    }
    row += '\n';
    return row;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("rename '" + tmp + "' -> '" + path + "' failed: " +
                                 ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string fnv1a_hex(const std::string& content) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : content) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument("");
        }
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": cannot parse number '" + text + "'");
    }
}

}  // namespace

std::vector<ProviderQuote> read_provider_quotes(const std::string& path) {
    static const std::vector<std::string> kHeader = {
        "provider_id", "raw_price", "capability_score", "volume",
        "mmlu",        "humaneval", "gsm8k"};

    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file, header row is mandatory");
    }
    ++line_no;
    if (split_line(line) != kHeader) {
        throw std::runtime_error(
            path + ":1: expected header "
                   "provider_id,raw_price,capability_score,volume,mmlu,humaneval,gsm8k");
    }

    std::vector<ProviderQuote> quotes;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_line(line);
        const std::string context = path + ":" + std::to_string(line_no);
        if (cells.size() != kHeader.size()) {
            throw std::runtime_error(context + ": expected " +
                                     std::to_string(kHeader.size()) + " columns, got " +
                                     std::to_string(cells.size()));
        }
        ProviderQuote quote;
        quote.provider_id = cells[0];
        quote.raw_price = parse_double(cells[1], context);
        quote.capability_score = parse_double(cells[2], context);
        quote.volume = parse_double(cells[3], context);
        quote.benchmarks["mmlu"] = parse_double(cells[4], context);
        quote.benchmarks["humaneval"] = parse_double(cells[5], context);
        quote.benchmarks["gsm8k"] = parse_double(cells[6], context);
        quotes.push_back(std::move(quote));
    }
    return quotes;
}

}  // namespace sitmark::csv
