#include "nsc/table_io.hpp"

#include "nsc/error.hpp"

#include <fmt/core.h>

#include <charconv>
#include <cmath>
#include <fstream>

namespace nsc {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return cells;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

TextTable read_text_table(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    TextTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (is_blank(line)) {
            continue;
        }
        if (!have_header) {
            table.delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
            table.header = split(line, table.delimiter);
            have_header = true;
            continue;
        }
        auto cells = split(line, table.delimiter);
        if (cells.size() != table.header.size()) {
            throw ParseError(fmt::format("{}: line {}: expected {} cells, found {}", path.string(), line_no,
                                         table.header.size(), cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) {
        throw ParseError(fmt::format("{}: missing header row", path.string()));
    }
    return table;
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t column, std::string_view column_name) {
    double value = 0.0;
    const char *first = cell.data();
    const char *last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        if (column_name.empty()) {
            throw ParseError(fmt::format("line {}, column {}: cannot parse '{}' as a finite number", line, column, cell));
        }
        throw ParseError(fmt::format("line {}, column {} ('{}'): cannot parse '{}' as a finite number", line, column,
                                     column_name, cell));
    }
    return value;
}

std::vector<std::string> read_label_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open label file '{}'", path.string()));
    }
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        const auto cell = trim(line);
        if (!cell.empty()) {
            labels.emplace_back(cell);
        }
    }
    return labels;
}

LabeledMatrix read_labeled_matrix(const std::filesystem::path &path, SampleOrientation orientation,
                                  const LabelSource &labels) {
    const TextTable table = read_text_table(path);
    LabeledMatrix out;

    if (orientation == SampleOrientation::rows) {
        std::ptrdiff_t label_col = -1;
        if (labels.column) {
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                if (table.header[c] == *labels.column) {
                    label_col = static_cast<std::ptrdiff_t>(c);
                }
            }
            if (label_col < 0 && !labels.column_optional) {
                throw ValidationError(fmt::format("{}: label column '{}' not found", path.string(), *labels.column));
            }
        }
        std::vector<std::size_t> feature_cols;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (static_cast<std::ptrdiff_t>(c) != label_col) {
                feature_cols.push_back(c);
                out.feature_names.push_back(table.header[c]);
            }
        }
        const auto n = static_cast<Index>(table.rows.size());
        out.values.resize(static_cast<Index>(feature_cols.size()), n);
        for (Index j = 0; j < n; ++j) {
            const auto &row = table.rows[j];
            for (std::size_t f = 0; f < feature_cols.size(); ++f) {
                const auto c = feature_cols[f];
                out.values(static_cast<Index>(f), j) = parse_cell(row[c], table.line_numbers[j], c + 1, table.header[c]);
            }
            if (label_col >= 0) {
                if (row[label_col].empty()) {
                    throw ValidationError(
                        fmt::format("{}: line {}: missing label", path.string(), table.line_numbers[j]));
                }
                out.labels.push_back(row[label_col]);
            }
        }
    } else {
        const auto n = static_cast<Index>(table.header.size()) - 1;
        std::ptrdiff_t label_row = -1;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (labels.column && table.rows[r].front() == *labels.column) {
                label_row = static_cast<std::ptrdiff_t>(r);
            }
        }
        if (labels.column && label_row < 0 && !labels.column_optional) {
            throw ValidationError(fmt::format("{}: label row '{}' not found", path.string(), *labels.column));
        }
        const auto p = static_cast<Index>(table.rows.size()) - (label_row >= 0 ? 1 : 0);
        out.values.resize(p, n);
        Index i = 0;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto &row = table.rows[r];
            if (static_cast<std::ptrdiff_t>(r) == label_row) {
                for (Index j = 0; j < n; ++j) {
                    if (row[j + 1].empty()) {
                        throw ValidationError(fmt::format("{}: missing label for sample column {}", path.string(),
                                                          j + 2));
                    }
                    out.labels.push_back(row[j + 1]);
                }
                continue;
            }
            out.feature_names.push_back(row.front());
            for (Index j = 0; j < n; ++j) {
                out.values(i, j) =
                    parse_cell(row[j + 1], table.line_numbers[r], static_cast<std::size_t>(j) + 2, table.header[j + 1]);
            }
            ++i;
        }
    }

    if (labels.file) {
        out.labels = read_label_file(*labels.file);
        if (static_cast<Index>(out.labels.size()) != out.values.cols()) {
            throw ValidationError(fmt::format("label file '{}' has {} labels for {} samples", labels.file->string(),
                                              out.labels.size(), out.values.cols()));
        }
    }
    return out;
}

}  // namespace nsc
