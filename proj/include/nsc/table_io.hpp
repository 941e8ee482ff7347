#ifndef NSC_TABLE_IO_HPP_
#define NSC_TABLE_IO_HPP_

#include "nsc/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nsc {

/// Delimited text split into trimmed cells. `line_numbers[r]` is the 1-based
/// file line of `rows[r]`; blank lines are skipped.
struct TextTable {
    char delimiter = ',';
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

/// Reads a headed table; the delimiter is TAB if the header line contains one, else `,`.
[[nodiscard]] TextTable read_text_table(const std::filesystem::path &path);

/// Parses a finite double; throws ParseError naming `line`, `column` and the cell text.
[[nodiscard]] double parse_cell(std::string_view cell, std::size_t line, std::size_t column,
                                std::string_view column_name = {});

/// Numeric block of a matrix file plus whatever labels were found.
struct LabeledMatrix {
    Eigen::MatrixXd values;  ///< p x n
    std::vector<std::string> feature_names;
    std::vector<std::string> labels;  ///< empty when the source has none
};

/// Reads the matrix; labels are taken from `labels` when given. A missing
/// label column is a ValidationError.
[[nodiscard]] LabeledMatrix read_labeled_matrix(const std::filesystem::path &path, SampleOrientation orientation,
                                                const LabelSource &labels);

/// One label per non-blank line.
[[nodiscard]] std::vector<std::string> read_label_file(const std::filesystem::path &path);

}  // namespace nsc

#endif  // NSC_TABLE_IO_HPP_
