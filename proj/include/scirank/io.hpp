#ifndef SCIRANK_IO_HPP
#define SCIRANK_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scirank/ca.hpp"
#include "scirank/stratify.hpp"
#include "scirank/taxrank.hpp"

namespace scirank::io {

std::string read_file(const std::filesystem::path& path);

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// Comma-separated records with RFC 4180 quoting. Blank lines and lines
/// starting with '#' are skipped. Fields are trimmed of surrounding blanks.
std::vector<CsvRow> parse_csv(std::string_view text);

/// `researcher_id,taxon_path`, one row per incidence. Researchers keep the
/// order of their first appearance.
std::vector<ResultMapping> parse_mappings_csv(std::string_view text);

/// `id,<criterion 1>,...,<criterion M>`.
CriteriaMatrix<double> parse_criteria_csv(std::string_view text);

/// First column is the row id, the header holds column ids; ids prefixed
/// with '+' are supplementary. Supplementary cells of supplementary rows are
/// ignored.
ContingencyTable<double> parse_contingency_csv(std::string_view text);

/// printf-style fixed notation with negative zero folded to zero.
std::string fixed(double value, int digits);

std::string rank_report_csv(const std::vector<RankRecord>& records);
std::string rank_report_json(const std::vector<RankRecord>& records);

std::string stratify_report_csv(const CriteriaMatrix<double>& m, const StratificationSolution<double>& s,
                                const PcaAggregate<double>* pca);
std::string stratify_report_json(const CriteriaMatrix<double>& m, const StratificationSolution<double>& s,
                                 const PcaAggregate<double>* pca);

struct CaReport {
    const ContingencyTable<double>* table;
    const CaModel<double>* model;
    MatrixX<double> supplementary_row_coords;
    MatrixX<double> supplementary_col_coords;
    Eigen::Index axis_a = 0;
    Eigen::Index axis_b = 1;
};

CaReport make_ca_report(const ContingencyTable<double>& table, const CaModel<double>& model,
                        Eigen::Index axis_a, Eigen::Index axis_b);
std::string ca_report_csv(const CaReport& report);
std::string ca_report_json(const CaReport& report);

/// Upper triangle only: rows are all labels but the last, columns all but
/// the first.
std::string correlation_report_csv(const std::vector<std::string>& labels, const MatrixX<double>& r);
std::string correlation_report_json(const std::vector<std::string>& labels, const MatrixX<double>& r);

}  // namespace scirank::io

#endif  // SCIRANK_IO_HPP
