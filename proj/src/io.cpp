#include "scirank/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "scirank/error.hpp"

namespace scirank::io {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kBlank = " \t\r";

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(kBlank);
    if (b == s.npos) return {};
    auto e = s.find_last_not_of(kBlank);
    return std::string(s.substr(b, e - b + 1));
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_number(const std::string& field, std::size_t line) {
    double v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size())
        throw Error(ErrorKind::Parse, at_line(line) + "'" + field + "' is not a number");
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, at_line(line) + "non-finite value '" + field + "'");
    return v;
}

double rounded(double v, int digits) {
    const double scale = std::pow(10.0, digits);
    const double r = std::round(v * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

std::string scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == s.npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t first = text.find_first_not_of(" \t\r", i);
        if (first != text.npos && text[first] == '#') {
            const std::size_t nl = text.find('\n', first);
            i = nl == text.npos ? text.size() : nl + 1;
            ++line;
            continue;
        }
        CsvRow row;
        row.line = line;
        std::string field;
        bool quoted = false, was_quoted = false;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                }
                continue;
            }
            if (c == '"' && trim(field).empty()) {
                quoted = was_quoted = true;
                field.clear();
                continue;
            }
            if (c == ',') {
                row.fields.push_back(was_quoted ? field : trim(field));
                field.clear();
                was_quoted = false;
                continue;
            }
            if (c == '\n') {
                ++i;
                ++line;
                break;
            }
            if (was_quoted) {
                if (kBlank.find(c) != kBlank.npos) continue;
                throw Error(ErrorKind::Parse, at_line(line) + "text after a closing quote");
            }
            field += c;
        }
        if (quoted) throw Error(ErrorKind::Parse, at_line(row.line) + "unterminated quoted field");
        row.fields.push_back(was_quoted ? field : trim(field));
        const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !was_quoted;
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultMapping> parse_mappings_csv(std::string_view text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorKind::Parse, "mappings file is empty");
    const auto& header = rows.front();
    if (header.fields.size() != 2 || header.fields[0] != "researcher_id" || header.fields[1] != "taxon_path")
        throw Error(ErrorKind::Parse, at_line(header.line) + "expected header 'researcher_id,taxon_path'");

    std::vector<ResultMapping> out;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2 || row.fields[0].empty())
            throw Error(ErrorKind::Parse, at_line(row.line) + "expected 'researcher_id,taxon_path'");
        TaxonPath path;
        try {
            path = TaxonPath::parse(row.fields[1]);
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, at_line(row.line) + e.what());
        }
        auto [it, fresh] = index.emplace(row.fields[0], out.size());
        if (fresh) out.push_back({row.fields[0], {}, {}});
        out[it->second].taxons.push_back(std::move(path));
        out[it->second].lines.push_back(row.line);
    }
    return out;
}

CriteriaMatrix<double> parse_criteria_csv(std::string_view text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorKind::Parse, "criteria file is empty");
    const auto& header = rows.front();
    if (header.fields.size() < 2) throw Error(ErrorKind::Parse, at_line(header.line) + "need an id column and at least one criterion");

    CriteriaMatrix<double> m;
    m.criterion_names.assign(header.fields.begin() + 1, header.fields.end());
    const auto cols = static_cast<Eigen::Index>(m.criterion_names.size());
    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    if (n == 0) throw Error(ErrorKind::Parse, "criteria file has no data rows");
    m.x.resize(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i) + 1];
        if (static_cast<Eigen::Index>(row.fields.size()) != cols + 1)
            throw Error(ErrorKind::Parse, at_line(row.line) + "expected " + std::to_string(cols + 1) + " fields");
        m.row_ids.push_back(row.fields[0]);
        for (Eigen::Index j = 0; j < cols; ++j) m.x(i, j) = parse_number(row.fields[j + 1], row.line);
    }
    return m;
}

ContingencyTable<double> parse_contingency_csv(std::string_view text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorKind::Parse, "contingency file is empty");
    const auto& header = rows.front();
    const std::size_t width = header.fields.size();
    if (width < 2) throw Error(ErrorKind::Parse, at_line(header.line) + "need an id column and at least one column");

    ContingencyTable<double> t;
    std::vector<std::size_t> active_cols, sup_cols;
    for (std::size_t j = 1; j < width; ++j) {
        const std::string& id = header.fields[j];
        if (!id.empty() && id.front() == '+') {
            sup_cols.push_back(j);
            t.supplementary_col_ids.push_back(id.substr(1));
        } else {
            active_cols.push_back(j);
            t.col_ids.push_back(id);
        }
    }

    std::vector<std::vector<double>> active, sup_rows;
    std::vector<std::vector<double>> sup_col_values;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != width)
            throw Error(ErrorKind::Parse, at_line(row.line) + "expected " + std::to_string(width) + " fields");
        const std::string& id = row.fields[0];
        std::vector<double> values;
        for (std::size_t j : active_cols) values.push_back(parse_number(row.fields[j], row.line));
        if (!id.empty() && id.front() == '+') {
            t.supplementary_row_ids.push_back(id.substr(1));
            sup_rows.push_back(std::move(values));
        } else {
            t.row_ids.push_back(id);
            active.push_back(std::move(values));
            std::vector<double> sc;
            for (std::size_t j : sup_cols) sc.push_back(parse_number(row.fields[j], row.line));
            sup_col_values.push_back(std::move(sc));
        }
    }

    const auto nr = static_cast<Eigen::Index>(active.size());
    const auto nc = static_cast<Eigen::Index>(active_cols.size());
    t.counts.resize(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) t.counts(i, j) = active[i][j];
    t.supplementary_rows.resize(static_cast<Eigen::Index>(sup_rows.size()), nc);
    for (Eigen::Index i = 0; i < t.supplementary_rows.rows(); ++i)
        for (Eigen::Index j = 0; j < nc; ++j) t.supplementary_rows(i, j) = sup_rows[i][j];
    t.supplementary_cols.resize(nr, static_cast<Eigen::Index>(sup_cols.size()));
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < t.supplementary_cols.cols(); ++j) t.supplementary_cols(i, j) = sup_col_values[i][j];
    return t;
}

std::string fixed(double value, int digits) {
    char buf[64];
    const double r = rounded(value, digits);
    std::snprintf(buf, sizeof buf, "%.*f", digits, r);
    return buf;
}

// ---------------------------------------------------------------------------

namespace {

std::string join_layers(const std::vector<int>& layers) {
    std::string s;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(layers[i]);
    }
    return s;
}

}  // namespace

std::string rank_report_csv(const std::vector<RankRecord>& records) {
    std::ostringstream os;
    os << "researcher_id,layers,base_rank,tr,trn,stratum\n";
    for (const auto& r : records)
        os << quote_if_needed(r.researcher_id) << ',' << quote_if_needed(join_layers(r.layers)) << ','
           << r.base_rank << ',' << r.tr.str() << ',' << r.trn << ',' << r.stratum << '\n';
    return os.str();
}

std::string rank_report_json(const std::vector<RankRecord>& records) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["records"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json rec;
        rec["researcher_id"] = r.researcher_id;
        rec["layers"] = r.layers;
        rec["base_rank"] = r.base_rank;
        rec["tr"] = rounded(r.tr.value(), 2);
        rec["trn"] = r.trn;
        rec["stratum"] = r.stratum;
        rec["underflow"] = r.underflow;
        doc["records"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

std::string stratify_report_csv(const CriteriaMatrix<double>& m, const StratificationSolution<double>& s,
                                const PcaAggregate<double>* pca) {
    std::ostringstream os;
    os << "# objective: " << scientific(s.objective) << '\n';
    os << "# weights:";
    for (Eigen::Index j = 0; j < s.weights.size(); ++j) os << ' ' << m.criterion_names[j] << '=' << fixed(s.weights(j), 4);
    os << "\n# centres:";
    for (Eigen::Index c = 0; c < s.centres.size(); ++c) os << ' ' << c + 1 << '=' << fixed(s.centres(c), 4);
    os << "\n# restarts: " << s.restarts_used << ", best restart " << s.best_restart + 1 << " after "
       << s.iterations << " iterations\n";
    if (pca) {
        os << "# pca weights:";
        for (Eigen::Index j = 0; j < pca->weights.size(); ++j)
            os << ' ' << m.criterion_names[j] << '=' << fixed(pca->weights(j), 4);
        os << "\n# pca residual share: " << fixed(pca->residual_share, 4) << '\n';
    }
    const VectorX<double> f = combined_criterion(m.x, s.weights);
    os << "id,score,stratum" << (pca ? ",pca_score" : "") << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << quote_if_needed(m.row_ids[i]) << ',' << fixed(f(i), 4) << ',' << s.assignment[i] + 1;
        if (pca) os << ',' << fixed(pca->scores(i), 4);
        os << '\n';
    }
    return os.str();
}

std::string stratify_report_json(const CriteriaMatrix<double>& m, const StratificationSolution<double>& s,
                                 const PcaAggregate<double>* pca) {
    auto vec4 = [](const VectorX<double>& v) {
        ordered_json a = ordered_json::array();
        for (double x : v) a.push_back(rounded(x, 4));
        return a;
    };
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["criteria"] = m.criterion_names;
    doc["weights"] = vec4(s.weights);
    doc["centres"] = vec4(s.centres);
    doc["ids"] = m.row_ids;
    ordered_json assignment = ordered_json::array();
    for (int a : s.assignment) assignment.push_back(a + 1);
    doc["assignment"] = assignment;
    doc["scores"] = vec4(combined_criterion(m.x, s.weights));
    doc["objective"] = s.objective == 0.0 ? 0.0 : s.objective;
    doc["diagnostics"] = {{"restarts_used", s.restarts_used},
                          {"best_restart", s.best_restart + 1},
                          {"iterations_per_restart", s.iterations_per_restart}};
    if (pca) {
        doc["pca"] = {{"weights", vec4(pca->weights)},
                      {"residual_share", rounded(pca->residual_share, 4)},
                      {"scores", vec4(pca->scores)}};
    }
    return doc.dump(2) + "\n";
}

CaReport make_ca_report(const ContingencyTable<double>& table, const CaModel<double>& model, Eigen::Index axis_a,
                        Eigen::Index axis_b) {
    CaReport rep{&table, &model, {}, {}, axis_a, axis_b};
    const Eigen::Index axes = model.axes();
    rep.supplementary_row_coords.resize(table.supplementary_rows.rows(), axes);
    for (Eigen::Index i = 0; i < table.supplementary_rows.rows(); ++i)
        rep.supplementary_row_coords.row(i) =
            project_supplementary(model, table.supplementary_rows.row(i).transpose(), Side::Row).transpose();
    rep.supplementary_col_coords.resize(table.supplementary_cols.cols(), axes);
    for (Eigen::Index j = 0; j < table.supplementary_cols.cols(); ++j)
        rep.supplementary_col_coords.row(j) =
            project_supplementary(model, table.supplementary_cols.col(j), Side::Column).transpose();
    return rep;
}

std::string ca_report_csv(const CaReport& rep) {
    const auto& t = *rep.table;
    const auto& m = *rep.model;
    std::ostringstream os;
    os << "# total inertia: " << fixed(m.total_inertia, 4) << '\n';
    os << "# axis shares:";
    for (Eigen::Index k = 0; k < m.axes(); ++k) os << ' ' << k + 1 << '=' << fixed(m.inertia_shares(k), 4);
    os << "\n# plane " << rep.axis_a + 1 << ',' << rep.axis_b + 1 << ": "
       << fixed(plane_inertia(m, rep.axis_a, rep.axis_b), 4) << '\n';
    os << "kind,id,mass";
    for (Eigen::Index k = 0; k < m.axes(); ++k) os << ",dim" << k + 1;
    os << '\n';
    auto emit = [&](const char* kind, const std::string& id, const std::string& mass, auto coords) {
        os << kind << ',' << quote_if_needed(id) << ',' << mass;
        for (Eigen::Index k = 0; k < coords.size(); ++k) os << ',' << fixed(coords(k), 4);
        os << '\n';
    };
    for (Eigen::Index i = 0; i < m.row_coords.rows(); ++i)
        emit("row", t.row_ids[i], fixed(m.row_masses(i), 4), m.row_coords.row(i));
    for (Eigen::Index j = 0; j < m.col_coords.rows(); ++j)
        emit("col", t.col_ids[j], fixed(m.col_masses(j), 4), m.col_coords.row(j));
    for (Eigen::Index i = 0; i < rep.supplementary_row_coords.rows(); ++i)
        emit("suprow", t.supplementary_row_ids[i], "", rep.supplementary_row_coords.row(i));
    for (Eigen::Index j = 0; j < rep.supplementary_col_coords.rows(); ++j)
        emit("supcol", t.supplementary_col_ids[j], "", rep.supplementary_col_coords.row(j));
    return os.str();
}

std::string ca_report_json(const CaReport& rep) {
    const auto& t = *rep.table;
    const auto& m = *rep.model;
    auto points = [](const std::vector<std::string>& ids, const MatrixX<double>& coords, const VectorX<double>* mass) {
        ordered_json a = ordered_json::array();
        for (Eigen::Index i = 0; i < coords.rows(); ++i) {
            ordered_json p;
            p["id"] = ids[i];
            if (mass) p["mass"] = rounded((*mass)(i), 4);
            ordered_json c = ordered_json::array();
            for (Eigen::Index k = 0; k < coords.cols(); ++k) c.push_back(rounded(coords(i, k), 4));
            p["coords"] = c;
            a.push_back(std::move(p));
        }
        return a;
    };
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["total_inertia"] = rounded(m.total_inertia, 4);
    ordered_json shares = ordered_json::array();
    for (double s : m.inertia_shares) shares.push_back(rounded(s, 4));
    doc["inertia_shares"] = shares;
    doc["plane"] = {{"axes", {rep.axis_a + 1, rep.axis_b + 1}},
                    {"inertia", rounded(plane_inertia(m, rep.axis_a, rep.axis_b), 4)}};
    doc["rows"] = points(t.row_ids, m.row_coords, &m.row_masses);
    doc["columns"] = points(t.col_ids, m.col_coords, &m.col_masses);
    doc["supplementary_rows"] = points(t.supplementary_row_ids, rep.supplementary_row_coords, nullptr);
    doc["supplementary_columns"] = points(t.supplementary_col_ids, rep.supplementary_col_coords, nullptr);
    return doc.dump(2) + "\n";
}

std::string correlation_report_csv(const std::vector<std::string>& labels, const MatrixX<double>& r) {
    std::ostringstream os;
    const auto m = static_cast<Eigen::Index>(labels.size());
    os << "Criterion";
    for (Eigen::Index j = 1; j < m; ++j) os << ',' << quote_if_needed(labels[j]);
    os << '\n';
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        os << quote_if_needed(labels[i]);
        for (Eigen::Index j = 1; j < m; ++j) {
            os << ',';
            if (j > i) os << fixed(r(i, j), 4);
        }
        os << '\n';
    }
    return os.str();
}

std::string correlation_report_json(const std::vector<std::string>& labels, const MatrixX<double>& r) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["criteria"] = labels;
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < r.cols(); ++j) row.push_back(rounded(r(i, j), 4));
        rows.push_back(row);
    }
    doc["matrix"] = rows;
    return doc.dump(2) + "\n";
}

}  // namespace scirank::io
