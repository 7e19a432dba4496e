#include "scirank/cli.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "scirank/ca.hpp"
#include "scirank/error.hpp"
#include "scirank/io.hpp"
#include "scirank/stats.hpp"
#include "scirank/stratify.hpp"
#include "scirank/svg.hpp"
#include "scirank/taxonomy.hpp"
#include "scirank/taxrank.hpp"

namespace scirank::cli {

namespace {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownTaxon: return kUnknownTaxon;
        case ErrorKind::BadK: return kInfeasible;
        case ErrorKind::ZeroMarginal: return kZeroMarginal;
        case ErrorKind::Parse:
        case ErrorKind::DuplicateTaxon:
        case ErrorKind::OrphanTaxon:
        case ErrorKind::IdMismatch:
        case ErrorKind::LengthMismatch:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::BadAxis:
        case ErrorKind::EmptyMapping:
        case ErrorKind::EmptyTable:
        case ErrorKind::NegativeEntry:
        case ErrorKind::NonFinite: return kParse;
        default: return kFailure;
    }
}

struct Common {
    std::string format = "csv";
    std::string output;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", c.output, "Write the report to a file instead of stdout");
}

void emit(const Common& c, const std::string& report, std::ostream& out) {
    if (c.output.empty()) {
        out << report;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw Error(ErrorKind::Parse, "cannot write '" + c.output + "'");
    f << report;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    const auto entries = parse_taxonomy_entries(io::read_file(path));
    const auto violations = validate(entries);
    if (!violations.empty()) {
        for (const auto& v : violations) err << path << ": " << v.describe() << '\n';
        return kParse;
    }
    const auto t = Taxonomy::from_entries(entries);
    std::size_t terminal = 0;
    for (const auto& [p, node] : t.nodes()) terminal += node.terminal ? 1 : 0;
    out << "ok: " << t.size() << " taxons, " << terminal << " terminal, depth " << t.depth() << '\n';
    return kOk;
}

struct RankArgs {
    std::string taxonomy, mappings;
    bool no_strict = false;
    std::string strata = "nearest";
};

int cmd_rank(const RankArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const auto taxonomy = parse_taxonomy(io::read_file(a.taxonomy));
    const auto mappings = io::parse_mappings_csv(io::read_file(a.mappings));

    RankOptions opt;
    opt.strict = !a.no_strict;
    opt.strata = a.strata == "kmeans" ? StrataMode::KMeans : StrataMode::NearestCentre;
    if (!opt.strict)
        for (const auto& m : mappings)
            for (std::size_t t = 0; t < m.taxons.size(); ++t)
                if (!taxonomy.contains(m.taxons[t]))
                    err << "warning: line " << m.lines[t] << ": researcher " << m.researcher_id << ": taxon "
                        << m.taxons[t].str() << " not in taxonomy\n";

    const auto records = rank_cohort(taxonomy, mappings, opt);
    for (const auto& r : records)
        if (r.underflow)
            err << "warning: researcher " << r.researcher_id << ": rank " << r.tr.str()
                << " crosses below base rank " << r.base_rank << " - 1\n";
    emit(c, c.format == "json" ? io::rank_report_json(records) : io::rank_report_csv(records), out);
    return kOk;
}

struct StratifyArgs {
    std::string criteria;
    int k = 3;
    int restarts = 20;
    std::uint64_t seed = 0;
    bool normalize = false;
    bool compare_pca = false;
};

int cmd_stratify(const StratifyArgs& a, const Common& c, std::ostream& out) {
    const auto m = io::parse_criteria_csv(io::read_file(a.criteria));
    StratifyOptions opt;
    opt.k = a.k;
    opt.restarts = a.restarts;
    opt.seed = a.seed;
    opt.normalize = a.normalize;
    const auto solution = ls_stratify(m, opt);

    std::optional<PcaAggregate<double>> pca;
    if (a.compare_pca) pca = pca_aggregate(m);
    const PcaAggregate<double>* p = pca ? &*pca : nullptr;
    emit(c, c.format == "json" ? io::stratify_report_json(m, solution, p) : io::stratify_report_csv(m, solution, p),
         out);
    return kOk;
}

struct CaArgs {
    std::string table;
    std::string axes = "1,2";
    std::string svg;
};

std::pair<Eigen::Index, Eigen::Index> parse_axes(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == s.npos) throw std::invalid_argument(s);
        std::size_t used_a = 0, used_b = 0;
        const std::string sa = s.substr(0, comma), sb = s.substr(comma + 1);
        const long a = std::stol(sa, &used_a), b = std::stol(sb, &used_b);
        if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(s);
        return {a - 1, b - 1};
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::BadAxis, "--axes expects two 1-based axis numbers like 1,2, got '" + s + "'");
    }
}

int cmd_ca(const CaArgs& a, const Common& c, std::ostream& out) {
    const auto table = io::parse_contingency_csv(io::read_file(a.table));
    const auto model = ca_fit(table);
    const auto [ax, bx] = parse_axes(a.axes);
    plane_inertia(model, ax, bx);  // validates the pair before any output
    const auto report = io::make_ca_report(table, model, ax, bx);
    if (!a.svg.empty()) {
        std::ofstream f(a.svg, std::ios::binary);
        if (!f) throw Error(ErrorKind::Parse, "cannot write '" + a.svg + "'");
        f << svg::ca_plane(report);
    }
    emit(c, c.format == "json" ? io::ca_report_json(report) : io::ca_report_csv(report), out);
    return kOk;
}

int cmd_corr(const std::vector<std::string>& files, const Common& c, std::ostream& out) {
    std::vector<CriterionVector<double>> vectors;
    std::vector<std::string> ids;
    for (const auto& path : files) {
        const auto m = io::parse_criteria_csv(io::read_file(path));
        if (ids.empty()) {
            ids = m.row_ids;
        } else {
            if (m.row_ids.size() != ids.size())
                throw Error(ErrorKind::IdMismatch, path + ": " + std::to_string(m.row_ids.size()) +
                                                       " rows, expected " + std::to_string(ids.size()));
            for (std::size_t i = 0; i < ids.size(); ++i)
                if (m.row_ids[i] != ids[i])
                    throw Error(ErrorKind::IdMismatch,
                                path + ": id '" + m.row_ids[i] + "' does not match '" + ids[i] + "'");
        }
        for (Eigen::Index j = 0; j < m.cols(); ++j) vectors.push_back({m.criterion_names[j], m.x.col(j)});
    }
    const auto r = correlation_matrix(vectors);
    std::vector<std::string> labels;
    for (const auto& v : vectors) labels.push_back(v.label);
    emit(c, c.format == "json" ? io::correlation_report_json(labels, r) : io::correlation_report_csv(labels, r), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Taxonomic ranking and multicriteria stratification of research results", "scirank"};
    app.require_subcommand(1);

    Common common;

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a taxonomy listing");
    validate_cmd->add_option("taxonomy", validate_path, "Taxonomy file")->required();

    RankArgs rank_args;
    auto* rank_cmd = app.add_subcommand("rank", "Taxonomic ranks, normalised ranks and strata");
    rank_cmd->add_option("taxonomy", rank_args.taxonomy, "Taxonomy file")->required();
    rank_cmd->add_option("mappings", rank_args.mappings, "researcher_id,taxon_path CSV")->required();
    rank_cmd->add_flag("--no-strict", rank_args.no_strict, "Allow taxons missing from the taxonomy");
    rank_cmd->add_option("--strata", rank_args.strata, "Stratum rule")->check(CLI::IsMember({"nearest", "kmeans"}));
    add_common(rank_cmd, common);

    StratifyArgs strat_args;
    auto* strat_cmd = app.add_subcommand("stratify", "Least-squares linear stratification of criteria");
    strat_cmd->add_option("criteria", strat_args.criteria, "Criteria CSV")->required();
    strat_cmd->add_option("--k", strat_args.k, "Number of strata");
    strat_cmd->add_option("--restarts", strat_args.restarts, "Number of starts");
    strat_cmd->add_option("--seed", strat_args.seed, "Seed for random starts");
    strat_cmd->add_flag("--normalize", strat_args.normalize, "Rescale every criterion onto 0-100 first");
    strat_cmd->add_flag("--compare-pca", strat_args.compare_pca, "Add the PCA aggregate");
    add_common(strat_cmd, common);

    CaArgs ca_args;
    auto* ca_cmd = app.add_subcommand("ca", "Correspondence analysis with supplementary elements");
    ca_cmd->add_option("table", ca_args.table, "Contingency CSV")->required();
    ca_cmd->add_option("--axes", ca_args.axes, "Plane to report, 1-based, e.g. 1,2");
    ca_cmd->add_option("--svg", ca_args.svg, "Write a scatter plot of the plane");
    add_common(ca_cmd, common);

    std::vector<std::string> corr_files;
    auto* corr_cmd = app.add_subcommand("corr", "Pearson correlations between criteria");
    corr_cmd->add_option("criteria", corr_files, "Criteria CSV files with matching ids")->required();
    add_common(corr_cmd, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    }

    try {
        if (*validate_cmd) return cmd_validate(validate_path, out, err);
        if (*rank_cmd) return cmd_rank(rank_args, common, out, err);
        if (*strat_cmd) return cmd_stratify(strat_args, common, out);
        if (*ca_cmd) return cmd_ca(ca_args, common, out);
        if (*corr_cmd) return cmd_corr(corr_files, common, out);
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace scirank::cli
