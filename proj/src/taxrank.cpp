#include "scirank/taxrank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "scirank/error.hpp"
#include "scirank/stratify.hpp"

namespace scirank {

TaxRank TaxRank::from_double(double value) {
    return TaxRank(static_cast<std::int64_t>(std::llround(value * 100.0)));
}

std::string TaxRank::str() const {
    const std::int64_t mag = hundredths_ < 0 ? -hundredths_ : hundredths_;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", hundredths_ < 0 ? "-" : "",
                  static_cast<long long>(mag / 100), static_cast<long long>(mag % 100));
    return buf;
}

TaxRank derived_rank(std::span<const int> layers) {
    if (layers.empty()) throw Error(ErrorKind::EmptyMapping, "derived_rank: no layers given");
    const int base = *std::min_element(layers.begin(), layers.end());
    std::int64_t at_base = 0, deeper = 0;
    for (int l : layers) (l == base ? at_base : deeper) += 1;
    return TaxRank(std::int64_t{base} * 100 - 10 * at_base - deeper);
}

namespace {

// round(num / den) half away from zero, den > 0.
std::int64_t round_ratio(std::int64_t num, std::int64_t den) {
    const std::int64_t mag = num < 0 ? -num : num;
    const std::int64_t q = (2 * mag + den) / (2 * den);
    return num < 0 ? -q : q;
}

}  // namespace

std::vector<int> normalize_ranks(std::span<const TaxRank> ranks) {
    if (ranks.empty()) return {};
    const auto [lo, hi] = std::minmax_element(ranks.begin(), ranks.end());
    const std::int64_t span = hi->hundredths() - lo->hundredths();
    std::vector<int> out;
    out.reserve(ranks.size());
    for (const auto& r : ranks)
        out.push_back(span == 0 ? 100
                                : static_cast<int>(round_ratio(100 * (hi->hundredths() - r.hundredths()), span)));
    return out;
}

std::vector<int> normalize_ranks(std::span<const double> ranks) {
    if (ranks.empty()) return {};
    const auto [lo, hi] = std::minmax_element(ranks.begin(), ranks.end());
    const double span = *hi - *lo;
    std::vector<int> out;
    out.reserve(ranks.size());
    for (double r : ranks)
        out.push_back(span == 0.0 ? 100 : static_cast<int>(std::round(100.0 * (*hi - r) / span)));
    return out;
}

int assign_stratum(int trn) {
    constexpr int centres[] = {70, 30, 0};
    int best = 0;
    for (int s = 1; s < 3; ++s)
        if (std::abs(trn - centres[s]) <= std::abs(trn - centres[best])) best = s;
    return best + 1;
}

std::vector<int> assign_strata(std::span<const int> trns) {
    std::vector<int> out;
    out.reserve(trns.size());
    for (int t : trns) out.push_back(assign_stratum(t));
    return out;
}

std::vector<int> assign_strata_kmeans(std::span<const int> trns) {
    if (trns.empty()) return {};
    const std::set<int> distinct(trns.begin(), trns.end());
    const int k = std::min<int>(3, static_cast<int>(distinct.size()));
    Eigen::VectorXd values(static_cast<Eigen::Index>(trns.size()));
    for (std::size_t i = 0; i < trns.size(); ++i) values(static_cast<Eigen::Index>(i)) = trns[i];
    const auto km = kmeans_1d(values, k);
    std::vector<int> out;
    out.reserve(trns.size());
    // Highest centre is the best stratum.
    for (int label : km.assignment) out.push_back(k - label);
    return out;
}

std::vector<RankRecord> rank_cohort(const Taxonomy& taxonomy, std::span<const ResultMapping> mappings,
                                    const RankOptions& options) {
    std::vector<RankRecord> records;
    records.reserve(mappings.size());
    for (const auto& m : mappings) {
        if (m.taxons.empty())
            throw Error(ErrorKind::EmptyMapping, "researcher " + m.researcher_id + " has no mapped taxons");
        RankRecord rec;
        rec.researcher_id = m.researcher_id;
        for (std::size_t t = 0; t < m.taxons.size(); ++t) {
            const auto& path = m.taxons[t];
            if (options.strict && !taxonomy.contains(path)) {
                const std::string where = t < m.lines.size() ? "line " + std::to_string(m.lines[t]) + ": " : "";
                throw Error(ErrorKind::UnknownTaxon,
                            where + "researcher " + m.researcher_id + ": taxon " + path.str() + " not in taxonomy");
            }
            rec.layers.push_back(static_cast<int>(layer_of(path)));
        }
        rec.base_rank = *std::min_element(rec.layers.begin(), rec.layers.end());
        rec.tr = derived_rank(rec.layers);
        rec.underflow = rec.tr.hundredths() <= std::int64_t{rec.base_rank - 1} * 100;
        records.push_back(std::move(rec));
    }

    // Normalisation and strata are cohort-wide.
    std::vector<TaxRank> trs;
    trs.reserve(records.size());
    for (const auto& r : records) trs.push_back(r.tr);
    const auto trn = normalize_ranks(trs);
    const auto strata = options.strata == StrataMode::KMeans ? assign_strata_kmeans(trn) : assign_strata(trn);
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].trn = trn[i];
        records[i].stratum = strata[i];
    }
    return records;
}

}  // namespace scirank
