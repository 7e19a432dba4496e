#ifndef SCIRANK_TAXRANK_HPP
#define SCIRANK_TAXRANK_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scirank/taxonomy.hpp"

namespace scirank {

/// Taxonomic rank in exact hundredths (3.79 is stored as 379). Lower is better.
class TaxRank {
public:
    constexpr TaxRank() = default;
    constexpr explicit TaxRank(std::int64_t hundredths) : hundredths_(hundredths) {}

    /// Nearest hundredth of a real value.
    static TaxRank from_double(double value);

    constexpr std::int64_t hundredths() const noexcept { return hundredths_; }
    double value() const noexcept { return static_cast<double>(hundredths_) / 100.0; }
    std::string str() const;  // always two decimals

    auto operator<=>(const TaxRank&) const = default;

private:
    std::int64_t hundredths_ = 0;
};

struct ResultMapping {
    std::string researcher_id;
    std::vector<TaxonPath> taxons;  // multiset; duplicates count
    std::vector<std::size_t> lines;  // source line per taxon, if known
};

struct RankRecord {
    std::string researcher_id;
    std::vector<int> layers;
    int base_rank = 0;
    TaxRank tr;
    int trn = 0;
    int stratum = 0;
    // More than nine taxons at the base layer push Tr past base_rank - 1.
    bool underflow = false;
};

/// base - 0.1 per layer equal to the base - 0.01 per deeper layer, where the
/// base is the shallowest layer. Throws Error(EmptyMapping).
TaxRank derived_rank(std::span<const int> layers);

/// 100 for the cohort minimum, 0 for the cohort maximum, linear in between,
/// rounded half away from zero. A cohort with a single distinct value maps
/// entirely to 100.
std::vector<int> normalize_ranks(std::span<const TaxRank> ranks);
std::vector<int> normalize_ranks(std::span<const double> ranks);

/// Nearest of the centres 70, 30, 0 (strata 1, 2, 3); ties go to the lower
/// centre.
int assign_stratum(int trn);
std::vector<int> assign_strata(std::span<const int> trns);

/// Alternative strata: optimal 3-means of the Trn values, numbered from the
/// highest centre down. Cohorts with fewer distinct values use fewer strata.
std::vector<int> assign_strata_kmeans(std::span<const int> trns);

enum class StrataMode { NearestCentre, KMeans };

struct RankOptions {
    bool strict = true;  // every taxon must exist in the taxonomy
    StrataMode strata = StrataMode::NearestCentre;
};

/// Output order follows the input. Throws Error(UnknownTaxon) in strict mode
/// and Error(EmptyMapping) for a researcher without taxons.
std::vector<RankRecord> rank_cohort(const Taxonomy& taxonomy,
                                    std::span<const ResultMapping> mappings,
                                    const RankOptions& options = {});

}  // namespace scirank

#endif  // SCIRANK_TAXRANK_HPP
