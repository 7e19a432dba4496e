#ifndef SCIRANK_TESTS_FIXTURES_HPP
#define SCIRANK_TESTS_FIXTURES_HPP

#include <array>
#include <filesystem>
#include <string>

#include "scirank/stratify.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return SCIRANK_DATA_DIR; }
inline std::string data(const char* name) { return (data_dir() / name).string(); }

// Published rank table: Tr (hundredths), Trn, stratum per scientist.
struct PublishedRank {
    const char* id;
    int tr;
    int trn;
    int stratum;
};

inline constexpr std::array<PublishedRank, 30> kPublishedRanks{{
    {"S1", 388, 73, 1},  {"S2", 350, 100, 1}, {"S3", 450, 29, 2},  {"S4", 390, 71, 1},  {"S5", 450, 29, 2},
    {"S6", 377, 81, 1},  {"S7", 480, 7, 3},   {"S8", 450, 29, 2},  {"S9", 450, 29, 2},  {"S10", 480, 7, 3},
    {"S11", 386, 74, 1}, {"S12", 386, 74, 1}, {"S13", 386, 74, 1}, {"S14", 490, 0, 3},  {"S15", 490, 0, 3},
    {"S16", 490, 0, 3},  {"S17", 439, 36, 2}, {"S18", 479, 8, 3},  {"S19", 469, 15, 3}, {"S20", 479, 8, 3},
    {"S21", 357, 95, 1}, {"S22", 478, 9, 3},  {"S23", 379, 79, 1}, {"S24", 490, 0, 3},  {"S25", 489, 1, 3},
    {"S26", 377, 81, 1}, {"S27", 460, 21, 2}, {"S28", 390, 71, 1}, {"S29", 488, 1, 3},  {"S30", 488, 1, 3},
}};

// Two criteria over eight scientists, labelled by their stratum letter.
inline scirank::CriteriaMatrix<double> two_criteria() {
    scirank::CriteriaMatrix<double> m;
    m.row_ids = {"C1", "C2", "B1", "B2", "B3", "B4", "A1", "A2"};
    m.criterion_names = {"x", "y"};
    m.x.resize(8, 2);
    m.x << 2, 0, 0, 1, 6, 0, 5, 0.5, 3, 1.5, 1, 2.5, 4, 2, 2, 3;
    return m;
}

// Published combined scores for the eight scientists.
inline constexpr std::array<double, 8> kPublishedLsScores{0.67, 0.67, 2.00, 2.00, 2.00, 2.00, 2.67, 2.67};
inline constexpr std::array<double, 8> kPublishedPcaScores{1.54, 0.23, 4.63, 3.97, 2.66, 1.34, 3.54, 2.23};

}  // namespace fixtures

#endif  // SCIRANK_TESTS_FIXTURES_HPP
