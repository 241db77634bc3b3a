#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpiassist/mpiedit.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

// All functions take standardized program texts.

/// Files calling each MPI function, counting a function once per file.
/// Sorted by count descending, then name.
inline std::vector<std::pair<std::string, std::size_t>> function_file_counts(const std::vector<std::string>& texts) {
    std::map<std::string, std::size_t> counts;
    for (const auto& text : texts) {
        std::set<std::string> names;
        for (const auto& c : extract_calls_lexical(text)) names.insert(c.name);
        for (const auto& n : names) ++counts[n];
    }
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

inline constexpr std::array<const char*, 4> kLengthBins = {"<=10", "11-50", "51-99", ">=100"};

inline std::size_t length_bin(std::size_t lines) {
    if (lines <= 10) return 0;
    if (lines <= 50) return 1;
    if (lines <= 99) return 2;
    return 3;
}

inline std::array<std::size_t, 4> length_histogram(const std::vector<std::string>& texts) {
    std::array<std::size_t, 4> bins{};
    for (const auto& t : texts) ++bins[length_bin(line_count(t))];
    return bins;
}

struct RatioHistogram {
    std::array<std::size_t, 10> bins{};  // bin k covers [k/10, (k+1)/10); 1.0 falls in the last bin
    std::size_t contributing = 0;        // files with both MPI_Init and MPI_Finalize
};

/// Line distance from the first MPI_Init to the last MPI_Finalize as a
/// fraction of the program length; nullopt when either call is missing.
inline std::optional<std::size_t> init_finalize_bin(const std::string& text) {
    int init = -1;
    int fin = -1;
    for (const auto& c : extract_calls_lexical(text)) {
        if (c.name == "MPI_Init" && init < 0) init = c.line;
        if (c.name == "MPI_Finalize") fin = c.line;
    }
    if (init < 0 || fin < 0) return std::nullopt;
    const long long total = static_cast<long long>(line_count(text));
    const long long span = std::clamp<long long>(fin - init, 0, total);
    return static_cast<std::size_t>(std::min<long long>(9, 10 * span / std::max(total, 1LL)));
}

inline RatioHistogram init_finalize_ratio(const std::vector<std::string>& texts) {
    RatioHistogram h;
    for (const auto& t : texts) {
        if (auto bin = init_finalize_bin(t)) {
            ++h.bins[*bin];
            ++h.contributing;
        }
    }
    return h;
}

struct CorpusStats {
    std::size_t files = 0;
    std::vector<std::pair<std::string, std::size_t>> function_counts;
    std::array<std::size_t, 4> lengths{};
    RatioHistogram ratios;
};

inline CorpusStats compute_stats(const std::vector<std::string>& texts) {
    return CorpusStats{texts.size(), function_file_counts(texts), length_histogram(texts), init_finalize_ratio(texts)};
}

inline std::string function_counts_csv(const CorpusStats& s) {
    std::string out = "function,files\n";
    for (const auto& [name, n] : s.function_counts) out += name + "," + std::to_string(n) + "\n";
    return out;
}

inline std::string lengths_csv(const CorpusStats& s) {
    std::string out = "lines,files\n";
    for (std::size_t i = 0; i < 4; ++i) out += std::string(kLengthBins[i]) + "," + std::to_string(s.lengths[i]) + "\n";
    return out;
}

/// gnuplot data: bin start, bin end, file count.
inline std::string ratio_dat(const CorpusStats& s) {
    std::string out = "# init-finalize ratio histogram, files with both calls: " +
                      std::to_string(s.ratios.contributing) + "\n# start end files\n";
    char buf[64];
    for (std::size_t k = 0; k < 10; ++k) {
        std::snprintf(buf, sizeof buf, "%.1f %.1f %zu\n", k / 10.0, (k + 1) / 10.0, s.ratios.bins[k]);
        out += buf;
    }
    return out;
}

} // namespace mpiassist
