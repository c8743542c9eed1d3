#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "oel/errors.hpp"
#include "oel/image.hpp"
#include "oel/memory.hpp"

namespace oel {

/// L x m table of per-latent same-state thresholds, one row per abstraction
/// level. Row 1 holds the smallest per-latent change ever experienced, row L
/// the largest; intermediate rows walk the sorted change distribution.
class ThresholdTable {
  public:
    static ThresholdTable build(const TripletStore& store, int levels) {
        if (store.empty()) throw ConfigError("cannot build thresholds from an empty store");
        if (!store.encoded()) throw ConfigError("store must be encoded first");
        if (levels < 2) throw ConfigError("need at least 2 abstraction levels");
        const int m = store.latent_count();
        const std::size_t T = store.size();

        std::vector<std::vector<double>> diffs(m, std::vector<double>(T));
        for (std::size_t t = 0; t < T; ++t) {
            const Latent& pre = *store[t].pre_latent;
            const Latent& post = *store[t].post_latent;
            for (int j = 0; j < m; ++j) diffs[j][t] = std::abs(pre[j] - post[j]);
        }
        for (int j = 0; j < m; ++j) std::stable_sort(diffs[j].begin(), diffs[j].end());

        ThresholdTable table;
        table.levels_ = levels;
        table.m_ = m;
        table.distances_.resize(static_cast<std::size_t>(levels) * m);
        for (int level = 1; level <= levels; ++level) {
            const std::size_t rank = static_cast<std::size_t>(std::llround(
                static_cast<double>(level - 1) * static_cast<double>(T - 1) / (levels - 1)));
            for (int j = 0; j < m; ++j) table.at(level, j) = diffs[j][rank];
        }
        return table;
    }

    int levels() const { return levels_; }
    int latent_count() const { return m_; }

    double threshold(int level, int j) const {
        check_level(level);
        return distances_[static_cast<std::size_t>(level - 1) * m_ + j];
    }

    /// True iff every latent coordinate of a and b is within this level's
    /// threshold. Reflexive and symmetric, not transitive.
    bool same_state(const Latent& a, const Latent& b, int level) const {
        check_level(level);
        const double* row = &distances_[static_cast<std::size_t>(level - 1) * m_];
        for (int j = 0; j < m_; ++j)
            if (std::abs(a[j] - b[j]) > row[j]) return false;
        return true;
    }

    bool rows_equal(int level_a, int level_b) const {
        check_level(level_a);
        check_level(level_b);
        const double* ra = &distances_[static_cast<std::size_t>(level_a - 1) * m_];
        const double* rb = &distances_[static_cast<std::size_t>(level_b - 1) * m_];
        return std::equal(ra, ra + m_, rb);
    }

    void save_csv(std::ostream& os) const {
        os << "level";
        for (int j = 0; j < m_; ++j) os << ",latent" << j;
        os << "\n";
        for (int level = 1; level <= levels_; ++level) {
            os << level;
            for (int j = 0; j < m_; ++j) os << "," << threshold(level, j);
            os << "\n";
        }
    }

  private:
    double& at(int level, int j) {
        return distances_[static_cast<std::size_t>(level - 1) * m_ + j];
    }
    void check_level(int level) const {
        if (level < 1 || level > levels_) throw ConfigError("abstraction level out of range");
    }

    int levels_ = 0;
    int m_ = 0;
    std::vector<double> distances_;  // row-major, level-1 first
};

}  // namespace oel
