#pragma once

#include <map>
#include <string>
#include <vector>

#include "hofd/io.hpp"

namespace hofd {

enum class StoppingRule { FixedK, MallowsCp };
enum class CpMode { Standardized, PaperLiteral };

/// L2-boosting configuration. gamma is the shrinkage step in (0,1];
/// k_max bounds the iteration count.
struct BoostConfig {
    double gamma = 0.7;
    int k_max = 500;
    StoppingRule stopping = StoppingRule::MallowsCp;
    CpMode cp_mode = CpMode::Standardized;

    void validate() const {
        if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0,1]");
        if (k_max < 1) throw ConfigError("k_max must be >= 1");
    }
};

struct TraceRow {
    int step = 0;        // 1-based
    int atom = -1;       // canonical index; -1 when not applicable
    double corr = 0.0;   // selection statistic at this step
    double rss = 0.0;    // residual sum of squares after the step
    double cp = 0.0;     // model-selection criterion value
    bool removal = false;  // FoBa backward steps only
};

/// Sparse fit over the dictionary: nonzero coefficients on raw atoms, the
/// empirical intercept, and the per-step trace.
struct FitResult {
    std::map<int, double> beta;  // canonical index -> coefficient
    double intercept = 0.0;
    std::vector<TraceRow> trace;
    int chosen_k = 0;
    double wall_seconds = 0.0;
    bool normalized_atoms = true;  // columns rescaled to unit empirical norm
    int singular_drops = 0;        // FoBa candidates rejected as collinear

    int nnz() const {
        int n = 0;
        for (const auto& kv : beta)
            if (kv.second != 0.0) ++n;
        return n;
    }
};

inline void trace_to_csv(const std::vector<TraceRow>& trace, const std::string& path) {
    CsvWriter csv;
    csv.header({"step", "atom", "corr", "rss", "cp"});
    for (const auto& row : trace)
        csv.row_strings({std::to_string(row.step), std::to_string(row.atom),
                         format_double(row.corr), format_double(row.rss),
                         format_double(row.cp)});
    csv.save(path);
}

}  // namespace hofd
