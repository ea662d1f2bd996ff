#pragma once

#include <map>
#include <string>
#include <vector>

#include "roboevo/archive.hpp"

namespace roboevo {

struct TestResult {
    double statistic = 0.0;  // W+, the sum of positive-difference ranks
    double p_value = 1.0;
    int n = 0;               // pairs remaining after dropping zero differences
    enum class Method { Exact, NormalApproximation } method = Method::Exact;
};

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
// dropped; ties get midranks. The null distribution is exact for n <= 25
// (rank-sum convolution) and a tie-corrected normal approximation above.
// All-zero differences return p = 1; 0 < n < 5 throws an insufficient-sample
// error, as does a length mismatch.
TestResult wilcoxon_signed_rank(const std::vector<double>& xs, const std::vector<double>& ys);

// Unpaired alternative (Mann-Whitney rank-sum, tie-corrected normal
// approximation), exposed for methodological comparison.
TestResult rank_sum(const std::vector<double>& xs, const std::vector<double>& ys);

struct ComparisonRow {
    std::string metric;
    double mean_a = 0.0;  // across runs, of per-run final-generation means
    double mean_b = 0.0;
    double p_value = 1.0;
    int n = 0;
    bool significant = false;  // p < 0.05
};

// One test per descriptor plus fitness (9 rows), on per-run means over the
// final generation, paired by run index. Arms must hold the same number of
// runs. Rows whose non-zero differences fall below the minimum sample size
// report p = 1 (such a sample can never reach significance).
std::vector<ComparisonRow> compare_final_generation(const std::vector<RunArchive>& arm_a,
                                                    const std::vector<RunArchive>& arm_b,
                                                    bool unpaired = false);

std::string comparison_report_text(const std::vector<ComparisonRow>& rows,
                                   const std::string& label_a, const std::string& label_b);
std::string comparison_report_csv(const std::vector<ComparisonRow>& rows);

struct ProgressionPoint {
    int generation = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

// Cross-run statistics of the per-run population mean of one metric, per
// generation. Archives must agree on generation count.
std::vector<ProgressionPoint> progression_series(const std::vector<RunArchive>& archives,
                                                 const std::string& metric);

// generation,mean,median,q1,q3
std::string progression_csv(const std::vector<ProgressionPoint>& series);

// All metrics at once: the plot-ready summary of one experiment arm.
struct ArmSummary {
    std::map<std::string, std::vector<ProgressionPoint>> series;
};
ArmSummary summarize_arm(const std::vector<RunArchive>& archives);

// Final-generation per-run means for box plots: metric,arm,run,value
std::string final_generation_values_csv(const std::vector<RunArchive>& arm_a,
                                        const std::vector<RunArchive>& arm_b,
                                        const std::string& label_a, const std::string& label_b);

}  // namespace roboevo
