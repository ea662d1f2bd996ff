#include "roboevo/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace roboevo {

namespace {

constexpr int kExactLimit = 25;
constexpr int kMinSamples = 5;
constexpr double kSignificance = 0.05;

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

// Midranks of |values|, scaled by 2 so they are integers.
std::vector<long> scaled_midranks(const std::vector<double>& magnitudes) {
    const std::size_t n = magnitudes.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });
    std::vector<long> ranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share the midrank (i+1 + j+1)/2; doubled it
        // is (i + j + 2), an integer.
        const long scaled = static_cast<long>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = scaled;
        }
        i = j + 1;
    }
    return ranks;
}

// Tie-group sizes of the magnitudes, for the normal-approximation variance.
std::vector<long> tie_groups(std::vector<double> magnitudes) {
    std::sort(magnitudes.begin(), magnitudes.end());
    std::vector<long> groups;
    std::size_t i = 0;
    while (i < magnitudes.size()) {
        std::size_t j = i;
        while (j + 1 < magnitudes.size() && magnitudes[j + 1] == magnitudes[i]) {
            ++j;
        }
        groups.push_back(static_cast<long>(j - i + 1));
        i = j + 1;
    }
    return groups;
}

double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

// Exact null distribution of the scaled rank sum: counts[t] = number of sign
// assignments whose positive ranks sum to t.
std::vector<std::uint64_t> rank_sum_distribution(const std::vector<long>& scaled_ranks) {
    long total = 0;
    for (const long r : scaled_ranks) {
        total += r;
    }
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    long reach = 0;
    for (const long r : scaled_ranks) {
        for (long t = reach; t >= 0; --t) {
            if (counts[static_cast<std::size_t>(t)] != 0) {
                counts[static_cast<std::size_t>(t + r)] += counts[static_cast<std::size_t>(t)];
            }
        }
        reach += r;
    }
    return counts;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) {
        return sorted[0];
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

double final_generation_mean(const RunArchive& archive, const std::string& metric) {
    const auto& population = archive.generations.back().population;
    if (population.empty()) {
        throw std::runtime_error("empty final generation in archive");
    }
    double sum = 0.0;
    for (const auto& record : population) {
        sum += metric_value(record, metric);
    }
    return sum / static_cast<double>(population.size());
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("wilcoxon_signed_rank: samples must have equal length");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - ys[i];
        if (d != 0.0) {
            diffs.push_back(d);
        }
    }
    TestResult result;
    result.n = static_cast<int>(diffs.size());
    if (diffs.empty()) {
        result.p_value = 1.0;
        return result;
    }
    if (result.n < kMinSamples) {
        throw std::invalid_argument("wilcoxon_signed_rank: fewer than " +
                                    std::to_string(kMinSamples) +
                                    " non-zero differences (insufficient sample)");
    }

    std::vector<double> magnitudes(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        magnitudes[i] = std::abs(diffs[i]);
    }
    const std::vector<long> scaled = scaled_midranks(magnitudes);
    long scaled_w_pos = 0;
    long scaled_total = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        scaled_total += scaled[i];
        if (diffs[i] > 0.0) {
            scaled_w_pos += scaled[i];
        }
    }
    result.statistic = static_cast<double>(scaled_w_pos) / 2.0;

    if (result.n <= kExactLimit) {
        result.method = TestResult::Method::Exact;
        const auto counts = rank_sum_distribution(scaled);
        std::uint64_t le = 0;
        std::uint64_t ge = 0;
        for (long t = 0; t <= scaled_total; ++t) {
            const std::uint64_t c = counts[static_cast<std::size_t>(t)];
            if (t <= scaled_w_pos) {
                le += c;
            }
            if (t >= scaled_w_pos) {
                ge += c;
            }
        }
        const double denom = std::ldexp(1.0, result.n);  // 2^n
        const double tail = static_cast<double>(std::min(le, ge)) / denom;
        result.p_value = std::min(1.0, 2.0 * tail);
    } else {
        result.method = TestResult::Method::NormalApproximation;
        const double n = result.n;
        const double mean = n * (n + 1.0) / 4.0;
        double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
        for (const long t : tie_groups(magnitudes)) {
            const double td = static_cast<double>(t);
            variance -= (td * td * td - td) / 48.0;
        }
        const double z = (result.statistic - mean) / std::sqrt(variance);
        result.p_value = two_sided_normal_p(z);
    }
    return result;
}

TestResult rank_sum(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) {
        throw std::invalid_argument("rank_sum: samples must be non-empty");
    }
    std::vector<double> pooled = xs;
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const std::vector<long> scaled = scaled_midranks(pooled);
    double rank_sum_x = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rank_sum_x += static_cast<double>(scaled[i]) / 2.0;
    }
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    const double n = n1 + n2;
    const double u = rank_sum_x - n1 * (n1 + 1.0) / 2.0;

    TestResult result;
    result.statistic = u;
    result.n = static_cast<int>(n);
    result.method = TestResult::Method::NormalApproximation;
    double tie_term = 0.0;
    for (const long t : tie_groups(pooled)) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) {
        result.p_value = 1.0;  // every pooled value tied
        return result;
    }
    const double z = (u - n1 * n2 / 2.0) / std::sqrt(variance);
    result.p_value = two_sided_normal_p(z);
    return result;
}

std::vector<ComparisonRow> compare_final_generation(const std::vector<RunArchive>& arm_a,
                                                    const std::vector<RunArchive>& arm_b,
                                                    bool unpaired) {
    if (arm_a.empty() || arm_b.empty()) {
        throw std::invalid_argument("compare_final_generation: arms must be non-empty");
    }
    if (arm_a.size() != arm_b.size()) {
        throw std::invalid_argument(
            "compare_final_generation: arm sizes differ (pairing requires equal run counts): " +
            std::to_string(arm_a.size()) + " vs " + std::to_string(arm_b.size()));
    }

    std::vector<std::string> metrics(descriptor_names().begin(), descriptor_names().end());
    metrics.push_back("fitness");

    std::vector<ComparisonRow> rows;
    for (const auto& metric : metrics) {
        std::vector<double> means_a;
        std::vector<double> means_b;
        for (const auto& archive : arm_a) {
            means_a.push_back(final_generation_mean(archive, metric));
        }
        for (const auto& archive : arm_b) {
            means_b.push_back(final_generation_mean(archive, metric));
        }
        ComparisonRow row;
        row.metric = metric;
        row.mean_a = mean_of(means_a);
        row.mean_b = mean_of(means_b);
        try {
            const TestResult test =
                unpaired ? rank_sum(means_a, means_b) : wilcoxon_signed_rank(means_a, means_b);
            row.p_value = test.p_value;
            row.n = test.n;
        } catch (const std::invalid_argument&) {
            // Too few non-zero differences to test; such a sample cannot reach
            // significance, so report p = 1.
            row.p_value = 1.0;
            row.n = 0;
        }
        row.significant = row.p_value < kSignificance;
        rows.push_back(row);
    }
    return rows;
}

std::string comparison_report_text(const std::vector<ComparisonRow>& rows,
                                   const std::string& label_a, const std::string& label_b) {
    std::string out;
    out += "final-generation comparison: " + label_a + " vs " + label_b + "\n";
    out += "(per-run population means, Wilcoxon two-sided; * marks p < 0.05)\n\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-18s %12s %12s %10s\n", "metric", label_a.substr(0, 12).c_str(),
                  label_b.substr(0, 12).c_str(), "p-value");
    out += buf;
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-18s %12.4f %12.4f %10.4g%s\n", row.metric.c_str(),
                      row.mean_a, row.mean_b, row.p_value, row.significant ? " *" : "");
        out += buf;
    }
    return out;
}

std::string comparison_report_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "metric,mean_a,mean_b,p_value,n,significant\n";
    for (const auto& row : rows) {
        out += row.metric;
        out += ',';
        append_double(out, row.mean_a);
        out += ',';
        append_double(out, row.mean_b);
        out += ',';
        append_double(out, row.p_value);
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += row.significant ? "1" : "0";
        out += '\n';
    }
    return out;
}

std::vector<ProgressionPoint> progression_series(const std::vector<RunArchive>& archives,
                                                 const std::string& metric) {
    if (archives.empty()) {
        throw std::invalid_argument("progression_series: no archives");
    }
    const std::size_t generations = archives[0].generations.size();
    for (const auto& archive : archives) {
        if (archive.generations.size() != generations) {
            throw std::invalid_argument("progression_series: archives disagree on generation count");
        }
    }
    std::vector<ProgressionPoint> series;
    series.reserve(generations);
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<double> run_means;
        run_means.reserve(archives.size());
        for (const auto& archive : archives) {
            const auto& population = archive.generations[g].population;
            double sum = 0.0;
            for (const auto& record : population) {
                sum += metric_value(record, metric);
            }
            run_means.push_back(sum / static_cast<double>(population.size()));
        }
        std::sort(run_means.begin(), run_means.end());
        ProgressionPoint point;
        point.generation = static_cast<int>(g);
        point.mean = mean_of(run_means);
        point.median = quantile_sorted(run_means, 0.5);
        point.q1 = quantile_sorted(run_means, 0.25);
        point.q3 = quantile_sorted(run_means, 0.75);
        series.push_back(point);
    }
    return series;
}

std::string progression_csv(const std::vector<ProgressionPoint>& series) {
    std::string out = "generation,mean,median,q1,q3\n";
    for (const auto& point : series) {
        out += std::to_string(point.generation);
        out += ',';
        append_double(out, point.mean);
        out += ',';
        append_double(out, point.median);
        out += ',';
        append_double(out, point.q1);
        out += ',';
        append_double(out, point.q3);
        out += '\n';
    }
    return out;
}

ArmSummary summarize_arm(const std::vector<RunArchive>& archives) {
    ArmSummary summary;
    for (const auto& metric : metric_names()) {
        summary.series[metric] = progression_series(archives, metric);
    }
    return summary;
}

std::string final_generation_values_csv(const std::vector<RunArchive>& arm_a,
                                        const std::vector<RunArchive>& arm_b,
                                        const std::string& label_a, const std::string& label_b) {
    std::string out = "metric,arm,run,value\n";
    const auto emit = [&out](const std::vector<RunArchive>& arm, const std::string& label) {
        for (const auto& metric : metric_names()) {
            for (std::size_t r = 0; r < arm.size(); ++r) {
                out += metric;
                out += ',';
                out += label;
                out += ',';
                out += std::to_string(r);
                out += ',';
                append_double(out, final_generation_mean(arm[r], metric));
                out += '\n';
            }
        }
    };
    emit(arm_a, label_a);
    emit(arm_b, label_b);
    return out;
}

}  // namespace roboevo
