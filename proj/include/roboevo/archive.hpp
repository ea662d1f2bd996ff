#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roboevo/descriptors_types.hpp"

namespace roboevo {

struct IndividualRecord {
    std::uint64_t id = 0;
    double fitness = 0.0;
    DescriptorVector descriptors;
    int la_count = 0;
};

struct GenerationRecord {
    std::vector<IndividualRecord> population;  // post-selection, ordered by id
    long instabilities = 0;                    // evaluations flagged unstable
};

// The persisted record of one evolutionary run: generations + 1 entries
// (generation 0 is the evaluated initial population).
struct RunArchive {
    std::uint64_t seed = 0;
    std::vector<GenerationRecord> generations;
};

// metrics.csv layout: id, fitness, the eight descriptors, linear actuator
// count. Doubles are printed shortest-round-trip so files are byte-stable and
// parse back to the exact values.
std::string metrics_csv(const GenerationRecord& generation);
GenerationRecord parse_metrics_csv(const std::string& text);

// Named metric accessor used by the analysis pipeline.
double metric_value(const IndividualRecord& record, const std::string& metric);
const std::vector<std::string>& metric_names();  // 8 descriptors, fitness, la_count

// Reads runs/<run>/gen_<n>/metrics.csv back into an archive.
RunArchive load_run_archive(const std::string& run_dir);

// Loads every run_* subdirectory of an arm directory, sorted by name.
std::vector<RunArchive> load_arm(const std::string& arm_dir);

std::string generation_dir_name(int generation);
std::string run_dir_name(int run_index);

}  // namespace roboevo
