#include "roboevo/archive.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roboevo {

namespace fs = std::filesystem;

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::runtime_error("metrics parse error: bad number \"" + field + "\" in " + context);
    }
    return v;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string metrics_csv(const GenerationRecord& generation) {
    std::string out = "id,fitness";
    for (const auto& name : descriptor_names()) {
        out += ',';
        out += name;
    }
    out += ",la_count\n";
    for (const auto& record : generation.population) {
        out += std::to_string(record.id);
        out += ',';
        append_double(out, record.fitness);
        for (const double value : record.descriptors.as_array()) {
            out += ',';
            append_double(out, value);
        }
        out += ',';
        out += std::to_string(record.la_count);
        out += '\n';
    }
    return out;
}

GenerationRecord parse_metrics_csv(const std::string& text) {
    GenerationRecord generation;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("metrics parse error: empty file");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 11) {
            throw std::runtime_error("metrics parse error: expected 11 fields, got " +
                                     std::to_string(fields.size()));
        }
        IndividualRecord record;
        record.id = std::stoull(fields[0]);
        record.fitness = parse_double(fields[1], "fitness");
        record.descriptors.branching = parse_double(fields[2], "branching");
        record.descriptors.coverage = parse_double(fields[3], "coverage");
        record.descriptors.rel_joints = parse_double(fields[4], "rel_joints");
        record.descriptors.rel_limbs = parse_double(fields[5], "rel_limbs");
        record.descriptors.rel_limb_length = parse_double(fields[6], "rel_limb_length");
        record.descriptors.proportion = parse_double(fields[7], "proportion");
        record.descriptors.absolute_size = static_cast<int>(parse_double(fields[8], "absolute_size"));
        record.descriptors.symmetry = parse_double(fields[9], "symmetry");
        record.la_count = std::stoi(fields[10]);
        generation.population.push_back(record);
    }
    return generation;
}

double metric_value(const IndividualRecord& record, const std::string& metric) {
    if (metric == "fitness") {
        return record.fitness;
    }
    if (metric == "la_count") {
        return record.la_count;
    }
    const auto& names = descriptor_names();
    const auto values = record.descriptors.as_array();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == metric) {
            return values[i];
        }
    }
    throw std::invalid_argument("unknown metric \"" + metric + "\"");
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n(descriptor_names().begin(), descriptor_names().end());
        n.push_back("fitness");
        n.push_back("la_count");
        return n;
    }();
    return names;
}

std::string generation_dir_name(int generation) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "gen_%03d", generation);
    return buf;
}

std::string run_dir_name(int run_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "run_%03d", run_index);
    return buf;
}

RunArchive load_run_archive(const std::string& run_dir) {
    RunArchive archive;
    const fs::path root(run_dir);
    if (!fs::is_directory(root)) {
        throw std::runtime_error("run directory not found: " + run_dir);
    }
    for (int g = 0;; ++g) {
        const fs::path gen_dir = root / generation_dir_name(g);
        if (!fs::is_directory(gen_dir)) {
            break;
        }
        archive.generations.push_back(parse_metrics_csv(read_file(gen_dir / "metrics.csv")));
    }
    if (archive.generations.empty()) {
        throw std::runtime_error("no generations found in " + run_dir);
    }
    return archive;
}

std::vector<RunArchive> load_arm(const std::string& arm_dir) {
    const fs::path root(arm_dir);
    if (!fs::is_directory(root)) {
        throw std::runtime_error("arm directory not found: " + arm_dir);
    }
    std::vector<fs::path> run_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0) {
            run_dirs.push_back(entry.path());
        }
    }
    std::sort(run_dirs.begin(), run_dirs.end());
    if (run_dirs.empty()) {
        throw std::runtime_error("no run_* directories in " + arm_dir);
    }
    std::vector<RunArchive> archives;
    archives.reserve(run_dirs.size());
    for (const auto& dir : run_dirs) {
        archives.push_back(load_run_archive(dir.string()));
    }
    return archives;
}

}  // namespace roboevo
