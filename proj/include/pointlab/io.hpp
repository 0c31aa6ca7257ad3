#ifndef POINTLAB_IO_HPP
#define POINTLAB_IO_HPP

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "pointlab/gas.hpp"
#include "pointlab/histogram.hpp"
#include "pointlab/stats.hpp"

namespace pointlab {

inline constexpr int kSchemaVersion = 1;

// Histogram CSV: a "# schema_version=N" comment line, a "count,frequency"
// header, then one row per count in ascending order.
void write_histogram_csv(const std::filesystem::path& path, const CountHistogram& hist);
CountHistogram read_histogram_csv(const std::filesystem::path& path);

// Joint histogram CSV: same comment line, header "x1,...,xk,frequency",
// rows in lexicographic key order.
void write_joint_histogram_csv(const std::filesystem::path& path, const JointHistogram& joint,
                               std::size_t key_width);
JointHistogram read_joint_histogram_csv(const std::filesystem::path& path);

nlohmann::json gof_json(const GofResult& result);

std::string iso8601_utc_now();

// Stamps schema_version and timestamp onto the report and writes it. The
// timestamp is the only key that varies between identical runs.
void write_json_report(const std::filesystem::path& path, nlohmann::json report);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace pointlab

#endif
