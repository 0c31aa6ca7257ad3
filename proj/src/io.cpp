#include "pointlab/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pointlab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

// first non-comment line must be the expected header
std::string read_header(std::ifstream& in, const std::filesystem::path& path) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    return line;
  }
  throw std::runtime_error("missing header in " + path.string());
}

std::vector<std::int64_t> split_int64(const std::string& line) {
  std::vector<std::int64_t> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(std::stoll(field));
  return out;
}

}  // namespace

void write_histogram_csv(const std::filesystem::path& path, const CountHistogram& hist) {
  auto out = open_out(path);
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "count,frequency\n";
  for (const auto& [count, freq] : hist.frequencies) out << count << ',' << freq << '\n';
}

CountHistogram read_histogram_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  if (read_header(in, path) != "count,frequency")
    throw std::runtime_error("unexpected histogram header in " + path.string());
  CountHistogram hist;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_int64(line);
    if (fields.size() != 2) throw std::runtime_error("bad histogram row in " + path.string());
    hist.add(fields[0], static_cast<std::uint64_t>(fields[1]));
  }
  return hist;
}

void write_joint_histogram_csv(const std::filesystem::path& path, const JointHistogram& joint,
                               std::size_t key_width) {
  auto out = open_out(path);
  out << "# schema_version=" << kSchemaVersion << "\n";
  for (std::size_t i = 0; i < key_width; ++i) out << 'x' << (i + 1) << ',';
  out << "frequency\n";
  for (const auto& [key, freq] : joint.frequencies) {
    if (key.size() != key_width)
      throw std::runtime_error("joint histogram key width mismatch");
    for (std::int64_t k : key) out << k << ',';
    out << freq << '\n';
  }
}

JointHistogram read_joint_histogram_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string header = read_header(in, path);
  if (header.find("frequency") == std::string::npos)
    throw std::runtime_error("unexpected joint histogram header in " + path.string());
  JointHistogram joint;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_int64(line);
    if (fields.size() < 2) throw std::runtime_error("bad joint row in " + path.string());
    const auto freq = static_cast<std::uint64_t>(fields.back());
    fields.pop_back();
    joint.frequencies[fields] += freq;
    joint.total += freq;
  }
  return joint;
}

nlohmann::json gof_json(const GofResult& result) {
  return {{"statistic", result.statistic},
          {"dof", result.dof},
          {"p_value", result.p_value},
          {"bins_used", result.bins_used}};
}

std::string iso8601_utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json_report(const std::filesystem::path& path, nlohmann::json report) {
  report["schema_version"] = kSchemaVersion;
  report["timestamp"] = iso8601_utc_now();
  auto out = open_out(path);
  out << report.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  return nlohmann::json::parse(in);
}

}  // namespace pointlab
