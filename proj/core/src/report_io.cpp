#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kpflow/errors.hpp"
#include "kpflow/simengine.hpp"

namespace kpflow::sim {

namespace {

constexpr std::string_view kHeader =
    "flow_id,class,size_kb,phase,path,start_s,finish_s,fct_s,bytes_sent,bytes_delivered";

std::string join_path(const topo::Path& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(path[i]);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw IoError(fmt::format("report CSV line {}: bad field '{}'", line, s));
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used == str.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError(fmt::format("report CSV line {}: bad field '{}'", line, s));
}

}  // namespace

void write_report_csv(std::ostream& out, const RunReport& report) {
  out << kHeader << '\n';
  for (const FlowRecord& r : report.flows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.id, traffic::to_string(r.cls),
                       r.size_kb, r.phase, join_path(r.path), r.start_s, r.finish_s, r.fct_s,
                       r.bytes_sent, r.bytes_delivered);
  }
}

std::vector<FlowRecord> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw IoError("report CSV has an unexpected header");
  }
  std::vector<FlowRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      cols.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (cols.size() != 10) {
      throw IoError(fmt::format("report CSV line {} has {} columns", line_no, cols.size()));
    }
    FlowRecord r;
    r.id = parse_number<std::int64_t>(cols[0], line_no);
    if (cols[1] == "MF") {
      r.cls = traffic::FlowClass::mice;
    } else if (cols[1] == "EF") {
      r.cls = traffic::FlowClass::elephant;
    } else {
      throw IoError(fmt::format("report CSV line {}: unknown class '{}'", line_no, cols[1]));
    }
    r.size_kb = parse_number<std::int64_t>(cols[2], line_no);
    r.phase = parse_number<int>(cols[3], line_no);
    std::string_view p = cols[4];
    for (;;) {
      const auto pos = p.find('-');
      r.path.push_back(parse_number<topo::NodeId>(p.substr(0, pos), line_no));
      if (pos == std::string_view::npos) break;
      p.remove_prefix(pos + 1);
    }
    r.start_s = parse_double(cols[5], line_no);
    r.finish_s = parse_double(cols[6], line_no);
    r.fct_s = parse_double(cols[7], line_no);
    r.bytes_sent = parse_number<std::int64_t>(cols[8], line_no);
    r.bytes_delivered = parse_number<std::int64_t>(cols[9], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

nlohmann::json aggregates_json(const RunReport& report) {
  nlohmann::json timeline = nlohmann::json::array();
  for (std::size_t i = 0; i < report.timeline_s.size(); ++i) {
    timeline.push_back({{"t_s", report.timeline_s[i]}, {"mf_received", report.mf_received[i]}});
  }
  std::int64_t mice = 0;
  for (const auto& r : report.flows) mice += r.cls == traffic::FlowClass::mice ? 1 : 0;
  return {{"num_flows", report.flows.size()},
          {"num_mice", mice},
          {"packets_sent", report.packets_sent},
          {"packets_delivered", report.packets_delivered},
          {"plr_percent", report.plr_percent},
          {"mean_mf_fct_s", report.mean_mf_fct_s},
          {"mean_ef_fct_s", report.mean_ef_fct_s},
          {"goodput", report.goodput},
          {"mean_packet_size_bytes", report.mean_packet_size_bytes},
          {"mf_timeline", std::move(timeline)}};
}

}  // namespace kpflow::sim
