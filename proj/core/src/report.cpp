#include "inspectfdi/report.hpp"

#include <cstdio>
#include <fstream>

#include "inspectfdi/errors.hpp"

namespace inspectfdi {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ReportError("cannot write report file '" + path.string() + "'");
  }
  return out;
}

void close_or_throw(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw ReportError("failed writing report file '" + path.string() + "'");
  }
}

void write_timeseries(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  out << "t,H,H_pred";
  for (int id : report.agent_ids) {
    out << ",H_" << id << ",H_" << id << "_pred"
        << ",Hm_" << id << ",tau_" << id;
  }
  out << "\n";
  for (const RunRow& row : report.rows) {
    out << format_double(row.t) << ',' << format_double(row.h_global) << ','
        << format_double(row.h_global_pred);
    for (std::size_t a = 0; a < report.agent_ids.size(); ++a) {
      out << ',' << format_double(row.h_agent[a]) << ',' << format_double(row.h_agent_pred[a])
          << ',' << format_double(row.metric[a]) << ',' << format_double(row.threshold[a]);
    }
    out << "\n";
  }
  close_or_throw(out, path);
}

void write_detections(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  out << "agent_id,t_detect,metric,threshold,classification,latency\n";
  for (const Detection& d : report.detections) {
    out << d.agent_id << ',' << format_double(d.time) << ',' << format_double(d.metric) << ','
        << format_double(d.threshold) << ',' << to_string(d.classification) << ',';
    if (d.latency) {
      out << format_double(*d.latency);
    }
    out << "\n";
  }
  close_or_throw(out, path);
}

void write_summary(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  out << "fault_id,expected_signature,observed_behavior,detected,latency\n";
  for (const FaultSummary& s : report.summary) {
    out << s.fault_id << ',' << s.expected_signature << ',' << s.observed_behavior << ','
        << (s.detected ? "yes" : "no") << ',';
    if (s.latency) {
      out << format_double(*s.latency);
    }
    out << "\n";
  }
  close_or_throw(out, path);
}

}  // namespace

void write_report(const RunReport& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw ReportError("cannot create report directory '" + directory.string() +
                      "': " + ec.message());
  }
  write_timeseries(report, directory / "timeseries.csv");
  write_detections(report, directory / "detections.csv");
  write_summary(report, directory / "summary.csv");
}

}  // namespace inspectfdi
