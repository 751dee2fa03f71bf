#include "wsvm/report.hpp"

#include <fstream>

#include "json.hpp"
#include "wsvm/error.hpp"

namespace wsvm {

namespace {

using nlohmann::ordered_json;

WeightScheme scheme_from_string(const std::string& s) {
  if (s == to_string(WeightScheme::Constant)) return WeightScheme::Constant;
  if (s == to_string(WeightScheme::InverseOppositeArea)) return WeightScheme::InverseOppositeArea;
  throw Error(ErrorCode::ParseError, "unknown weight scheme '" + s + "'");
}

ordered_json quality_json(const QualityReport& q) {
  ordered_json j;
  j["tet_count"] = q.tet_count;
  j["theta_min"] = q.theta_min;
  j["theta_min_avg"] = q.theta_min_avg;
  j["theta_max"] = q.theta_max;
  j["theta_max_avg"] = q.theta_max_avg;
  j["cond_avg"] = q.cond_avg;
  j["cond_max"] = q.cond_max;
  j["edge_ratio_avg"] = q.edge_ratio_avg;
  j["edge_ratio_max"] = q.edge_ratio_max;
  j["skew_avg"] = q.skew_avg;
  j["skew_max"] = q.skew_max;
  j["bad_fraction_percent"] = q.bad_fraction_percent;
  j["volume_mean"] = q.volume_mean;
  j["volume_std"] = q.volume_std;
  j["angle_histogram"] = {{"range_degrees", {0.0, 180.0}}, {"counts", q.angle_histogram}};
  j["volume_histogram"] = {{"range", {0.0, 3.0 * q.volume_mean}}, {"counts", q.volume_histogram}};
  return j;
}

QualityReport quality_from_json(const ordered_json& j) {
  QualityReport q;
  q.tet_count = j.at("tet_count").get<std::size_t>();
  q.theta_min = j.at("theta_min").get<double>();
  q.theta_min_avg = j.at("theta_min_avg").get<double>();
  q.theta_max = j.at("theta_max").get<double>();
  q.theta_max_avg = j.at("theta_max_avg").get<double>();
  q.cond_avg = j.at("cond_avg").get<double>();
  q.cond_max = j.at("cond_max").get<double>();
  q.edge_ratio_avg = j.at("edge_ratio_avg").get<double>();
  q.edge_ratio_max = j.at("edge_ratio_max").get<double>();
  q.skew_avg = j.at("skew_avg").get<double>();
  q.skew_max = j.at("skew_max").get<double>();
  q.bad_fraction_percent = j.at("bad_fraction_percent").get<double>();
  q.volume_mean = j.at("volume_mean").get<double>();
  q.volume_std = j.at("volume_std").get<double>();
  q.angle_histogram = j.at("angle_histogram").at("counts").get<std::vector<std::size_t>>();
  q.volume_histogram = j.at("volume_histogram").at("counts").get<std::vector<std::size_t>>();
  return q;
}

ordered_json ops_json(const OpCounts& o) {
  return {{"flip23", o.flip23},     {"edge_removal", o.edge_removal}, {"splits", o.splits},
          {"collapses", o.collapses}, {"solves", o.solves},             {"solves_skipped", o.solves_skipped}};
}

OpCounts ops_from_json(const ordered_json& j) {
  OpCounts o;
  o.flip23 = j.at("flip23").get<std::size_t>();
  o.edge_removal = j.at("edge_removal").get<std::size_t>();
  o.splits = j.at("splits").get<std::size_t>();
  o.collapses = j.at("collapses").get<std::size_t>();
  o.solves = j.at("solves").get<std::size_t>();
  o.solves_skipped = j.at("solves_skipped").get<std::size_t>();
  return o;
}

ordered_json trace_json(const RunTrace& t) {
  ordered_json stages = ordered_json::array();
  for (const StageResult& s : t.stages) {
    stages.push_back({{"stage", s.stage},
                      {"scheme", to_string(s.scheme)},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"initial_energy", s.initial_energy},
                      {"volume_cv_before", s.volume_cv_before},
                      {"volume_cv_after", s.volume_cv_after}});
  }
  ordered_json iters = ordered_json::array();
  for (const TraceEntry& e : t.entries) {
    iters.push_back({{"stage", e.stage},
                     {"scheme", to_string(e.scheme)},
                     {"iteration", e.iteration},
                     {"energy_before_solve", e.energy_before_solve},
                     {"total_energy", e.total_energy},
                     {"theta_min", e.theta_min},
                     {"theta_min_avg", e.theta_min_avg},
                     {"tet_count", e.tet_count},
                     {"vertex_count", e.vertex_count},
                     {"ops", ops_json(e.ops)}});
  }
  return {{"stages", stages}, {"iterations", iters}};
}

RunTrace trace_from_json(const ordered_json& j) {
  RunTrace t;
  for (const auto& s : j.at("stages")) {
    StageResult r;
    r.stage = s.at("stage").get<int>();
    r.scheme = scheme_from_string(s.at("scheme").get<std::string>());
    r.iterations = s.at("iterations").get<int>();
    r.converged = s.at("converged").get<bool>();
    r.initial_energy = s.at("initial_energy").get<double>();
    r.volume_cv_before = s.at("volume_cv_before").get<double>();
    r.volume_cv_after = s.at("volume_cv_after").get<double>();
    t.stages.push_back(r);
  }
  for (const auto& e : j.at("iterations")) {
    TraceEntry x;
    x.stage = e.at("stage").get<int>();
    x.scheme = scheme_from_string(e.at("scheme").get<std::string>());
    x.iteration = e.at("iteration").get<int>();
    x.energy_before_solve = e.at("energy_before_solve").get<double>();
    x.total_energy = e.at("total_energy").get<double>();
    x.theta_min = e.at("theta_min").get<double>();
    x.theta_min_avg = e.at("theta_min_avg").get<double>();
    x.tet_count = e.at("tet_count").get<std::size_t>();
    x.vertex_count = e.at("vertex_count").get<std::size_t>();
    x.ops = ops_from_json(e.at("ops"));
    t.entries.push_back(x);
  }
  return t;
}

}  // namespace

std::string report_to_json(const QualityReport& quality, const RunTrace* trace) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["quality"] = quality_json(quality);
  if (trace) doc["trace"] = trace_json(*trace);
  return doc.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& text) {
  try {
    const ordered_json doc = ordered_json::parse(text);
    const int version = doc.at("schema_version").get<int>();
    if (version != kReportSchemaVersion) {
      throw Error(ErrorCode::ParseError, "unsupported report schema_version " + std::to_string(version));
    }
    ReportDocument out;
    out.quality = quality_from_json(doc.at("quality"));
    if (doc.contains("trace")) out.trace = trace_from_json(doc.at("trace"));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

void write_report(const std::filesystem::path& path, const QualityReport& quality, const RunTrace* trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << report_to_json(quality, trace);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace wsvm
