#include "mssr/report.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace mssr {

using nlohmann::json;

namespace {

double number_or_inf(const json& j, double sign) {
  return j.is_null() ? sign * std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::string to_json(const ConvergenceReport& report) {
  json j;
  j["network"] = report.network;
  j["event"] = report.event;
  j["t"] = report.t;
  j["samples"] = report.samples;
  j["base_seed"] = report.base_seed;
  j["reference"] = {{"method", report.reference_method},
                    {"probability", report.reference_probability},
                    {"stderr", report.reference_stderr}};
  j["points"] = json::array();
  for (const auto& p : report.points) {
    j["points"].push_back({{"N", p.N},
                           {"seed", p.seed},
                           {"samples", p.samples},
                           {"capped", p.capped},
                           {"probability", p.probability},
                           {"d", p.d},
                           {"stderr", p.standard_error},
                           {"used_in_fit", p.used_in_fit}});
  }
  if (report.fit) {
    const auto& f = *report.fit;
    j["fit"] = {{"slope", f.slope},         {"intercept", f.intercept}, {"slope_stderr", f.slope_stderr},
                {"ci_lower", f.ci_lower},   {"ci_upper", f.ci_upper},   {"points", f.points}};
  } else {
    j["fit"] = nullptr;
  }
  j["nu"] = report.nu;
  j["reliable"] = report.reliable;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

ConvergenceReport convergence_report_from_json(std::string_view text) {
  const json j = json::parse(text);
  ConvergenceReport r;
  r.network = j.at("network").get<std::string>();
  r.event = j.at("event").get<std::string>();
  r.t = j.at("t").get<double>();
  r.samples = j.at("samples").get<std::size_t>();
  r.base_seed = j.at("base_seed").get<std::uint64_t>();
  r.reference_method = j.at("reference").at("method").get<std::string>();
  r.reference_probability = j.at("reference").at("probability").get<double>();
  r.reference_stderr = j.at("reference").at("stderr").get<double>();
  for (const auto& p : j.at("points")) {
    ConvergencePoint point;
    point.N = p.at("N").get<std::int64_t>();
    point.seed = p.at("seed").get<std::uint64_t>();
    point.samples = p.at("samples").get<std::size_t>();
    point.capped = p.at("capped").get<std::size_t>();
    point.probability = p.at("probability").get<double>();
    point.d = p.at("d").get<double>();
    point.standard_error = p.at("stderr").get<double>();
    point.used_in_fit = p.at("used_in_fit").get<bool>();
    r.points.push_back(point);
  }
  if (!j.at("fit").is_null()) {
    const auto& f = j.at("fit");
    PowerLawFit fit;
    fit.slope = f.at("slope").get<double>();
    fit.intercept = f.at("intercept").get<double>();
    fit.slope_stderr = number_or_inf(f.at("slope_stderr"), 1.0);
    fit.ci_lower = number_or_inf(f.at("ci_lower"), -1.0);
    fit.ci_upper = number_or_inf(f.at("ci_upper"), 1.0);
    fit.points = f.at("points").get<std::size_t>();
    r.fit = fit;
  }
  r.nu = j.at("nu").get<double>();
  r.reliable = j.at("reliable").get<bool>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "N,d,stderr\n";
  for (const auto& p : report.points) {
    out += std::to_string(p.N) + "," + format_decimal(p.d) + "," + format_decimal(p.standard_error) + "\n";
  }
  return out;
}

std::string to_json(const LemmaReport& report) {
  json j;
  j["network"] = report.network;
  j["all_passed"] = report.all_passed();
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    json measured = json::object();
    for (const auto& [key, value] : c.measured) measured[key] = value;
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"measured", measured}});
  }
  return j.dump(2) + "\n";
}

void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << (format == ReportFormat::Json ? to_json(report) : to_csv(report));
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace mssr
