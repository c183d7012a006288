#include "steklab/lab.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "steklab/errors.hpp"

namespace steklab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string fmt_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

nlohmann::json to_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const std::optional<int>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json config_to_json(const StudyConfig& c) {
    nlohmann::json j;
    j["n"] = c.params.n;
    j["sigma"] = c.params.sigma;
    j["mu"] = c.params.mu;
    j["l"] = c.params.l;
    j["profile"]["kind"] = c.profile.kind;
    j["profile"]["a"] = c.profile.a;
    j["profile"]["b"] = c.profile.b;
    j["profile"]["coeffs"] = c.profile.coeffs;
    j["epsilons"] = c.epsilons;
    j["k_max"] = c.k_max;
    j["nx"] = c.nx;
    j["ny"] = c.ny;
    j["n1d"] = c.n1d;
    j["quad"] = c.quad;
    return j;
}

} // namespace

std::string report_to_csv(const ConvergenceReport& report) {
    std::string out = "epsilon,k,lambda_2d,lambda_1d,ratio,trace_error,Nx,Ny,N1d\n";
    for (const ReportRow& row : report.rows) {
        out += fmt_opt(row.epsilon);
        out += ',';
        out += std::to_string(row.k);
        out += ',';
        out += fmt_opt(row.lambda_2d);
        out += ',';
        out += fmt_opt(row.lambda_1d);
        out += ',';
        out += fmt_opt(row.ratio);
        out += ',';
        out += fmt_opt(row.trace_error);
        out += ',';
        out += fmt_opt(row.nx);
        out += ',';
        out += fmt_opt(row.ny);
        out += ',';
        out += fmt_opt(row.n1d);
        out += '\n';
    }
    return out;
}

std::string report_to_json_text(const ConvergenceReport& report) {
    nlohmann::json j;
    j["metadata"]["tool"] = report.version;
    j["metadata"]["config"] = config_to_json(report.config);
    j["metadata"]["notes"] = report.notes;
    j["metadata"]["rates"] = nlohmann::json::array();
    for (const RateFit& r : report.rates) {
        nlohmann::json jr;
        jr["k"] = r.k;
        jr["ratio_rate"] = to_json(r.ratio_rate);
        jr["trace_rate"] = to_json(r.trace_rate);
        j["metadata"]["rates"].push_back(jr);
    }
    j["rows"] = nlohmann::json::array();
    for (const ReportRow& row : report.rows) {
        nlohmann::json jr;
        jr["epsilon"] = to_json(row.epsilon);
        jr["k"] = row.k;
        jr["lambda_2d"] = to_json(row.lambda_2d);
        jr["lambda_1d"] = to_json(row.lambda_1d);
        jr["ratio"] = to_json(row.ratio);
        jr["trace_error"] = to_json(row.trace_error);
        jr["Nx"] = to_json(row.nx);
        jr["Ny"] = to_json(row.ny);
        jr["N1d"] = to_json(row.n1d);
        j["rows"].push_back(jr);
    }
    return j.dump(2) + "\n";
}

void write_report(const ConvergenceReport& report, const std::string& format,
                  const std::string& path) {
    std::string text;
    if (format == "csv") text = report_to_csv(report);
    else if (format == "json") text = report_to_json_text(report);
    else throw Error(ErrorCode::BadConfig, "format must be 'csv' or 'json', got '" + format + "'");

    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw Error(ErrorCode::IoError, "failed while writing '" + path + "'");
}

} // namespace steklab
