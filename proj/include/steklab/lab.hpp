#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklab/params.hpp"
#include "steklab/plate2d.hpp"
#include "steklab/profile.hpp"
#include "steklab/sturm1d.hpp"

namespace steklab {

// ===== convergence laboratory =====
//
// Drives the 2D solver over a list of epsilons, solves the 1D limit once,
// and reports eigenvalue ratios lambda_{eps,k} / (eps lambda_k) together
// with eigenfunction trace errors.

inline constexpr const char* kToolVersion = "steklab 0.1.0";

struct ProfileSpec {
    std::string kind = "constant"; // constant | polynomial | cosine_bump
    double a = 1.0;
    double b = 0.0;
    std::vector<double> coeffs;
};

struct StudyConfig {
    ProblemParams params;  // epsilon field unused; the sweep list rules
    ProfileSpec profile;
    std::vector<double> epsilons; // strictly decreasing, all positive
    int k_max = 1;
    int nx = 64;
    int ny = 4;
    int n1d = 128;
    int quad = 4;
};

enum class RunMode { Study, LimitOnly, SteklovOnly };

struct ReportRow {
    std::optional<double> epsilon;
    int k = 0;
    std::optional<double> lambda_2d;
    std::optional<double> lambda_1d;
    std::optional<double> ratio;       // lambda_2d / (epsilon * lambda_1d)
    std::optional<double> trace_error; // relative L^2, sign-aligned
    std::optional<int> nx;
    std::optional<int> ny;
    std::optional<int> n1d;
};

struct RateFit {
    int k = 0;
    std::optional<double> ratio_rate;  // slope of log|ratio-1| vs log eps
    std::optional<double> trace_rate;  // slope of log trace_error vs log eps
};

struct ConvergenceReport {
    std::vector<ReportRow> rows; // sorted by (k, descending epsilon)
    std::vector<RateFit> rates;
    std::vector<std::string> notes;
    StudyConfig config;
    std::string version = kToolVersion;
};

// ----- config files: "key = value" lines, '#' comments -----
// Unknown keys are BadConfig. Keys: n, sigma, mu, l, profile.kind, profile.a,
// profile.b, profile.coeffs, epsilons, k_max, nx, ny, n1d, quad.
StudyConfig parse_config(std::istream& in);
StudyConfig load_config(const std::string& path); // IoError if unreadable

Profile make_profile(const StudyConfig& config);

// Mode-dependent checks: Study/SteklovOnly need n = 2 and a nonempty,
// positive, strictly decreasing epsilon list (SteklovOnly exactly one).
void validate_config(const StudyConfig& config, RunMode mode);

// Run the sweep. threads > 1 solves epsilon legs concurrently; rows are
// merged in config order, so output is independent of thread count. Solver
// errors are rethrown with the (epsilon, k) leg identified in the message.
ConvergenceReport run_convergence_study(const StudyConfig& config,
                                        RunMode mode = RunMode::Study,
                                        int threads = 1);

// Least-squares slope of log(deviation) against log(epsilon). Requires at
// least three pairs (DegenerateFit), positive deviations
// (NonPositiveDeviation), positive epsilons with spread (DegenerateFit).
double estimate_rate(const std::vector<std::pair<double, double>>& pairs);

// Relative L^2(-l, l) distance between the averaged boundary trace of u and
// the limit eigenfunction v, both renormalized in the weighted boundary
// measure on a 512-point midpoint grid; minimized over sign. Returns
// (error, sign).
std::pair<double, int> compare_eigenfunction_traces(const ProblemParams& params,
                                                    const Profile& profile,
                                                    const BfsField& u,
                                                    const HermiteField& v);

// ----- report output -----
// CSV columns: epsilon,k,lambda_2d,lambda_1d,ratio,trace_error,Nx,Ny,N1d.
// Missing values are empty fields. Deterministic: same report, same bytes.
std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_json_text(const ConvergenceReport& report);

// format is "csv" or "json" (BadConfig otherwise); path "-" writes to stdout.
// Throws IoError when the file cannot be opened or written.
void write_report(const ConvergenceReport& report, const std::string& format,
                  const std::string& path);

} // namespace steklab
