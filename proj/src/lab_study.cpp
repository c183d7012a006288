#include "steklab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "steklab/constants.hpp"
#include "steklab/errors.hpp"

namespace steklab {

double estimate_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3)
        throw Error(ErrorCode::DegenerateFit,
                    "need at least three (epsilon, deviation) pairs, got " +
                        std::to_string(pairs.size()));
    const int m = static_cast<int>(pairs.size());
    Eigen::VectorXd xs(m), ys(m);
    for (int i = 0; i < m; ++i) {
        if (!(pairs[i].first > 0.0))
            throw Error(ErrorCode::DegenerateFit, "epsilon values must be positive");
        if (!(pairs[i].second > 0.0))
            throw Error(ErrorCode::NonPositiveDeviation,
                        "deviation " + std::to_string(pairs[i].second) +
                            " must be positive");
        xs(i) = std::log(pairs[i].first);
        ys(i) = std::log(pairs[i].second);
    }
    const double xbar = xs.mean();
    const double sxx = (xs.array() - xbar).square().sum();
    if (!(sxx > 1e-24))
        throw Error(ErrorCode::DegenerateFit, "epsilon values have no spread");
    const double sxy = ((xs.array() - xbar) * (ys.array() - ys.mean())).sum();
    return sxy / sxx;
}

// ===== trace comparison =====

namespace {

constexpr int kTraceGrid = 512;

struct TraceSamples {
    Eigen::VectorXd mean_2d;  // averaged top/bottom trace of the 2D field
    Eigen::VectorXd limit_1d; // 1D eigenfunction values
    Eigen::VectorXd weight;   // boundary measure density x grid spacing
};

TraceSamples sample_traces(const ProblemParams& params, const Profile& profile,
                           const BfsField& u, const HermiteField& v) {
    const double l = params.l;
    const double dx = 2.0 * l / kTraceGrid;
    const double wall = (params.n - 1) * unit_ball_volume(params.n - 1);
    TraceSamples t;
    t.mean_2d.resize(kTraceGrid);
    t.limit_1d.resize(kTraceGrid);
    t.weight.resize(kTraceGrid);
    for (int j = 0; j < kTraceGrid; ++j) {
        const double x = -l + (j + 0.5) * dx;
        const ProfileSample rho = profile.eval(x);
        const double arc =
            std::sqrt(1.0 + params.epsilon * params.epsilon * rho.d1 * rho.d1);
        t.weight(j) = wall * std::pow(rho.value, params.n - 2) * arc * dx;
        t.mean_2d(j) = 0.5 * (u.eval(x, 1.0).value + u.eval(x, -1.0).value);
        t.limit_1d(j) = v.eval(x).value;
    }
    return t;
}

} // namespace

std::pair<double, int> compare_eigenfunction_traces(const ProblemParams& params,
                                                    const Profile& profile,
                                                    const BfsField& u,
                                                    const HermiteField& v) {
    validate_params(params);
    const TraceSamples t = sample_traces(params, profile, u, v);
    const double nm = std::sqrt(t.mean_2d.cwiseProduct(t.weight).dot(t.mean_2d));
    const double nv = std::sqrt(t.limit_1d.cwiseProduct(t.weight).dot(t.limit_1d));
    if (!(nm > 0.0) || !(nv > 0.0))
        throw Error(ErrorCode::ZeroTrace, "cannot compare traces with zero norm");

    const double dx = 2.0 * params.l / kTraceGrid;
    double cross = 0.0;
    for (int j = 0; j < kTraceGrid; ++j)
        cross += (t.mean_2d(j) / nm) * (t.limit_1d(j) / nv) * dx;
    const int sign = cross >= 0.0 ? 1 : -1;

    double err2 = 0.0, base2 = 0.0;
    for (int j = 0; j < kTraceGrid; ++j) {
        const double mh = sign * t.mean_2d(j) / nm;
        const double vh = t.limit_1d(j) / nv;
        err2 += (mh - vh) * (mh - vh) * dx;
        base2 += vh * vh * dx;
    }
    return {std::sqrt(err2 / base2), sign};
}

// ===== the sweep =====

namespace {

struct LegResult {
    std::vector<double> lambda_2d;
    std::vector<double> trace_error;
    std::vector<std::string> notes;
};

// Principal-angle distance between the spans of two sampled families, in the
// weighted grid inner product: sin of the largest principal angle.
double subspace_distance(const Eigen::MatrixXd& span_a, const Eigen::MatrixXd& span_b,
                         const Eigen::VectorXd& weight) {
    const Eigen::VectorXd root = weight.cwiseSqrt();
    const Eigen::MatrixXd wa = root.asDiagonal() * span_a;
    const Eigen::MatrixXd wb = root.asDiagonal() * span_b;
    const long m = wa.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(wa), qb(wb);
    const Eigen::MatrixXd ta =
        qa.householderQ() * Eigen::MatrixXd::Identity(wa.rows(), m);
    const Eigen::MatrixXd tb =
        qb.householderQ() * Eigen::MatrixXd::Identity(wb.rows(), m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ta.transpose() * tb);
    const double c = std::min(1.0, svd.singularValues().minCoeff());
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

LegResult run_leg(const StudyConfig& cfg, const Profile& profile, double eps,
                  const std::vector<HermiteField>* limit_fields) {
    try {
        ProblemParams p = cfg.params;
        p.epsilon = eps;
        const Mesh2D mesh = build_mesh_2d(p.l, cfg.nx, cfg.ny);
        const PlatePencil pencil = assemble_plate_forms(p, profile, mesh, cfg.quad);
        const EigenSolution sol = solve_steklov_2d(pencil, cfg.k_max);

        LegResult leg;
        leg.lambda_2d.assign(sol.values.data(), sol.values.data() + sol.values.size());
        if (!limit_fields) return leg;

        // group near-degenerate eigenvalues: relative gap below 1e-3
        std::vector<int> group(cfg.k_max, 0);
        int gid = 0;
        for (int k = 1; k < cfg.k_max; ++k) {
            const double gap = sol.values(k) - sol.values(k - 1);
            if (!(gap < 1e-3 * sol.values(k))) ++gid;
            group[k] = gid;
        }

        leg.trace_error.resize(cfg.k_max);
        for (int k = 0; k < cfg.k_max;) {
            int end = k;
            while (end + 1 < cfg.k_max && group[end + 1] == group[k]) ++end;
            if (end == k) {
                const BfsField u = steklov_eigenfunction(pencil, sol, k);
                leg.trace_error[k] =
                    compare_eigenfunction_traces(p, profile, u, (*limit_fields)[k]).first;
            } else {
                // cluster: individual traces are not stable, compare the spans
                const int m = end - k + 1;
                Eigen::MatrixXd span_2d(kTraceGrid, m), span_1d(kTraceGrid, m);
                Eigen::VectorXd weight;
                for (int c = 0; c < m; ++c) {
                    const BfsField u = steklov_eigenfunction(pencil, sol, k + c);
                    const TraceSamples t =
                        sample_traces(p, profile, u, (*limit_fields)[k + c]);
                    span_2d.col(c) = t.mean_2d;
                    span_1d.col(c) = t.limit_1d;
                    weight = t.weight;
                }
                const double dist = subspace_distance(span_2d, span_1d, weight);
                for (int c = 0; c < m; ++c) leg.trace_error[k + c] = dist;
                std::ostringstream note;
                note << "epsilon = " << eps << ": eigenvalues k = " << (k + 1) << ".."
                     << (end + 1)
                     << " are clustered (relative gap < 1e-3); trace_error reports the "
                        "subspace angle of the cluster";
                leg.notes.push_back(note.str());
            }
            k = end + 1;
        }
        return leg;
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "epsilon = " << eps << " (k_max = " << cfg.k_max << "): " << e.what();
        if (e.index()) throw Error(e.code(), msg.str(), *e.index());
        throw Error(e.code(), msg.str());
    }
}

} // namespace

ConvergenceReport run_convergence_study(const StudyConfig& config, RunMode mode,
                                        int threads) {
    validate_config(config, mode);
    if (threads < 1)
        throw Error(ErrorCode::BadConfig, "threads must be at least 1");
    const Profile profile = make_profile(config);

    ConvergenceReport report;
    report.config = config;

    // 1D limit leg
    std::vector<double> lambda_1d;
    std::vector<HermiteField> limit_fields;
    if (mode != RunMode::SteklovOnly) {
        try {
            ProblemParams p = config.params;
            p.epsilon = 1.0; // the limit problem carries no epsilon
            const Mesh1D mesh = build_mesh_1d(p.l, config.n1d);
            const LimitPencil pencil = assemble_limit_pencil(p, profile, mesh, config.quad);
            const EigenSolution sol = solve_limit_eigs(pencil, config.k_max);
            for (int k = 0; k < config.k_max; ++k) {
                lambda_1d.push_back(sol.values(k));
                limit_fields.push_back(limit_eigenfunction(pencil, sol, k));
            }
        } catch (const Error& e) {
            throw Error(e.code(), std::string("limit leg (k_max = ") +
                                      std::to_string(config.k_max) + "): " + e.what());
        }
    }

    if (mode == RunMode::LimitOnly) {
        for (int k = 0; k < config.k_max; ++k) {
            ReportRow row;
            row.k = k + 1;
            row.lambda_1d = lambda_1d[k];
            row.n1d = config.n1d;
            report.rows.push_back(row);
        }
        return report;
    }

    // 2D legs, one per epsilon, merged in config order
    const int n_legs = static_cast<int>(config.epsilons.size());
    std::vector<LegResult> legs(n_legs);
    const std::vector<HermiteField>* fields_ptr =
        mode == RunMode::Study ? &limit_fields : nullptr;
    if (threads > 1) {
        std::vector<std::future<LegResult>> futures(n_legs);
        int next = 0;
        while (next < n_legs) {
            const int batch = std::min(threads, n_legs - next);
            for (int i = 0; i < batch; ++i) {
                const double eps = config.epsilons[next + i];
                futures[next + i] = std::async(std::launch::async, [&, eps] {
                    return run_leg(config, profile, eps, fields_ptr);
                });
            }
            for (int i = 0; i < batch; ++i) legs[next + i] = futures[next + i].get();
            next += batch;
        }
    } else {
        for (int i = 0; i < n_legs; ++i)
            legs[i] = run_leg(config, profile, config.epsilons[i], fields_ptr);
    }

    for (const LegResult& leg : legs)
        for (const std::string& note : leg.notes) report.notes.push_back(note);

    for (int k = 0; k < config.k_max; ++k) {
        for (int i = 0; i < n_legs; ++i) {
            ReportRow row;
            row.epsilon = config.epsilons[i];
            row.k = k + 1;
            row.lambda_2d = legs[i].lambda_2d[k];
            row.nx = config.nx;
            row.ny = config.ny;
            if (mode == RunMode::Study) {
                row.lambda_1d = lambda_1d[k];
                row.ratio = legs[i].lambda_2d[k] / (config.epsilons[i] * lambda_1d[k]);
                row.trace_error = legs[i].trace_error[k];
                row.n1d = config.n1d;
            }
            report.rows.push_back(row);
        }
        if (mode == RunMode::Study && n_legs >= 3) {
            RateFit fit;
            fit.k = k + 1;
            std::vector<std::pair<double, double>> ratio_pairs, trace_pairs;
            for (int i = 0; i < n_legs; ++i) {
                ratio_pairs.emplace_back(config.epsilons[i],
                                         std::abs(legs[i].lambda_2d[k] /
                                                      (config.epsilons[i] * lambda_1d[k]) -
                                                  1.0));
                trace_pairs.emplace_back(config.epsilons[i], legs[i].trace_error[k]);
            }
            try {
                fit.ratio_rate = estimate_rate(ratio_pairs);
            } catch (const Error&) {
            }
            try {
                fit.trace_rate = estimate_rate(trace_pairs);
            } catch (const Error&) {
            }
            report.rates.push_back(fit);
        }
    }
    return report;
}

} // namespace steklab
