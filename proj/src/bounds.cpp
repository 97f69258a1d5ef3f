#include "stable_embed/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stable_embed::bounds {

namespace {

void check_open_unit(double v, const char* field) {
    if (!(v > 0.0) || !(v < 1.0)) {
        throw std::domain_error(std::string(field) + " must lie in (0, 1), got " +
                                std::to_string(v));
    }
}

double checked_log(double arg, const char* what) {
    if (!(arg > 0.0)) {
        throw std::domain_error(std::string("log argument for ") + what +
                                " must be positive, got " + std::to_string(arg));
    }
    return std::log(arg);
}

}  // namespace

void validate_params(const ManifoldParams& p) {
    if (!(p.D >= 1.0)) throw std::domain_error("params.D must be >= 1");
    if (!(p.N >= p.D)) throw std::domain_error("params.N must be >= D");
    if (!(p.tau > 0.0)) throw std::domain_error("params.tau must be > 0");
    if (!(p.V > 0.0)) throw std::domain_error("params.V must be > 0");
    if (!(p.R >= 1.0)) throw std::domain_error("params.R must be >= 1");
}

std::string corollary_name(Corollary c) {
    switch (c) {
        case Corollary::subgaussian: return "subgaussian";
        case Corollary::fourier: return "fourier";
        case Corollary::circulant: return "circulant";
        case Corollary::random_conv: return "random_conv";
        case Corollary::dbd: return "dbd";
        case Corollary::deterministic: return "deterministic";
    }
    throw std::domain_error("corollary_name: unknown value");
}

Corollary corollary_from_name(const std::string& name) {
    for (Corollary c : {Corollary::subgaussian, Corollary::fourier, Corollary::circulant,
                        Corollary::random_conv, Corollary::dbd, Corollary::deterministic}) {
        if (corollary_name(c) == name) return c;
    }
    throw std::domain_error("corollary: unknown name \"" + name + "\"");
}

EmbeddingBudget theorem1_budget(const ManifoldParams& params, double delta_m, double rho) {
    validate_params(params);
    check_open_unit(delta_m, "delta_m");
    check_open_unit(rho, "rho");

    EmbeddingBudget b;
    b.delta_m = delta_m;
    b.rho = rho;
    b.delta_m_prime = 2.0 * delta_m / 21.0;
    b.delta_required = delta_m / 42.0;

    const double np1 = params.N + 1.0;
    b.T = delta_m * delta_m * params.tau / (1764.0 * (np1 * np1));
    b.eps_T = 4.0 * std::sqrt(b.T / params.tau);
    b.eps_E = b.delta_m_prime / np1;

    const double geo_prefactor =
        2.0 * params.R / std::sqrt(std::numbers::pi) * std::sqrt(params.D / 2.0 + 1.0);
    b.log_A_bound = params.D * checked_log(geo_prefactor, "geodesic cover prefactor") +
                    checked_log(params.V, "V") - params.D * std::log(b.T);
    b.log_E_bound = std::log(2.0) + 2.0 * b.log_A_bound +
                    (2.0 * params.D + 1.0) * std::log1p(2.0 / b.eps_E);
    b.S_required = 40.0 * (b.log_E_bound + std::log(4.0 / rho));
    return b;
}

double jl_rip_order(double point_count, double rho) {
    if (!(point_count >= 1.0)) {
        throw std::domain_error("point_count must be >= 1, got " + std::to_string(point_count));
    }
    check_open_unit(rho, "rho");
    return 40.0 * std::log(4.0 * point_count / rho);
}

CorollaryBound corollary_measurements(Corollary corollary, const ManifoldParams& params,
                                      double delta_m, double rho, double constant_C) {
    validate_params(params);
    check_open_unit(delta_m, "delta_m");
    check_open_unit(rho, "rho");
    if (!(constant_C > 0.0)) {
        throw std::domain_error("constant_C must be > 0, got " + std::to_string(constant_C));
    }

    const double core = params.D * checked_log(params.R * params.N / (params.tau * delta_m),
                                               "R*N/(tau*delta)") +
                        checked_log(params.V / rho, "V/rho");
    const double log_n = checked_log(params.N, "N");
    const double lead = constant_C / (delta_m * delta_m);

    CorollaryBound out;
    out.corollary = corollary;
    out.constant_C = constant_C;
    switch (corollary) {
        case Corollary::subgaussian: {
            if (!(params.N > params.D)) {
                throw std::domain_error("subgaussian bound needs N > D for the log(N/D) term");
            }
            out.m_required = lead * core * std::log(params.N / params.D);
            break;
        }
        case Corollary::fourier:
            out.m_required = lead * core * std::pow(log_n, 4) * checked_log(1.0 / rho, "1/rho");
            break;
        case Corollary::circulant:
            out.m_required = lead * core * std::pow(log_n, 4);
            break;
        case Corollary::random_conv:
            out.m_required = lead * core * std::pow(log_n, 4) * checked_log(1.0 / rho, "1/rho");
            break;
        case Corollary::dbd:
            // params.N is the full ambient dimension N*J of the stacked blocks
            out.m_required = lead * core * std::pow(log_n, 6);
            break;
        case Corollary::deterministic:
            out.m_required = lead * core * core * log_n * log_n;
            break;
    }
    return out;
}

double geodesic_covering_bound(const ManifoldParams& params, double eps) {
    validate_params(params);
    if (!(eps > 0.0)) throw std::domain_error("eps must be > 0, got " + std::to_string(eps));
    const double prefactor = 2.0 * params.R / std::sqrt(std::numbers::pi);
    return std::pow(prefactor, params.D) * std::pow(std::sqrt(params.D / 2.0 + 1.0), params.D) *
           params.V / std::pow(eps, params.D);
}

double sphere_covering_bound(double D, double eps) {
    if (!(D >= 1.0)) throw std::domain_error("D must be >= 1, got " + std::to_string(D));
    if (!(eps > 0.0)) throw std::domain_error("eps must be > 0, got " + std::to_string(eps));
    return std::pow(1.0 + 2.0 / eps, D);
}

double cover_pointset_bound(double A_count, double D, double eps) {
    if (!(A_count >= 1.0)) {
        throw std::domain_error("A_count must be >= 1, got " + std::to_string(A_count));
    }
    if (!(D >= 1.0)) throw std::domain_error("D must be >= 1, got " + std::to_string(D));
    if (!(eps > 0.0)) throw std::domain_error("eps must be > 0, got " + std::to_string(eps));
    return 2.0 * A_count * A_count * std::pow(1.0 + 2.0 / eps, 2.0 * D + 1.0);
}

double chord_cover_resolution(double T, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("tau must be > 0, got " + std::to_string(tau));
    if (!(T > 0.0) || T > 0.75 * tau) {
        throw std::out_of_range("T must lie in (0, 3*tau/4], got T=" + std::to_string(T) +
                                " tau=" + std::to_string(tau));
    }
    return 4.0 * std::sqrt(T / tau);
}

double rip_operator_norm_bound(double N, double S, double delta) {
    if (!(S >= 1.0) || !(N >= S)) {
        throw std::domain_error("need N >= S >= 1, got N=" + std::to_string(N) +
                                " S=" + std::to_string(S));
    }
    if (!(delta >= 0.0) || !(delta < 1.0)) {
        throw std::domain_error("delta must lie in [0, 1), got " + std::to_string(delta));
    }
    return (N / S + 1.0) * (1.0 + delta);
}

bool circulant_n_large_enough(double N, double S, double rho) {
    if (!(N > 1.0) || !(S > 1.0)) return false;
    check_open_unit(rho, "rho");
    const double log_n = std::log(N);
    const double log_s = std::log(S);
    // failure probability N^(-log(N) log^2(S)) <= rho
    return -log_n * log_n * log_s * log_s <= std::log(rho);
}

double covering_regularity_from_R(double R) {
    if (!(R > 0.0)) throw std::domain_error("R must be > 0, got " + std::to_string(R));
    return 2.0 * R / std::sqrt(std::numbers::pi);
}

double solve_delta_for_order(const ManifoldParams& params, double rho, double S_target) {
    validate_params(params);
    check_open_unit(rho, "rho");
    // S_required is strictly decreasing in delta_m, so the feasible set is
    // an interval [delta*, 1); bisect for its left endpoint
    double lo = 1e-12, hi = 1.0 - 1e-12;
    if (theorem1_budget(params, hi, rho).S_required > S_target) {
        throw std::domain_error("S_target is below the budget for every delta_m < 1");
    }
    if (theorem1_budget(params, lo, rho).S_required <= S_target) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (theorem1_budget(params, mid, rho).S_required <= S_target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

nlohmann::json params_to_json(const ManifoldParams& p) {
    return {{"D", p.D}, {"N", p.N}, {"tau", p.tau}, {"V", p.V}, {"R", p.R}};
}

nlohmann::json budget_to_json(const EmbeddingBudget& b) {
    return {{"delta_m", b.delta_m},
            {"rho", b.rho},
            {"delta_m_prime", b.delta_m_prime},
            {"T", b.T},
            {"eps_T", b.eps_T},
            {"eps_E", b.eps_E},
            {"log_A_bound", b.log_A_bound},
            {"log_E_bound", b.log_E_bound},
            {"S_required", b.S_required},
            {"delta_required", b.delta_required}};
}

nlohmann::json corollary_to_json(const CorollaryBound& c) {
    return {{"corollary", corollary_name(c.corollary)},
            {"constant_C", c.constant_C},
            {"m_required", c.m_required}};
}

}  // namespace stable_embed::bounds
