#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace stable_embed::bounds {

// Geometric description of a manifold for the measurement bounds: intrinsic
// dimension D, ambient dimension N, condition-number reciprocal tau, volume
// V, geodesic regularity R. All logs below are natural logs.
struct ManifoldParams {
    double D = 1.0;
    double N = 1.0;
    double tau = 1.0;
    double V = 1.0;
    double R = 1.0;
};

// Throws std::domain_error naming the field when an invariant fails.
void validate_params(const ManifoldParams& p);

// Full bookkeeping chain from target conditioning delta_m and failure
// probability rho down to the required RIP order and RIP constant.
struct EmbeddingBudget {
    double delta_m = 0.0;
    double rho = 0.0;
    double delta_m_prime = 0.0;  // (2/21) delta_m
    double T = 0.0;              // geodesic cover resolution
    double eps_T = 0.0;          // chord cover resolution 4 sqrt(T/tau)
    double eps_E = 0.0;          // point cover resolution delta_m'/(N+1)
    double log_A_bound = 0.0;    // log geodesic covering number bound
    double log_E_bound = 0.0;    // log chord set cardinality bound
    double S_required = 0.0;     // minimal RIP order
    double delta_required = 0.0; // delta_m/42
};

enum class Corollary { subgaussian, fourier, circulant, random_conv, dbd, deterministic };

std::string corollary_name(Corollary c);
Corollary corollary_from_name(const std::string& name);

// Scaling law for the measurement count, not a certified constant: the
// leading universal constant is caller-supplied.
struct CorollaryBound {
    Corollary corollary = Corollary::subgaussian;
    double constant_C = 1.0;
    double m_required = 0.0;
};

EmbeddingBudget theorem1_budget(const ManifoldParams& params, double delta_m, double rho);

// RIP order sufficient for a JL embedding of point_count points.
double jl_rip_order(double point_count, double rho);

CorollaryBound corollary_measurements(Corollary corollary, const ManifoldParams& params,
                                      double delta_m, double rho, double constant_C = 1.0);

// Covering number bound for a D-dimensional Riemannian submanifold at
// geodesic resolution eps.
double geodesic_covering_bound(const ManifoldParams& params, double eps);

// (1 + 2/eps)^D covering bound for the unit sphere of dimension D.
double sphere_covering_bound(double D, double eps);

// Bound on the chord point set built from A_count anchor points.
double cover_pointset_bound(double A_count, double D, double eps);

// Chord resolution induced by a T-dense geodesic cover; requires T <= 3tau/4.
double chord_cover_resolution(double T, double tau);

// Operator norm bound for an N-column matrix with (S, delta)-RIP.
double rip_operator_norm_bound(double N, double S, double delta);

// Advisory for the circulant bound's "N large enough" hypothesis: whether
// the stated failure probability N^(-log(N) log^2(S)) is already below rho.
bool circulant_n_large_enough(double N, double S, double rho);

// Geodesic regularity equivalent of the reference random-projection result.
double covering_regularity_from_R(double R);

// Bisection for the smallest delta_m whose required order fits S_target.
double solve_delta_for_order(const ManifoldParams& params, double rho, double S_target);

nlohmann::json params_to_json(const ManifoldParams& p);
nlohmann::json budget_to_json(const EmbeddingBudget& b);
nlohmann::json corollary_to_json(const CorollaryBound& c);

}  // namespace stable_embed::bounds
