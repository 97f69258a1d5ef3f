#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stable_embed/kernels.hpp"
#include "stable_embed/linops.hpp"
#include "stable_embed/manifolds.hpp"

namespace stable_embed::harness {

using cplx = std::complex<double>;

struct Quantiles {
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
};

// Empirical distortion over a finite sample. The maxima are lower bounds on
// the true supremum (exhaustive verification is intractable), which is what
// lower_bound_estimate marks.
struct DistortionReport {
    linops::OperatorDescriptor op_descriptor;
    std::int64_t sample_count = 0;
    double delta_hat_max = 0.0;        // max |  ||op u||^2 - 1 |
    double delta_hat_nonsq_max = 0.0;  // max |  ||op u||   - 1 |
    Quantiles quantiles;               // of the squared distortions
    std::vector<double> argmax_pair;   // generating parameters of the worst sample
    std::uint64_t operator_seed = 0;
    std::uint64_t sample_seed = 0;
    bool lower_bound_estimate = true;

    // retained in memory for pointwise audits; not serialized
    std::vector<double> per_sample_sq;
    std::vector<double> per_sample_nonsq;
    std::int64_t argmax_index = 0;
    std::int64_t skipped_duplicates = 0;  // point-cloud runs only
};

nlohmann::json report_to_json(const DistortionReport& r);

// Applies op to every chord. Accepts operators over the complex ambient
// dimension or over its realified double (re/im interleaved).
DistortionReport measure_embedding(const linops::LinearMap& op,
                                   const manifolds::ChordSet& chords,
                                   Exec exec = Exec::parallel);

enum class SupportPolicy { uniform_support, worst_of_batch };

std::string support_policy_name(SupportPolicy p);
SupportPolicy support_policy_from_name(const std::string& name);

struct RipReport {
    linops::OperatorDescriptor op_descriptor;
    std::int64_t sparsity_S = 0;
    std::int64_t trial_count = 0;
    double delta_hat = 0.0;  // lower bound on the RIP constant
    SupportPolicy support_policy = SupportPolicy::uniform_support;
    std::uint64_t seed = 0;  // provenance; lives in the manifest, not the report JSON
};

nlohmann::json rip_report_to_json(const RipReport& r);

// Random unit-norm S-sparse vectors: uniform supports, gaussian values.
// worst_of_batch re-probes the worst support of every 32-trial batch with
// fresh values, spending the same total trial budget more adversarially.
RipReport measure_rip(const linops::LinearMap& op, std::int64_t S, std::int64_t trials,
                      std::uint64_t seed, SupportPolicy policy = SupportPolicy::uniform_support,
                      Exec exec = Exec::parallel);

// Distortion over all normalized pairwise differences of a finite point set.
// Duplicate points are skipped and counted.
DistortionReport measure_jl_pointcloud(const linops::LinearMap& op,
                                       const std::vector<std::vector<cplx>>& points,
                                       Exec exec = Exec::parallel);

// Measurement ensembles built per the matching corollary's composition.
enum class EmbedFamily { dense_gaussian, subsampled_dft, partial_circulant, random_convolution,
                         dbd };

std::string embed_family_name(EmbedFamily f);
EmbedFamily embed_family_from_name(const std::string& name);

// dbd needs a block count J dividing both m and n; pass dbd_J = 0 to pick
// the largest divisor of gcd(m, n) at most 8.
linops::LinearOp build_family_operator(EmbedFamily family, std::int64_t m, std::int64_t n,
                                       std::uint64_t seed, std::int64_t dbd_J = 0);

struct CompareCell {
    EmbedFamily family = EmbedFamily::dense_gaussian;
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    DistortionReport report;
};

struct FamilySummary {
    EmbedFamily family = EmbedFamily::dense_gaussian;
    std::int64_t m = 0;
    std::int64_t cells_ok = 0;
    std::int64_t cells_failed = 0;
    double median_delta_hat_max = 0.0;
};

struct CompareTable {
    std::vector<CompareCell> cells;
    std::vector<FamilySummary> summaries;
    std::int64_t chords_per_trial = 0;
};

// One chord set per seed index, shared across families and m so the grid is
// a paired comparison. Cells that fail to build are recorded and skipped.
CompareTable compare_families(const manifolds::ManifoldModel& manifold,
                              const std::vector<EmbedFamily>& families,
                              const std::vector<std::int64_t>& m_grid,
                              std::int64_t chords_per_trial, std::int64_t seeds_per_cell,
                              std::uint64_t base_seed, double min_separation = -1.0,
                              std::int64_t dbd_J = 0);

void write_compare_csv(const CompareTable& table, std::ostream& out);
nlohmann::json compare_summary_json(const CompareTable& table);

}  // namespace stable_embed::harness
