#include "stable_embed/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "stable_embed/errors.hpp"
#include "stable_embed/io.hpp"
#include "stable_embed/rng.hpp"

namespace stable_embed::harness {

namespace {

// nearest-rank quantile of an already sorted sample
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::int64_t count = static_cast<std::int64_t>(sorted.size());
    std::int64_t rank =
        static_cast<std::int64_t>(std::ceil(p * static_cast<double>(count))) - 1;
    rank = std::clamp<std::int64_t>(rank, 0, count - 1);
    return sorted[static_cast<std::size_t>(rank)];
}

Quantiles quantiles_of(const std::vector<double>& values) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    Quantiles q;
    q.p50 = quantile_sorted(sorted, 0.50);
    q.p90 = quantile_sorted(sorted, 0.90);
    q.p99 = quantile_sorted(sorted, 0.99);
    return q;
}

// evaluate |  ||op x||^2 - 1 | for one unit vector, serial inner work
void distortion_of(const linops::LinearMap& op, std::span<const cplx> x, double& sq,
                   double& nonsq) {
    std::vector<cplx> y(static_cast<std::size_t>(op.rows()));
    op.apply(x, y);
    double norm_sq = 0.0;
    for (const auto& z : y) norm_sq += std::norm(z);
    sq = std::abs(norm_sq - 1.0);
    nonsq = std::abs(std::sqrt(norm_sq) - 1.0);
}

// realify a complex chord as (re, im, re, im, ...) in the real parts
void realify(std::span<const cplx> u, std::vector<cplx>& out) {
    out.resize(2 * u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        out[2 * k] = cplx{u[k].real(), 0.0};
        out[2 * k + 1] = cplx{u[k].imag(), 0.0};
    }
}

void finalize_distortion(DistortionReport& rep) {
    const std::int64_t count = static_cast<std::int64_t>(rep.per_sample_sq.size());
    rep.sample_count = count;
    std::int64_t argmax = 0;
    double max_sq = -1.0, max_nonsq = -1.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const double sq = rep.per_sample_sq[static_cast<std::size_t>(i)];
        if (sq > max_sq) {
            max_sq = sq;
            argmax = i;
        }
        max_nonsq = std::max(max_nonsq, rep.per_sample_nonsq[static_cast<std::size_t>(i)]);
    }
    rep.delta_hat_max = max_sq;
    rep.delta_hat_nonsq_max = max_nonsq;
    rep.quantiles = quantiles_of(rep.per_sample_sq);
    rep.argmax_index = argmax;
}

}  // namespace

nlohmann::json report_to_json(const DistortionReport& r) {
    return {{"op_descriptor", linops::descriptor_to_json(r.op_descriptor)},
            {"sample_count", r.sample_count},
            {"delta_hat_max", r.delta_hat_max},
            {"delta_hat_nonsq_max", r.delta_hat_nonsq_max},
            {"quantiles",
             {{"p50", r.quantiles.p50}, {"p90", r.quantiles.p90}, {"p99", r.quantiles.p99}}},
            {"argmax_pair", r.argmax_pair},
            {"seeds", {{"operator_seed", r.operator_seed}, {"sample_seed", r.sample_seed}}},
            {"lower_bound_estimate", r.lower_bound_estimate}};
}

DistortionReport measure_embedding(const linops::LinearMap& op,
                                   const manifolds::ChordSet& chords, Exec exec) {
    const std::int64_t n = chords.ambient_n;
    const bool realified = op.cols() == 2 * n;
    if (!realified && op.cols() != n) {
        throw DimensionError("measure_embedding: operator has " + std::to_string(op.cols()) +
                             " columns, chords live in complex dimension " + std::to_string(n) +
                             " (" + std::to_string(2 * n) + " realified)");
    }

    DistortionReport rep;
    rep.op_descriptor = op.descriptor();
    rep.operator_seed = op.descriptor().seed;
    rep.sample_seed = chords.seed;
    rep.per_sample_sq.assign(static_cast<std::size_t>(chords.count), 0.0);
    rep.per_sample_nonsq.assign(static_cast<std::size_t>(chords.count), 0.0);

    double* sq = rep.per_sample_sq.data();
    double* nonsq = rep.per_sample_nonsq.data();

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
        for (std::int64_t i = 0; i < chords.count; ++i) {
            std::vector<cplx> real_in;
            if (realified) {
                realify(chords.chord(i), real_in);
                distortion_of(op, real_in, sq[i], nonsq[i]);
            } else {
                distortion_of(op, chords.chord(i), sq[i], nonsq[i]);
            }
        }
    } else {
        std::vector<cplx> real_in;
        for (std::int64_t i = 0; i < chords.count; ++i) {
            if (realified) {
                realify(chords.chord(i), real_in);
                distortion_of(op, real_in, sq[i], nonsq[i]);
            } else {
                distortion_of(op, chords.chord(i), sq[i], nonsq[i]);
            }
        }
    }

    finalize_distortion(rep);
    const auto pair = chords.pair(rep.argmax_index);
    rep.argmax_pair.assign(pair.begin(), pair.end());
    return rep;
}

std::string support_policy_name(SupportPolicy p) {
    return p == SupportPolicy::uniform_support ? "uniform_support" : "worst_of_batch";
}

SupportPolicy support_policy_from_name(const std::string& name) {
    if (name == "uniform_support") return SupportPolicy::uniform_support;
    if (name == "worst_of_batch") return SupportPolicy::worst_of_batch;
    throw std::invalid_argument("support policy: unknown name \"" + name + "\"");
}

nlohmann::json rip_report_to_json(const RipReport& r) {
    return {{"op_descriptor", linops::descriptor_to_json(r.op_descriptor)},
            {"sparsity_S", r.sparsity_S},
            {"trial_count", r.trial_count},
            {"delta_hat", r.delta_hat},
            {"support_policy", support_policy_name(r.support_policy)}};
}

namespace {

constexpr std::int64_t kRipBatch = 32;

// unit-norm S-sparse trial vector on a fresh support (or a fixed one)
void build_sparse_vector(std::int64_t n, std::int64_t S, std::uint64_t seed,
                         std::uint64_t trial, const std::vector<std::int64_t>* fixed_support,
                         std::vector<cplx>& x, std::vector<std::int64_t>& support) {
    if (fixed_support) {
        support = *fixed_support;
    } else {
        const rng::Stream sup_stream(rng::mix_seed(seed, 0xA000 + trial),
                                     rng::streams::sparse_support);
        support = rng::sample_without_replacement(S, n, sup_stream);
    }
    const rng::Stream val_stream(rng::mix_seed(seed, 0xB000 + trial),
                                 rng::streams::sparse_values);
    x.assign(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    double norm_sq = 0.0;
    for (std::int64_t k = 0; k < S; ++k) {
        const double g = val_stream.gaussian(static_cast<std::uint64_t>(k));
        x[static_cast<std::size_t>(support[static_cast<std::size_t>(k)])] = cplx{g, 0.0};
        norm_sq += g * g;
    }
    const double inv = norm_sq > 0.0 ? 1.0 / std::sqrt(norm_sq) : 0.0;
    for (std::int64_t k = 0; k < S; ++k) {
        x[static_cast<std::size_t>(support[static_cast<std::size_t>(k)])] *= inv;
    }
}

double rip_trial(const linops::LinearMap& op, std::int64_t S, std::uint64_t seed,
                 std::uint64_t trial, const std::vector<std::int64_t>* fixed_support,
                 std::vector<std::int64_t>& support_out) {
    std::vector<cplx> x;
    build_sparse_vector(op.cols(), S, seed, trial, fixed_support, x, support_out);
    std::vector<cplx> y(static_cast<std::size_t>(op.rows()));
    op.apply(x, y);
    double norm_sq = 0.0;
    for (const auto& z : y) norm_sq += std::norm(z);
    return std::abs(norm_sq - 1.0);
}

}  // namespace

RipReport measure_rip(const linops::LinearMap& op, std::int64_t S, std::int64_t trials,
                      std::uint64_t seed, SupportPolicy policy, Exec exec) {
    if (S < 1 || S > op.cols()) {
        throw DimensionError("measure_rip: sparsity S=" + std::to_string(S) +
                             " must lie in [1, n] with n=" + std::to_string(op.cols()));
    }
    if (trials < 1) throw std::invalid_argument("measure_rip: trials must be >= 1");

    RipReport rep;
    rep.op_descriptor = op.descriptor();
    rep.sparsity_S = S;
    rep.trial_count = trials;
    rep.support_policy = policy;
    rep.seed = seed;

    std::vector<double> deltas(static_cast<std::size_t>(trials), 0.0);
    std::vector<std::vector<std::int64_t>> supports;
    const bool keep_supports = policy == SupportPolicy::worst_of_batch;
    if (keep_supports) supports.resize(static_cast<std::size_t>(trials));

    double* dp = deltas.data();
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
        for (std::int64_t t = 0; t < trials; ++t) {
            std::vector<std::int64_t> sup;
            dp[t] = rip_trial(op, S, seed, static_cast<std::uint64_t>(t), nullptr, sup);
            if (keep_supports) supports[static_cast<std::size_t>(t)] = std::move(sup);
        }
    } else {
        for (std::int64_t t = 0; t < trials; ++t) {
            std::vector<std::int64_t> sup;
            dp[t] = rip_trial(op, S, seed, static_cast<std::uint64_t>(t), nullptr, sup);
            if (keep_supports) supports[static_cast<std::size_t>(t)] = std::move(sup);
        }
    }

    double delta_hat = *std::max_element(deltas.begin(), deltas.end());

    if (policy == SupportPolicy::worst_of_batch) {
        // find each batch's worst support and spend extra value draws on it
        std::vector<double> refine(static_cast<std::size_t>((trials + kRipBatch - 1) / kRipBatch *
                                                            kRipBatch),
                                   0.0);
        const std::int64_t batches = (trials + kRipBatch - 1) / kRipBatch;
        double* rp = refine.data();
        const std::vector<std::int64_t>* sups = supports.data();
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
        for (std::int64_t b = 0; b < batches; ++b) {
            const std::int64_t begin = b * kRipBatch;
            const std::int64_t end = std::min(trials, begin + kRipBatch);
            std::int64_t worst = begin;
            for (std::int64_t t = begin; t < end; ++t) {
                if (dp[t] > dp[worst]) worst = t;
            }
            for (std::int64_t t = begin; t < end; ++t) {
                std::vector<std::int64_t> sup;
                rp[t] = rip_trial(op, S, seed, 0x10000000ull + static_cast<std::uint64_t>(t),
                                  &sups[worst], sup);
            }
        }
        for (std::int64_t t = 0; t < trials; ++t) {
            delta_hat = std::max(delta_hat, rp[t]);
        }
    }

    rep.delta_hat = delta_hat;
    return rep;
}

DistortionReport measure_jl_pointcloud(const linops::LinearMap& op,
                                       const std::vector<std::vector<cplx>>& points, Exec exec) {
    if (points.size() < 2) {
        throw std::invalid_argument("measure_jl_pointcloud: need at least 2 points");
    }
    const std::int64_t dim = static_cast<std::int64_t>(points.front().size());
    for (const auto& p : points) {
        if (static_cast<std::int64_t>(p.size()) != dim) {
            throw DimensionError("measure_jl_pointcloud: points have mixed dimensions");
        }
    }
    const bool realified = op.cols() == 2 * dim;
    if (!realified && op.cols() != dim) {
        throw DimensionError("measure_jl_pointcloud: operator has " +
                             std::to_string(op.cols()) + " columns, points live in dimension " +
                             std::to_string(dim));
    }

    // normalized pairwise differences, duplicates dropped
    struct Pair {
        std::int64_t i, j;
    };
    std::vector<Pair> pairs;
    std::int64_t skipped = 0;
    const std::int64_t count = static_cast<std::int64_t>(points.size());
    std::vector<std::vector<cplx>> diffs;
    for (std::int64_t i = 0; i < count; ++i) {
        for (std::int64_t j = i + 1; j < count; ++j) {
            std::vector<cplx> d(static_cast<std::size_t>(dim));
            double norm_sq = 0.0;
            for (std::int64_t k = 0; k < dim; ++k) {
                d[static_cast<std::size_t>(k)] = points[static_cast<std::size_t>(i)]
                                                       [static_cast<std::size_t>(k)] -
                                                 points[static_cast<std::size_t>(j)]
                                                       [static_cast<std::size_t>(k)];
                norm_sq += std::norm(d[static_cast<std::size_t>(k)]);
            }
            if (norm_sq == 0.0) {
                skipped += 1;
                continue;
            }
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& z : d) z *= inv;
            diffs.push_back(std::move(d));
            pairs.push_back({i, j});
        }
    }
    if (diffs.empty()) {
        throw ExperimentError("measure_jl_pointcloud: all pairs were duplicates");
    }

    DistortionReport rep;
    rep.op_descriptor = op.descriptor();
    rep.operator_seed = op.descriptor().seed;
    rep.sample_seed = 0;
    rep.skipped_duplicates = skipped;
    const std::int64_t total = static_cast<std::int64_t>(diffs.size());
    rep.per_sample_sq.assign(static_cast<std::size_t>(total), 0.0);
    rep.per_sample_nonsq.assign(static_cast<std::size_t>(total), 0.0);
    double* sq = rep.per_sample_sq.data();
    double* nonsq = rep.per_sample_nonsq.data();

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
        for (std::int64_t t = 0; t < total; ++t) {
            std::vector<cplx> real_in;
            if (realified) {
                realify(diffs[static_cast<std::size_t>(t)], real_in);
                distortion_of(op, real_in, sq[t], nonsq[t]);
            } else {
                distortion_of(op, diffs[static_cast<std::size_t>(t)], sq[t], nonsq[t]);
            }
        }
    } else {
        std::vector<cplx> real_in;
        for (std::int64_t t = 0; t < total; ++t) {
            if (realified) {
                realify(diffs[static_cast<std::size_t>(t)], real_in);
                distortion_of(op, real_in, sq[t], nonsq[t]);
            } else {
                distortion_of(op, diffs[static_cast<std::size_t>(t)], sq[t], nonsq[t]);
            }
        }
    }

    finalize_distortion(rep);
    rep.argmax_pair = {static_cast<double>(pairs[static_cast<std::size_t>(rep.argmax_index)].i),
                       static_cast<double>(pairs[static_cast<std::size_t>(rep.argmax_index)].j)};
    return rep;
}

std::string embed_family_name(EmbedFamily f) {
    switch (f) {
        case EmbedFamily::dense_gaussian: return "dense_gaussian";
        case EmbedFamily::subsampled_dft: return "subsampled_dft";
        case EmbedFamily::partial_circulant: return "partial_circulant";
        case EmbedFamily::random_convolution: return "random_convolution";
        case EmbedFamily::dbd: return "dbd";
    }
    throw std::invalid_argument("embed_family_name: unknown value");
}

EmbedFamily embed_family_from_name(const std::string& name) {
    for (EmbedFamily f : {EmbedFamily::dense_gaussian, EmbedFamily::subsampled_dft,
                          EmbedFamily::partial_circulant, EmbedFamily::random_convolution,
                          EmbedFamily::dbd}) {
        if (embed_family_name(f) == name) return f;
    }
    throw std::invalid_argument("embed family: unknown name \"" + name + "\"");
}

linops::LinearOp build_family_operator(EmbedFamily family, std::int64_t m, std::int64_t n,
                                       std::uint64_t seed, std::int64_t dbd_J) {
    const std::uint64_t sign_seed = rng::mix_seed(seed, 1);
    switch (family) {
        case EmbedFamily::dense_gaussian:
            return linops::compose({linops::make_dense_subgaussian(m, n, linops::Dist::gaussian,
                                                                   seed),
                                    linops::make_rademacher_diag(n, sign_seed)});
        case EmbedFamily::subsampled_dft:
            return linops::compose({linops::make_subsampled_dft(m, n, seed),
                                    linops::make_rademacher_diag(n, sign_seed)});
        case EmbedFamily::partial_circulant:
            return linops::compose({linops::make_partial_circulant(m, n, linops::Dist::gaussian,
                                                                   seed),
                                    linops::make_rademacher_diag(n, sign_seed)});
        case EmbedFamily::random_convolution:
            return linops::make_random_convolution(m, n, seed);
        case EmbedFamily::dbd: {
            std::int64_t J = dbd_J;
            if (J == 0) {
                const std::int64_t g = std::gcd(m, n);
                for (std::int64_t cand = std::min<std::int64_t>(8, g); cand >= 1; --cand) {
                    if (g % cand == 0) {
                        J = cand;
                        break;
                    }
                }
            }
            if (J < 1 || m % J != 0 || n % J != 0) {
                throw DimensionError("dbd family: block count J=" + std::to_string(J) +
                                     " must divide m=" + std::to_string(m) + " and n=" +
                                     std::to_string(n));
            }
            return linops::compose({linops::make_dbd(m / J, n / J, J, linops::Dist::gaussian,
                                                     seed),
                                    linops::make_random_convolution(n, n, sign_seed)});
        }
    }
    throw std::invalid_argument("build_family_operator: unknown family");
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    if (k == 0) return 0.0;
    if (k % 2 == 1) return v[k / 2];
    return 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace

CompareTable compare_families(const manifolds::ManifoldModel& manifold,
                              const std::vector<EmbedFamily>& families,
                              const std::vector<std::int64_t>& m_grid,
                              std::int64_t chords_per_trial, std::int64_t seeds_per_cell,
                              std::uint64_t base_seed, double min_separation,
                              std::int64_t dbd_J) {
    if (families.empty() || m_grid.empty()) {
        throw std::invalid_argument("compare_families: need at least one family and one m");
    }
    if (chords_per_trial < 1 || seeds_per_cell < 1) {
        throw std::invalid_argument("compare_families: budgets must be >= 1");
    }

    CompareTable table;
    table.chords_per_trial = chords_per_trial;

    // one chord set per seed index, shared across every (family, m) cell
    std::vector<manifolds::ChordSet> chord_sets;
    chord_sets.reserve(static_cast<std::size_t>(seeds_per_cell));
    for (std::int64_t s = 0; s < seeds_per_cell; ++s) {
        chord_sets.push_back(manifolds::sample_chords(
            manifold, chords_per_trial,
            rng::mix_seed(base_seed, 1000 + static_cast<std::uint64_t>(s)), min_separation));
    }

    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        const EmbedFamily family = families[fi];
        for (const std::int64_t m : m_grid) {
            std::vector<double> maxima;
            FamilySummary summary;
            summary.family = family;
            summary.m = m;
            for (std::int64_t s = 0; s < seeds_per_cell; ++s) {
                CompareCell cell;
                cell.family = family;
                cell.m = m;
                cell.n = manifold.ambient_complex();
                cell.seed = rng::mix_seed(base_seed,
                                          40000 + static_cast<std::uint64_t>(fi) * 1024 +
                                              static_cast<std::uint64_t>(s));
                try {
                    const linops::LinearOp op =
                        build_family_operator(family, m, cell.n, cell.seed, dbd_J);
                    cell.report = measure_embedding(
                        *op, chord_sets[static_cast<std::size_t>(s)]);
                    maxima.push_back(cell.report.delta_hat_max);
                    summary.cells_ok += 1;
                } catch (const std::exception& e) {
                    cell.failed = true;
                    cell.error = e.what();
                    summary.cells_failed += 1;
                }
                table.cells.push_back(std::move(cell));
            }
            summary.median_delta_hat_max = median_of(maxima);
            table.summaries.push_back(summary);
        }
    }
    return table;
}

void write_compare_csv(const CompareTable& table, std::ostream& out) {
    out << "family,m,n,seed,sample_count,delta_sq_max,delta_nonsq_max,p50,p90,p99,"
           "argmax_theta1,argmax_theta2\n";
    for (const auto& cell : table.cells) {
        if (cell.failed) continue;
        const auto& r = cell.report;
        const double th1 = r.argmax_pair.empty() ? 0.0 : r.argmax_pair.front();
        const double th2 = r.argmax_pair.size() < 2 ? 0.0
                                                    : r.argmax_pair[r.argmax_pair.size() / 2];
        out << embed_family_name(cell.family) << ',' << cell.m << ',' << cell.n << ','
            << cell.seed << ',' << r.sample_count << ',' << io::format_double(r.delta_hat_max)
            << ',' << io::format_double(r.delta_hat_nonsq_max) << ','
            << io::format_double(r.quantiles.p50) << ',' << io::format_double(r.quantiles.p90)
            << ',' << io::format_double(r.quantiles.p99) << ',' << io::format_double(th1) << ','
            << io::format_double(th2) << '\n';
    }
}

nlohmann::json compare_summary_json(const CompareTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : table.summaries) {
        rows.push_back({{"family", embed_family_name(s.family)},
                        {"m", s.m},
                        {"cells_ok", s.cells_ok},
                        {"cells_failed", s.cells_failed},
                        {"median_delta_hat_max", s.median_delta_hat_max}});
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& cell : table.cells) {
        if (!cell.failed) continue;
        failures.push_back({{"family", embed_family_name(cell.family)},
                            {"m", cell.m},
                            {"n", cell.n},
                            {"seed", cell.seed},
                            {"error", cell.error}});
    }
    return {{"chords_per_trial", table.chords_per_trial},
            {"summaries", rows},
            {"failures", failures}};
}

}  // namespace stable_embed::harness
