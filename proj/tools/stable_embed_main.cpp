// Command-line front end: wires manifolds, operator descriptors, bounds, and
// the measurement harness together behind reproducible file-based runs.
// Every run writes a manifest with the fully resolved config; `rerun` on a
// manifest reproduces all outputs byte-identically.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stable_embed/bounds.hpp"
#include "stable_embed/errors.hpp"
#include "stable_embed/harness.hpp"
#include "stable_embed/io.hpp"
#include "stable_embed/linops.hpp"
#include "stable_embed/manifolds.hpp"
#include "stable_embed/rng.hpp"

namespace se = stable_embed;

namespace {

struct RunConfig {
    std::string command;

    std::string manifold = "sinusoid";  // sinusoid | custom | params
    std::int64_t N = 8;                 // sinusoid harmonics; ambient N for params
    std::string grid_path;              // custom manifold CSV

    std::optional<double> D;
    std::optional<double> tau;
    std::optional<double> V;
    std::optional<double> R;

    double delta = 0.5;
    double rho = 0.01;
    double constant_C = 1.0;

    std::string family;
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::string dist = "gaussian";
    std::int64_t blocks = 0;
    std::int64_t devore_p = 0;
    std::int64_t devore_r = 0;
    std::string descriptor_path;
    std::string input_path;

    std::optional<std::uint64_t> seed;
    std::int64_t samples = 1000;
    double min_separation = -1.0;

    std::int64_t sparsity = 0;
    std::int64_t trials = 100;
    std::string support_policy = "uniform_support";

    std::vector<std::string> families;
    std::vector<std::int64_t> m_grid;
    std::int64_t seeds_per_cell = 5;

    double tau_scale = 1.0;
    std::int64_t curvature_samples = 1000;

    std::string out_path;
    std::string manifest_path;
};

nlohmann::json optional_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

void optional_from_json(const nlohmann::json& j, const char* key, std::optional<double>& v) {
    if (j.at(key).is_null()) {
        v.reset();
    } else {
        v = j.at(key).get<double>();
    }
}

nlohmann::json config_to_json(const RunConfig& c) {
    return {
        {"command", c.command},
        {"manifold", c.manifold},
        {"N", c.N},
        {"grid", c.grid_path},
        {"D", optional_to_json(c.D)},
        {"tau", optional_to_json(c.tau)},
        {"V", optional_to_json(c.V)},
        {"R", optional_to_json(c.R)},
        {"delta", c.delta},
        {"rho", c.rho},
        {"constant_C", c.constant_C},
        {"family", c.family},
        {"m", c.m},
        {"n", c.n},
        {"dist", c.dist},
        {"blocks", c.blocks},
        {"devore_p", c.devore_p},
        {"devore_r", c.devore_r},
        {"descriptor", c.descriptor_path},
        {"input", c.input_path},
        {"seed", c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr)},
        {"samples", c.samples},
        {"min_separation", c.min_separation},
        {"sparsity", c.sparsity},
        {"trials", c.trials},
        {"support_policy", c.support_policy},
        {"families", c.families},
        {"m_grid", c.m_grid},
        {"seeds_per_cell", c.seeds_per_cell},
        {"tau_scale", c.tau_scale},
        {"curvature_samples", c.curvature_samples},
        {"out", c.out_path},
        {"manifest", c.manifest_path},
    };
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.manifold = j.at("manifold").get<std::string>();
    c.N = j.at("N").get<std::int64_t>();
    c.grid_path = j.at("grid").get<std::string>();
    optional_from_json(j, "D", c.D);
    optional_from_json(j, "tau", c.tau);
    optional_from_json(j, "V", c.V);
    optional_from_json(j, "R", c.R);
    c.delta = j.at("delta").get<double>();
    c.rho = j.at("rho").get<double>();
    c.constant_C = j.at("constant_C").get<double>();
    c.family = j.at("family").get<std::string>();
    c.m = j.at("m").get<std::int64_t>();
    c.n = j.at("n").get<std::int64_t>();
    c.dist = j.at("dist").get<std::string>();
    c.blocks = j.at("blocks").get<std::int64_t>();
    c.devore_p = j.at("devore_p").get<std::int64_t>();
    c.devore_r = j.at("devore_r").get<std::int64_t>();
    c.descriptor_path = j.at("descriptor").get<std::string>();
    c.input_path = j.at("input").get<std::string>();
    if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    c.samples = j.at("samples").get<std::int64_t>();
    c.min_separation = j.at("min_separation").get<double>();
    c.sparsity = j.at("sparsity").get<std::int64_t>();
    c.trials = j.at("trials").get<std::int64_t>();
    c.support_policy = j.at("support_policy").get<std::string>();
    c.families = j.at("families").get<std::vector<std::string>>();
    c.m_grid = j.at("m_grid").get<std::vector<std::int64_t>>();
    c.seeds_per_cell = j.at("seeds_per_cell").get<std::int64_t>();
    c.tau_scale = j.at("tau_scale").get<double>();
    c.curvature_samples = j.at("curvature_samples").get<std::int64_t>();
    c.out_path = j.at("out").get<std::string>();
    c.manifest_path = j.at("manifest").get<std::string>();
    return c;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

void resolve_seed(RunConfig& cfg) {
    if (cfg.seed) return;
    std::random_device rd;
    cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

void resolve_manifest_path(RunConfig& cfg) {
    if (cfg.manifest_path.empty()) cfg.manifest_path = cfg.out_path + ".manifest.json";
}

void check_not_input(const RunConfig& cfg, const std::string& out) {
    if (out == cfg.input_path || out == cfg.descriptor_path || out == cfg.grid_path) {
        throw se::IoError("refusing to overwrite an input file: " + out);
    }
}

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs,
                    nlohmann::json extra = {}) {
    nlohmann::json m = {
        {"manifest_version", 1},
        {"tool", "stable_embed"},
        {"config", config_to_json(cfg)},
        {"outputs", outputs},
    };
    if (!extra.is_null() && !extra.empty()) m.update(extra);
    se::io::write_json_file(cfg.manifest_path, m);
}

se::manifolds::ManifoldModel load_manifold(const RunConfig& cfg) {
    if (cfg.manifold == "sinusoid") return se::manifolds::sinusoid_model(cfg.N);
    if (cfg.manifold == "custom") {
        if (cfg.grid_path.empty()) {
            throw std::invalid_argument("manifold 'custom' requires --grid <csv>");
        }
        return se::io::read_grid_model_csv(cfg.grid_path, "custom");
    }
    throw std::invalid_argument("unknown manifold '" + cfg.manifold +
                                "' (expected sinusoid or custom)");
}

se::bounds::ManifoldParams resolve_params(const RunConfig& cfg) {
    se::bounds::ManifoldParams p;
    if (cfg.manifold == "sinusoid") {
        p = se::manifolds::sinusoid_geometry(cfg.N);
    } else if (cfg.manifold == "params") {
        if (!cfg.D || !cfg.tau || !cfg.V || !cfg.R) {
            throw std::invalid_argument(
                "manifold 'params' requires all of --D, --tau, --V, --R (and --N)");
        }
        p.N = static_cast<double>(cfg.N);
    } else {
        throw std::invalid_argument("bounds accepts --manifold sinusoid or params, got '" +
                                    cfg.manifold + "'");
    }
    if (cfg.D) p.D = *cfg.D;
    if (cfg.tau) p.tau = *cfg.tau;
    if (cfg.V) p.V = *cfg.V;
    if (cfg.R) p.R = *cfg.R;
    se::bounds::validate_params(p);
    return p;
}

int cmd_bounds(RunConfig cfg) {
    resolve_manifest_path(cfg);
    const auto params = resolve_params(cfg);
    const auto budget = se::bounds::theorem1_budget(params, cfg.delta, cfg.rho);

    nlohmann::json corollaries = nlohmann::json::array();
    using se::bounds::Corollary;
    for (Corollary c : {Corollary::subgaussian, Corollary::fourier, Corollary::circulant,
                        Corollary::random_conv, Corollary::dbd, Corollary::deterministic}) {
        corollaries.push_back(se::bounds::corollary_to_json(
            se::bounds::corollary_measurements(c, params, cfg.delta, cfg.rho, cfg.constant_C)));
    }
    nlohmann::json out = {
        {"params", se::bounds::params_to_json(params)},
        {"budget", se::bounds::budget_to_json(budget)},
        {"corollaries", corollaries},
    };
    se::io::write_json_file(cfg.out_path, out);
    write_manifest(cfg, {cfg.out_path});
    return 0;
}

se::linops::LinearOp build_descriptor_op(const RunConfig& cfg) {
    using namespace se::linops;
    const std::uint64_t seed = *cfg.seed;
    if (cfg.family == "identity") return make_identity(cfg.n);
    if (cfg.family == "rademacher_diag") return make_rademacher_diag(cfg.n, seed);
    if (cfg.family == "unitary_dft") return make_unitary_dft(cfg.n);
    if (cfg.family == "dense_subgaussian") {
        return make_dense_subgaussian(cfg.m, cfg.n, dist_from_name(cfg.dist), seed);
    }
    if (cfg.family == "subsampled_dft") return make_subsampled_dft(cfg.m, cfg.n, seed);
    if (cfg.family == "partial_circulant") {
        return make_partial_circulant(cfg.m, cfg.n, dist_from_name(cfg.dist), seed);
    }
    if (cfg.family == "random_convolution") return make_random_convolution(cfg.m, cfg.n, seed);
    if (cfg.family == "dbd") {
        if (cfg.blocks < 1) throw std::invalid_argument("dbd requires --blocks >= 1");
        if (cfg.m % cfg.blocks != 0 || cfg.n % cfg.blocks != 0) {
            throw se::DimensionError("--blocks must divide both --m and --n");
        }
        return make_dbd(cfg.m / cfg.blocks, cfg.n / cfg.blocks, cfg.blocks,
                        dist_from_name(cfg.dist), seed);
    }
    if (cfg.family == "devore_binary") {
        if (cfg.devore_p < 2 || cfg.devore_r < 1) {
            throw std::invalid_argument("devore_binary requires --p (prime) and --r >= 1");
        }
        return make_devore_binary(cfg.devore_p, cfg.devore_r);
    }
    throw std::invalid_argument("unknown operator family '" + cfg.family + "'");
}

int cmd_build_op(RunConfig cfg) {
    resolve_seed(cfg);
    resolve_manifest_path(cfg);
    const auto op = build_descriptor_op(cfg);
    check_not_input(cfg, cfg.out_path);
    se::io::write_json_file(cfg.out_path, se::linops::descriptor_to_json(op->descriptor()));
    write_manifest(cfg, {cfg.out_path});
    return 0;
}

int cmd_embed(RunConfig cfg) {
    resolve_manifest_path(cfg);
    const auto desc_json = se::io::read_json_file(cfg.descriptor_path);
    const auto desc = se::linops::descriptor_from_json(desc_json);
    const auto op = se::linops::make_operator(desc);

    const auto rows = se::io::read_vectors_csv(cfg.input_path);
    if (rows.empty()) throw se::IoError("input has no vectors: " + cfg.input_path);
    std::vector<std::vector<se::linops::cplx>> out_rows;
    out_rows.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<std::int64_t>(rows[i].size()) != op->cols()) {
            throw se::DimensionError("input row " + std::to_string(i + 1) + " has length " +
                                     std::to_string(rows[i].size()) + ", operator expects " +
                                     std::to_string(op->cols()));
        }
        out_rows.push_back(op->apply(rows[i]));
    }
    check_not_input(cfg, cfg.out_path);
    se::io::write_vectors_csv(cfg.out_path, out_rows);

    const std::string canon = se::io::format_json(se::linops::descriptor_to_json(desc));
    write_manifest(cfg, {cfg.out_path},
                   {{"descriptor_hash", "fnv1a:" + hex64(fnv1a64(canon))}});
    return 0;
}

int cmd_test_embedding(RunConfig cfg) {
    resolve_seed(cfg);
    resolve_manifest_path(cfg);
    const auto model = load_manifold(cfg);
    if (cfg.n == 0) cfg.n = model.ambient_complex();
    if (cfg.family.empty()) throw std::invalid_argument("test-embedding requires --family");

    const auto family = se::harness::embed_family_from_name(cfg.family);
    const auto chords = se::manifolds::sample_chords(model, cfg.samples,
                                                     se::rng::mix_seed(*cfg.seed, 1000),
                                                     cfg.min_separation);
    const auto op = se::harness::build_family_operator(family, cfg.m, cfg.n,
                                                       se::rng::mix_seed(*cfg.seed, 2000),
                                                       cfg.blocks);
    const auto report = se::harness::measure_embedding(*op, chords);
    se::io::write_json_file(cfg.out_path, se::harness::report_to_json(report));
    write_manifest(cfg, {cfg.out_path});
    return 0;
}

int cmd_test_rip(RunConfig cfg) {
    resolve_seed(cfg);
    resolve_manifest_path(cfg);
    if (cfg.family.empty()) throw std::invalid_argument("test-rip requires --family");
    if (cfg.sparsity < 1) throw std::invalid_argument("test-rip requires --sparsity >= 1");
    RunConfig op_cfg = cfg;
    op_cfg.seed = se::rng::mix_seed(*cfg.seed, 2000);
    const auto op = build_descriptor_op(op_cfg);
    const auto report = se::harness::measure_rip(
        *op, cfg.sparsity, cfg.trials, se::rng::mix_seed(*cfg.seed, 3000),
        se::harness::support_policy_from_name(cfg.support_policy));
    se::io::write_json_file(cfg.out_path, se::harness::rip_report_to_json(report));
    write_manifest(cfg, {cfg.out_path});
    return 0;
}

int cmd_compare(RunConfig cfg) {
    resolve_seed(cfg);
    resolve_manifest_path(cfg);
    const auto model = load_manifold(cfg);
    if (cfg.n == 0) cfg.n = model.ambient_complex();
    if (cfg.families.empty()) throw std::invalid_argument("compare requires --families");
    if (cfg.m_grid.empty()) throw std::invalid_argument("compare requires --m-grid");

    std::vector<se::harness::EmbedFamily> families;
    families.reserve(cfg.families.size());
    for (const auto& name : cfg.families) {
        families.push_back(se::harness::embed_family_from_name(name));
    }
    std::vector<std::int64_t> m_grid = cfg.m_grid;
    for (std::int64_t m : m_grid) {
        if (m < 1 || m > cfg.n) {
            throw se::DimensionError("--m-grid entry " + std::to_string(m) +
                                     " outside [1, n=" + std::to_string(cfg.n) + "]");
        }
    }

    const auto table = se::harness::compare_families(model, families, m_grid, cfg.samples,
                                                     cfg.seeds_per_cell, *cfg.seed,
                                                     cfg.min_separation, cfg.blocks);
    check_not_input(cfg, cfg.out_path);
    std::ostringstream csv;
    se::harness::write_compare_csv(table, csv);
    se::io::write_text_file(cfg.out_path, csv.str());
    const std::string summary_path = cfg.out_path + ".summary.json";
    se::io::write_json_file(summary_path, se::harness::compare_summary_json(table));
    write_manifest(cfg, {cfg.out_path, summary_path});

    std::int64_t failed = 0;
    for (const auto& cell : table.cells) failed += cell.failed ? 1 : 0;
    if (failed == static_cast<std::int64_t>(table.cells.size())) {
        throw se::ExperimentError("all " + std::to_string(failed) + " compare cells failed");
    }
    if (failed > 0) {
        std::cerr << "warning: " << failed << " of " << table.cells.size()
                  << " compare cells failed (listed in summary)\n";
    }
    return 0;
}

int cmd_verify_geometry(RunConfig cfg) {
    resolve_seed(cfg);
    resolve_manifest_path(cfg);
    const auto model = load_manifold(cfg);
    if (!model.geometry()) {
        throw std::invalid_argument(
            "verify-geometry needs a model with known geometry; custom grids are "
            "accepted on trust and cannot be verified");
    }
    auto geometry = *model.geometry();
    geometry.tau *= cfg.tau_scale;

    const auto avoidance = se::manifolds::verify_self_avoidance(
        model, geometry, cfg.samples, se::rng::mix_seed(*cfg.seed, 5000));
    const auto curvature =
        se::manifolds::verify_curvature_bound(model, geometry, cfg.curvature_samples);

    nlohmann::json out = {
        {"params", se::bounds::params_to_json(geometry)},
        {"tau_scale", cfg.tau_scale},
        {"self_avoidance", se::manifolds::self_avoidance_to_json(avoidance)},
        {"curvature", se::manifolds::curvature_to_json(curvature)},
    };
    se::io::write_json_file(cfg.out_path, out);
    write_manifest(cfg, {cfg.out_path});
    return 0;
}

int run_config(RunConfig cfg) {
    if (cfg.out_path.empty()) throw std::invalid_argument(cfg.command + " requires --out");
    if (cfg.command == "bounds") return cmd_bounds(std::move(cfg));
    if (cfg.command == "build-op") return cmd_build_op(std::move(cfg));
    if (cfg.command == "embed") return cmd_embed(std::move(cfg));
    if (cfg.command == "test-embedding") return cmd_test_embedding(std::move(cfg));
    if (cfg.command == "test-rip") return cmd_test_rip(std::move(cfg));
    if (cfg.command == "compare") return cmd_compare(std::move(cfg));
    if (cfg.command == "verify-geometry") return cmd_verify_geometry(std::move(cfg));
    throw std::invalid_argument("unknown command in config: '" + cfg.command + "'");
}

int cmd_rerun(const std::string& manifest_path) {
    const auto manifest = se::io::read_json_file(manifest_path);
    if (!manifest.contains("config")) {
        throw se::IoError("manifest has no config object: " + manifest_path);
    }
    RunConfig cfg = config_from_json(manifest.at("config"));
    const bool seedless = cfg.command == "bounds" || cfg.command == "embed";
    if (!cfg.seed && !seedless) {
        throw se::IoError("manifest config is missing its resolved seed: " + manifest_path);
    }
    return run_config(std::move(cfg));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable_embed: measurement operators, embedding bounds, and "
                 "empirical distortion runs"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string rerun_manifest;

    auto add_manifold = [&cfg](CLI::App* sub) {
        sub->add_option("--manifold", cfg.manifold, "Model name: sinusoid or custom");
        sub->add_option("--N", cfg.N, "Sinusoid harmonic count");
        sub->add_option("--grid", cfg.grid_path, "Grid CSV for --manifold custom");
    };
    auto add_seed_out = [&cfg](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Base seed; drawn and recorded if absent");
        sub->add_option("--out", cfg.out_path, "Output path")->required();
        sub->add_option("--manifest", cfg.manifest_path,
                        "Manifest path (default: <out>.manifest.json)");
    };

    auto* bounds = app.add_subcommand("bounds", "Theorem-level measurement budgets");
    bounds->add_option("--manifold", cfg.manifold, "sinusoid (geometry derived) or params");
    bounds->add_option("--N", cfg.N, "Harmonics (sinusoid) or ambient dimension (params)");
    bounds->add_option("--D", cfg.D, "Intrinsic dimension override");
    bounds->add_option("--tau", cfg.tau, "Condition number reciprocal override");
    bounds->add_option("--V", cfg.V, "Volume override");
    bounds->add_option("--R", cfg.R, "Geodesic regularity override");
    bounds->add_option("--delta", cfg.delta, "Target conditioning delta_M");
    bounds->add_option("--rho", cfg.rho, "Failure probability");
    bounds->add_option("--constant-C", cfg.constant_C, "Leading constant for corollaries");
    bounds->add_option("--out", cfg.out_path, "Output JSON path")->required();
    bounds->add_option("--manifest", cfg.manifest_path,
                       "Manifest path (default: <out>.manifest.json)");

    auto* build_op = app.add_subcommand("build-op", "Write an operator descriptor");
    build_op->add_option("--family", cfg.family, "Operator family")->required();
    build_op->add_option("--m", cfg.m, "Rows");
    build_op->add_option("--n", cfg.n, "Columns");
    build_op->add_option("--dist", cfg.dist, "Entry distribution: gaussian or rademacher");
    build_op->add_option("--blocks", cfg.blocks, "Block count J (dbd)");
    build_op->add_option("--p", cfg.devore_p, "Prime alphabet size (devore_binary)");
    build_op->add_option("--r", cfg.devore_r, "Polynomial degree (devore_binary)");
    add_seed_out(build_op);

    auto* embed = app.add_subcommand("embed", "Apply a descriptor to vectors from CSV");
    embed->add_option("--descriptor", cfg.descriptor_path, "Descriptor JSON")->required();
    embed->add_option("--input", cfg.input_path, "Input vectors CSV")->required();
    embed->add_option("--out", cfg.out_path, "Output vectors CSV")->required();
    embed->add_option("--manifest", cfg.manifest_path,
                      "Manifest path (default: <out>.manifest.json)");

    auto* test_embedding = app.add_subcommand("test-embedding",
                                              "Chord distortion for one operator");
    add_manifold(test_embedding);
    test_embedding->add_option("--family", cfg.family,
                               "dense_gaussian, subsampled_dft, partial_circulant, "
                               "random_convolution, or dbd")
        ->required();
    test_embedding->add_option("--m", cfg.m, "Measurement count")->required();
    test_embedding->add_option("--n", cfg.n, "Operator columns (default: ambient dim)");
    test_embedding->add_option("--blocks", cfg.blocks, "Block count J for dbd (0 = auto)");
    test_embedding->add_option("--samples", cfg.samples, "Chord count");
    test_embedding->add_option("--min-separation", cfg.min_separation,
                               "Chord rejection radius (negative = default)");
    add_seed_out(test_embedding);

    auto* test_rip = app.add_subcommand("test-rip", "Empirical RIP constant");
    test_rip->add_option("--family", cfg.family, "Operator family")->required();
    test_rip->add_option("--m", cfg.m, "Rows");
    test_rip->add_option("--n", cfg.n, "Columns");
    test_rip->add_option("--dist", cfg.dist, "Entry distribution");
    test_rip->add_option("--blocks", cfg.blocks, "Block count J (dbd)");
    test_rip->add_option("--p", cfg.devore_p, "Prime alphabet size (devore_binary)");
    test_rip->add_option("--r", cfg.devore_r, "Polynomial degree (devore_binary)");
    test_rip->add_option("--sparsity", cfg.sparsity, "Sparsity S")->required();
    test_rip->add_option("--trials", cfg.trials, "Random sparse vectors");
    test_rip->add_option("--support-policy", cfg.support_policy,
                         "uniform_support or worst_of_batch");
    add_seed_out(test_rip);

    auto* compare = app.add_subcommand("compare", "Family comparison over an m grid");
    add_manifold(compare);
    compare->add_option("--families", cfg.families, "Comma-separated family list")
        ->required()
        ->delimiter(',');
    compare->add_option("--m-grid", cfg.m_grid, "Comma-separated measurement counts")
        ->required()
        ->delimiter(',');
    compare->add_option("--n", cfg.n, "Operator columns (default: ambient dim)");
    compare->add_option("--blocks", cfg.blocks, "Block count J for dbd (0 = auto)");
    compare->add_option("--samples", cfg.samples, "Chords per trial");
    compare->add_option("--seeds-per-cell", cfg.seeds_per_cell, "Trials per (family, m)");
    compare->add_option("--min-separation", cfg.min_separation,
                        "Chord rejection radius (negative = default)");
    add_seed_out(compare);

    auto* verify_geometry = app.add_subcommand("verify-geometry",
                                               "Self-avoidance and curvature checks");
    add_manifold(verify_geometry);
    verify_geometry->add_option("--samples", cfg.samples, "Pair count");
    verify_geometry->add_option("--curvature-samples", cfg.curvature_samples,
                                "Curvature grid size");
    verify_geometry->add_option("--tau-scale", cfg.tau_scale,
                                "Scale the claimed tau (for negative controls)");
    add_seed_out(verify_geometry);

    auto* rerun = app.add_subcommand("rerun", "Re-execute a recorded manifest");
    rerun->add_option("manifest", rerun_manifest, "Manifest JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (rerun->parsed()) return cmd_rerun(rerun_manifest);
        cfg.command = app.get_subcommands().front()->get_name();
        return run_config(std::move(cfg));
    } catch (const se::DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const se::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const se::ExperimentError& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
