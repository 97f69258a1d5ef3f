#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stable_embed::linops {

enum class Family {
    rademacher_diag,
    unitary_dft,
    dense_subgaussian,
    subsampled_dft,
    partial_circulant,
    random_convolution,
    dbd,
    devore_binary,
    composed,
};

enum class Dist { gaussian, rademacher };

// How a structured operator picks its m rows out of n.
enum class SelectionPolicy { first_m, random };

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::string dist_name(Dist d);
Dist dist_from_name(const std::string& name);

struct BlockParams {
    std::int64_t M = 0;  // rows per block
    std::int64_t N = 0;  // cols per block
    std::int64_t J = 0;  // block count

    bool operator==(const BlockParams&) const = default;
};

struct DevoreParams {
    std::int64_t p = 0;  // prime alphabet size
    std::int64_t r = 0;  // polynomial degree

    bool operator==(const DevoreParams&) const = default;
};

// Complete recipe for an operator: family, shape, seed, and any generated
// choices (row selections) embedded explicitly so that reconstruction never
// depends on draw order. Serializes to a fixed JSON schema.
struct OperatorDescriptor {
    Family family = Family::unitary_dft;
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::optional<std::vector<std::int64_t>> selection;
    std::optional<Dist> dist;
    std::optional<BlockParams> block_params;
    std::optional<DevoreParams> devore_params;
    std::vector<OperatorDescriptor> children;  // composed only, outermost first

    // defined out of line: a defaulted comparison would be deleted while the
    // type is still incomplete inside its own children vector
    bool operator==(const OperatorDescriptor& other) const;
};

nlohmann::json descriptor_to_json(const OperatorDescriptor& d);
// Rejects unknown fields, missing required fields, and invalid values.
OperatorDescriptor descriptor_from_json(const nlohmann::json& j);

// Structural validation: shapes, selection ranges, family-specific params.
// Throws std::invalid_argument or DimensionError naming the offending field.
void validate_descriptor(const OperatorDescriptor& d);

}  // namespace stable_embed::linops
