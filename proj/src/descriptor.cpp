#include "stable_embed/descriptor.hpp"

#include <algorithm>
#include <stdexcept>

#include "stable_embed/errors.hpp"

namespace stable_embed::linops {

namespace {

struct FamilyNameEntry {
    Family family;
    const char* name;
};

constexpr FamilyNameEntry kFamilyNames[] = {
    {Family::rademacher_diag, "rademacher_diag"},
    {Family::unitary_dft, "unitary_dft"},
    {Family::dense_subgaussian, "dense_subgaussian"},
    {Family::subsampled_dft, "subsampled_dft"},
    {Family::partial_circulant, "partial_circulant"},
    {Family::random_convolution, "random_convolution"},
    {Family::dbd, "dbd"},
    {Family::devore_binary, "devore_binary"},
    {Family::composed, "composed"},
};

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

std::int64_t ipow(std::int64_t base, std::int64_t exp) {
    std::int64_t out = 1;
    for (std::int64_t i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

bool OperatorDescriptor::operator==(const OperatorDescriptor& other) const {
    return family == other.family && m == other.m && n == other.n && seed == other.seed &&
           selection == other.selection && dist == other.dist &&
           block_params == other.block_params && devore_params == other.devore_params &&
           children == other.children;
}

std::string family_name(Family f) {
    for (const auto& e : kFamilyNames) {
        if (e.family == f) return e.name;
    }
    throw std::invalid_argument("family_name: unknown family value");
}

Family family_from_name(const std::string& name) {
    for (const auto& e : kFamilyNames) {
        if (name == e.name) return e.family;
    }
    throw std::invalid_argument("family: unknown name \"" + name + "\"");
}

std::string dist_name(Dist d) {
    return d == Dist::gaussian ? "gaussian" : "rademacher";
}

Dist dist_from_name(const std::string& name) {
    if (name == "gaussian") return Dist::gaussian;
    if (name == "rademacher") return Dist::rademacher;
    throw std::invalid_argument("dist: unknown name \"" + name + "\"");
}

nlohmann::json descriptor_to_json(const OperatorDescriptor& d) {
    nlohmann::json j;
    j["family"] = family_name(d.family);
    j["m"] = d.m;
    j["n"] = d.n;
    j["seed"] = d.seed;
    j["selection"] = d.selection ? nlohmann::json(*d.selection) : nlohmann::json(nullptr);
    j["dist"] = d.dist ? nlohmann::json(dist_name(*d.dist)) : nlohmann::json(nullptr);
    if (d.block_params) {
        j["block_params"] =
            nlohmann::json::array({d.block_params->M, d.block_params->N, d.block_params->J});
    } else {
        j["block_params"] = nullptr;
    }
    if (d.devore_params) {
        j["devore_params"] = nlohmann::json::array({d.devore_params->p, d.devore_params->r});
    } else {
        j["devore_params"] = nullptr;
    }
    if (d.family == Family::composed) {
        nlohmann::json kids = nlohmann::json::array();
        for (const auto& c : d.children) kids.push_back(descriptor_to_json(c));
        j["children"] = kids;
    } else {
        j["children"] = nullptr;
    }
    return j;
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> allowed, const char* what) {
    for (const char* key : required) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string(what) + ": missing field \"" + key + "\"");
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known) {
            throw std::invalid_argument(std::string(what) + ": unknown field \"" + it.key() +
                                        "\"");
        }
    }
}

std::int64_t get_int(const nlohmann::json& j, const char* key) {
    if (!j.at(key).is_number_integer()) {
        throw std::invalid_argument(std::string("descriptor: field \"") + key +
                                    "\" must be an integer");
    }
    return j.at(key).get<std::int64_t>();
}

}  // namespace

OperatorDescriptor descriptor_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("descriptor: expected a JSON object");
    }
    require_keys(j, {"family", "m", "n", "seed"},
                 {"family", "m", "n", "seed", "selection", "dist", "block_params",
                  "devore_params", "children"},
                 "descriptor");

    OperatorDescriptor d;
    d.family = family_from_name(j.at("family").get<std::string>());
    d.m = get_int(j, "m");
    d.n = get_int(j, "n");
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
        throw std::invalid_argument("descriptor: field \"seed\" must be an integer");
    }
    d.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("selection") && !j.at("selection").is_null()) {
        d.selection = j.at("selection").get<std::vector<std::int64_t>>();
    }
    if (j.contains("dist") && !j.at("dist").is_null()) {
        d.dist = dist_from_name(j.at("dist").get<std::string>());
    }
    if (j.contains("block_params") && !j.at("block_params").is_null()) {
        const auto& b = j.at("block_params");
        if (!b.is_array() || b.size() != 3) {
            throw std::invalid_argument(
                "descriptor: field \"block_params\" must be an array [M, N, J]");
        }
        d.block_params = BlockParams{b.at(0).get<std::int64_t>(), b.at(1).get<std::int64_t>(),
                                     b.at(2).get<std::int64_t>()};
    }
    if (j.contains("devore_params") && !j.at("devore_params").is_null()) {
        const auto& p = j.at("devore_params");
        if (!p.is_array() || p.size() != 2) {
            throw std::invalid_argument(
                "descriptor: field \"devore_params\" must be an array [p, r]");
        }
        d.devore_params = DevoreParams{p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()};
    }
    if (j.contains("children") && !j.at("children").is_null()) {
        if (!j.at("children").is_array()) {
            throw std::invalid_argument("descriptor: field \"children\" must be an array");
        }
        for (const auto& c : j.at("children")) d.children.push_back(descriptor_from_json(c));
    }
    validate_descriptor(d);
    return d;
}

void validate_descriptor(const OperatorDescriptor& d) {
    if (d.m < 1 || d.n < 1) {
        throw DimensionError("descriptor: m and n must be positive, got m=" +
                             std::to_string(d.m) + " n=" + std::to_string(d.n));
    }
    const bool wants_children = d.family == Family::composed;
    if (!wants_children && !d.children.empty()) {
        throw std::invalid_argument("descriptor: field \"children\" only valid for composed");
    }

    switch (d.family) {
        case Family::rademacher_diag:
        case Family::unitary_dft:
            if (d.m != d.n) {
                throw DimensionError("descriptor: " + family_name(d.family) +
                                     " is square, got m=" + std::to_string(d.m) +
                                     " n=" + std::to_string(d.n));
            }
            break;
        case Family::dense_subgaussian:
            if (!d.dist) {
                throw std::invalid_argument(
                    "descriptor: dense_subgaussian requires field \"dist\"");
            }
            break;
        case Family::subsampled_dft:
        case Family::partial_circulant:
        case Family::random_convolution: {
            if (d.m > d.n) {
                throw DimensionError("descriptor: " + family_name(d.family) +
                                     " requires m <= n, got m=" + std::to_string(d.m) +
                                     " n=" + std::to_string(d.n));
            }
            if (d.family == Family::partial_circulant && !d.dist) {
                throw std::invalid_argument(
                    "descriptor: partial_circulant requires field \"dist\"");
            }
            if (d.selection) {
                if (static_cast<std::int64_t>(d.selection->size()) != d.m) {
                    throw std::invalid_argument(
                        "descriptor: field \"selection\" must have exactly m entries");
                }
                for (std::size_t i = 0; i < d.selection->size(); ++i) {
                    const std::int64_t v = (*d.selection)[i];
                    if (v < 0 || v >= d.n) {
                        throw std::invalid_argument(
                            "descriptor: field \"selection\" entry out of range [0, n)");
                    }
                    if (i > 0 && (*d.selection)[i - 1] >= v) {
                        throw std::invalid_argument(
                            "descriptor: field \"selection\" must be strictly increasing");
                    }
                }
            }
            break;
        }
        case Family::dbd: {
            if (!d.block_params) {
                throw std::invalid_argument("descriptor: dbd requires field \"block_params\"");
            }
            if (!d.dist) {
                throw std::invalid_argument("descriptor: dbd requires field \"dist\"");
            }
            const auto& b = *d.block_params;
            if (b.M < 1 || b.N < 1 || b.J < 1) {
                throw std::invalid_argument(
                    "descriptor: field \"block_params\" entries must be positive");
            }
            if (d.m != b.M * b.J || d.n != b.N * b.J) {
                throw DimensionError("descriptor: dbd shape must be m=M*J, n=N*J, got m=" +
                                     std::to_string(d.m) + " n=" + std::to_string(d.n));
            }
            break;
        }
        case Family::devore_binary: {
            if (!d.devore_params) {
                throw std::invalid_argument(
                    "descriptor: devore_binary requires field \"devore_params\"");
            }
            const auto& p = *d.devore_params;
            if (!is_prime(p.p)) {
                throw std::invalid_argument("descriptor: devore_params.p must be prime, got " +
                                            std::to_string(p.p));
            }
            if (p.r < 1 || p.r >= p.p) {
                throw std::invalid_argument(
                    "descriptor: devore_params requires 1 <= r < p, got r=" +
                    std::to_string(p.r));
            }
            if (d.m != p.p * p.p || d.n != ipow(p.p, p.r + 1)) {
                throw DimensionError("descriptor: devore_binary shape must be m=p^2, n=p^(r+1)");
            }
            break;
        }
        case Family::composed: {
            if (d.children.empty()) {
                throw std::invalid_argument(
                    "descriptor: composed requires a nonempty \"children\" array");
            }
            for (const auto& c : d.children) validate_descriptor(c);
            for (std::size_t i = 0; i + 1 < d.children.size(); ++i) {
                if (d.children[i].n != d.children[i + 1].m) {
                    throw DimensionError(
                        "descriptor: composed children[" + std::to_string(i) + "] (" +
                        std::to_string(d.children[i].m) + "x" + std::to_string(d.children[i].n) +
                        ") does not chain with children[" + std::to_string(i + 1) + "] (" +
                        std::to_string(d.children[i + 1].m) + "x" +
                        std::to_string(d.children[i + 1].n) + ")");
                }
            }
            if (d.m != d.children.front().m || d.n != d.children.back().n) {
                throw DimensionError("descriptor: composed shape must match children ends");
            }
            break;
        }
    }
}

}  // namespace stable_embed::linops
