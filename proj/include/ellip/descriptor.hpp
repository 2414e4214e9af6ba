#pragma once
// Plain-text manifold descriptors: cohomology presentation, fundamental
// group data and optional 4-manifold intersection data.
#include "ellip/algebra.hpp"
#include "ellip/nilcoh.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace ellip {

struct Pi1Descriptor {
    enum class Kind { Trivial, Finite, FreeAbelian, Nilpotent, Unknown };
    Kind kind = Kind::Unknown;
    int rank = 0;                       // FreeAbelian: Z^rank
    std::optional<NilLieAlgebra> lie;   // Nilpotent: Malcev Lie algebra

    std::string to_string() const;
};

struct ManifoldDescriptor {
    std::string name;
    int n = 0;
    AlgebraPresentation cohomology;
    Pi1Descriptor pi1;
    std::optional<std::pair<int, int>> betti; // (b2+, b2-) override
    std::optional<int> cup_form_degree;
    std::string notes;
};

/// Parses the descriptor format (see docs/descriptor-format.md). Throws
/// ParseError with the line and column of the offending token.
ManifoldDescriptor parse_descriptor(std::string_view text);
ManifoldDescriptor load_descriptor(const std::string& path);

/// Generators and relations blocks for a presentation, in descriptor syntax.
std::string format_presentation(const AlgebraPresentation& a);

} // namespace ellip
