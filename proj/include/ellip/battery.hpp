#pragma once
// Obstruction battery over a manifold descriptor, and report rendering.
#include "ellip/descriptor.hpp"
#include "ellip/embed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ellip {

struct BatteryOptions {
    SearchOptions search;
    bool run_search = true;
};

enum class Overall { NoObstructionFound, ExcludedWithWitness };
std::string_view to_string(Overall o);

struct BatteryReport {
    std::string name;
    int n = 0;
    std::string pi1;
    std::vector<std::size_t> betti;
    long euler = 0;
    std::vector<CheckResult> checks;
    Overall overall = Overall::NoObstructionFound;
    /// certified | numerical | not-found | skipped
    std::string search_status = "skipped";
    std::string search_method;
    std::string search_witness;
    double search_residual = -1;
    int search_trial = -1;
    std::vector<std::string> warnings;

    std::vector<std::string> failing_checks() const;
};

/// Runs, in order: Poincare duality, pi1 growth and abelianness, Euler
/// characteristic, torus subalgebra, rank n - 1, the 4-manifold battery
/// when n = 4, the optional cup-form comparison, and the embedding search
/// when nothing failed. Component errors become inconclusive checks whose
/// summary names the module that raised them.
BatteryReport run_battery(const ManifoldDescriptor& d, const BatteryOptions& options = {});

/// JSON document (schema "ellip.battery/1"); byte-stable for fixed inputs.
std::string render_structured(const BatteryReport& r);
std::string render_text(const BatteryReport& r);
/// One line of the corpus verdict table.
std::string verdict_row(const BatteryReport& r);
std::string verdict_header();

} // namespace ellip
