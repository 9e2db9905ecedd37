#pragma once

// Monte-Carlo check of the cascade criticality condition p > exp(-gamma) on
// expansion trees.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routerisk/graph.hpp"

namespace routerisk {

/// Rooted tree whose shell k holds round(b^k) nodes, each wired to a parent
/// in shell k-1 chosen round-robin. Node 0 is the root; ids increase shell by shell.
GraphSnapshot generate_expansion_tree(double branching, std::size_t depth);

struct CascadeStats {
    std::vector<double> mean;        // mean infected count per BFS shell
    std::vector<double> std_error;   // standard error of that mean
    std::size_t trials = 0;
};

/// Independent per-edge transmission with probability p from infected nodes
/// to their children along directed edges, starting from `root`.
/// Deterministic for a given seed regardless of thread count.
CascadeStats simulate_cascade(const GraphSnapshot& g, NodeId root, double p, std::size_t trials,
                              std::uint64_t seed);

enum class Criticality { Subcritical, Critical, Supercritical };

std::string to_string(Criticality c);

struct CriticalityRow {
    double p = 0.0;
    double slope = 0.0;  // OLS slope of ln(mean N_r) on r over shells with mean > 0
    Criticality classification = Criticality::Subcritical;
};

struct CriticalityReport {
    double branching = 0.0;
    double analytic_threshold = 0.0;              // exp(-ln b) = 1/b
    std::optional<double> empirical_threshold;    // interpolated zero crossing of the slope
    std::vector<CriticalityRow> rows;
};

CriticalityReport criticality_report(double branching, std::span<const double> p_grid, std::size_t depth,
                                     std::size_t trials, std::uint64_t seed, double epsilon = 0.05);

}  // namespace routerisk
