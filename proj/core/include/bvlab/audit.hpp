#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bvlab {

struct AuditConfig {
    std::uint64_t seed = 0;
    std::size_t corpus_size = 50;
    std::size_t group_pairs = 100;
    std::vector<int> dims{1, 2};
    /// "none" or "broken_chi" (chain-rule check with a wrong derivative bound).
    std::string fixture = "none";
    int threads = 1;
};

struct SuiteResult {
    std::string name;
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst = 0.0;  // suite-specific: largest relative error, or largest ratio to the bound
    std::string detail;

    bool pass() const { return violations == 0; }
};

struct AuditReport {
    AuditConfig config;
    std::vector<SuiteResult> suites;
    std::vector<std::string> warnings;

    bool pass() const;
    std::vector<std::string> failed() const;
};

/// Runs every invariant suite on a deterministic corpus.
///
/// Suites: lorentz_equality, lorentz_lp, embedding, group_isometry, group_axioms,
/// lattice_splitting, chi_conditions, layer_containment, layer_disjointness,
/// layer_overlap, chain_rule.
AuditReport run_audit(const AuditConfig& config);

}  // namespace bvlab
