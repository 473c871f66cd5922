#pragma once

#include <vector>

#include "obslab/bfc.hpp"
#include "obslab/system.hpp"

namespace obslab {

// Consistency findings from the necessary-condition rules.
enum class RuleFlag {
    // A BFC certificate coexists with a declared unbounded real spectrum;
    // forbidden for true systems, so the certificate is a truncation
    // artifact or the declaration is wrong.
    ContradictionPrap,
    // BFC certified and the spectrum declared strip-bounded: the semigroup
    // should extend to a group.
    ExpectGroup,
    // Declared unbounded real spectrum: no BFC certificate should exist for
    // the true family.
    NoBfcExpected,
    // BFC certified with a declared compact resolvent: only possible in
    // finite dimension.
    FiniteDimExpected,
};

const char* rule_flag_name(RuleFlag flag);

struct SpectralDiagnostics {
    double supRe = 0.0;
    double infRe = 0.0;
    double stripWidth = 0.0;
    bool groupExtendable = false;
    std::vector<RuleFlag> flags;
};

// Geometry of the mode cloud plus the group-extendability reading of the
// declared metadata.
SpectralDiagnostics spectral_summary(const ValidatedSystem& sys);

// Applies the spectral necessary conditions as consistency rules against a
// BFC scan result.  Flag order is fixed.
std::vector<RuleFlag> consistency_rules(const ValidatedSystem& sys, const BfcScanResult& bfc);

} // namespace obslab
