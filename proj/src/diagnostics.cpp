#include "obslab/diagnostics.hpp"

namespace obslab {

const char* rule_flag_name(RuleFlag flag) {
    switch (flag) {
        case RuleFlag::ContradictionPrap: return "ContradictionPrap";
        case RuleFlag::ExpectGroup: return "ExpectGroup";
        case RuleFlag::NoBfcExpected: return "NoBfcExpected";
        case RuleFlag::FiniteDimExpected: return "FiniteDimExpected";
    }
    return "UnknownFlag";
}

SpectralDiagnostics spectral_summary(const ValidatedSystem& sys) {
    SpectralDiagnostics d;
    d.supRe = sys.max_re();
    d.infRe = sys.min_re();
    d.stripWidth = d.supRe - d.infRe;
    // supRe over a finite section is always finite; the declaration is the
    // only way the un-truncated family can fail to live in a strip.
    d.groupExtendable = !sys.metadata().re_spectrum_unbounded;
    return d;
}

std::vector<RuleFlag> consistency_rules(const ValidatedSystem& sys, const BfcScanResult& bfc) {
    std::vector<RuleFlag> flags;
    const bool certified = bfc.found();
    const bool unbounded = sys.metadata().re_spectrum_unbounded;
    if (certified && unbounded) flags.push_back(RuleFlag::ContradictionPrap);
    if (certified && !unbounded) flags.push_back(RuleFlag::ExpectGroup);
    if (unbounded) flags.push_back(RuleFlag::NoBfcExpected);
    if (certified && sys.metadata().compact_resolvent) flags.push_back(RuleFlag::FiniteDimExpected);
    return flags;
}

} // namespace obslab
