#pragma once

#include <string>
#include <vector>

#include "qconv/qcore.hpp"

// The paper-identity verification suite: one entry per acceptance check,
// each carrying the anchor of the identity it exercises, run at a fixed
// (q, gamma) parameter point.

namespace qconv::verify {

struct CheckResult {
    std::string id;
    std::string anchor;   // identity being verified, cited by equation
    std::string status;   // PASS / FAIL / SKIP
    double measured = 0.0;
    double tolerance = 0.0;
    double runtime_ms = 0.0;
    std::string detail;
};

inline constexpr const char* k_suite_version = "1";

/// ids of every registered check, in fixed report order
std::vector<std::string> check_ids();

/// run the suite at one parameter point; `only_glob` filters ids by a
/// '*'-glob; non-matching checks are omitted entirely
std::vector<CheckResult> run_suite(const QContext& ctx, double gamma,
                                   const std::string& only_glob = "");

}  // namespace qconv::verify
