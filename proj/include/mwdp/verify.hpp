#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwdp {

struct VerifyRow {
    std::string name;
    bool pass = false;
    std::string detail; // failure reason, empty on pass
};

/// Fast end-to-end self-check battery: reference values on a tiny fixed
/// instance, enumeration cross-checks, both oracle strategies, encoders,
/// generators, serialization. Each row is independent; an exception inside
/// a row fails that row only.
std::vector<VerifyRow> run_verify_battery();

/// Prints one aligned pass/fail line per row plus a summary line.
/// Returns true when every row passed.
bool run_verify(std::ostream& out);

} // namespace mwdp
