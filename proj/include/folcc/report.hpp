#pragma once

// JSON views of the library's result types. Keys are emitted in a fixed order
// so reports are byte-for-byte reproducible.

#include <string>
#include <vector>

#include "json.hpp"

#include "folcc/dynamics.hpp"
#include "folcc/frames.hpp"
#include "folcc/gf.hpp"

namespace folcc::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "folcc-report/1";

Json cochain(const gf::ExteriorCochain& c);
Json cohomology(const std::vector<gf::CohomologyGroup>& groups);
Json identities(const std::vector<IdentityResult>& ids);
Json connection(const ConnectionReport& r);
Json rotation(const RotationEstimate& r);
Json diophantine(const DiophantineReport& r);
Json fixed_points(const std::vector<FixedPoint>& fps);
Json reeb(const ReebReport& r);
Json flow(const FlowReport& r);
Json q_polynomial(const QPolynomial& q);

/// Flat CSV of an array of flat objects (header from the first row's keys).
std::string csv(const Json& rows);

}  // namespace folcc::report
