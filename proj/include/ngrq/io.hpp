#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ngrq/gridfield.hpp"
#include "ngrq/nehari.hpp"

namespace ngrq {

using Json = nlohmann::ordered_json;

// 17 significant digits ("%.17g"); nan, inf, -inf spelled out.
std::string format_double(double x);

// JSON text with every floating-point number printed by format_double
// (non-finite numbers become null). Key order is insertion order.
std::string to_json_text(const Json& j, int indent = 2);

// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Header index,x,value (interval), index,x,y,value (rectangle) or index,r,value (radial).
std::string function_csv(const DiscreteFunction& u);
// Header r,value, including the r = R boundary node.
std::string radial_profile_csv(const DiscreteFunction& u);
// Header lambda,mu,energy,norm_gamma,residual,admissible,phi2.
std::string branch_csv(const std::vector<BranchRow>& rows);

struct FiberSample {
    double t, phi, dphi, ddphi;
};
// Header t,phi,dphi,ddphi.
std::string fiber_csv(const std::vector<FiberSample>& rows);

}  // namespace ngrq
