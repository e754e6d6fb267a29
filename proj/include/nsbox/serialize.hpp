#pragma once

#include <json.hpp>
#include <string>

#include "nsbox/closure.hpp"
#include "nsbox/dynamics.hpp"

namespace nsbox {

using nlohmann::json;

// Boxes persist as {"p": [16 x "num/den"]} in (x,y,a,b) row-major order.
// Exact strings only, never floats.
json box_to_json(const Box& b);
Box box_from_json(const json& j);

// CSV row form for bulk emission: 16 comma-separated "num/den" entries.
std::string box_csv_row(const Box& b);

// Truth tables as {"arity": n, "words": [bitmask words]}; wirings carry both
// parties' orders and tables and are stable certificate components.
json wiring_to_json(const Wiring& w);
Wiring wiring_from_json(const json& j);

json functional_to_json(const LinearFunctional& f);
LinearFunctional functional_from_json(const json& j);

// Membership certificates: {"inside": true, "weights": [...]} or
// {"inside": false, "separator": {...}}.
json certificate_to_json(const MembershipCertificate& c);
MembershipCertificate certificate_from_json(const json& j);

json polytope_to_json(const VPolytope& p);
VPolytope polytope_from_json(const json& j);

json escape_to_json(const EscapeCertificate& c);
json hull_report_to_json(const HullIterationReport& r);
json search_report_to_json(const SearchReport& r);
json edge_trajectory_to_json(const EdgeTrajectory& t);
json uffink_scan_to_json(const UffinkScan& s);

// Region map CSV: "eps,gamma,first_escape_iteration" per in-simplex node
// (escape 0 = never escaped within the iteration budget).
std::string uffink_scan_csv(const UffinkScan& s);

// Vector field CSV: "u,v,du,dv,residual", 17 significant digits.
std::string vector_field_csv(const std::vector<FieldNode>& nodes);

std::string trajectory_csv(const Trajectory& t);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace nsbox
