#pragma once

#include <string>

#include <json.hpp>

#include "flatfront/caustic.hpp"
#include "flatfront/config.hpp"
#include "flatfront/cycloid.hpp"
#include "flatfront/end.hpp"
#include "flatfront/flux.hpp"
#include "flatfront/slice.hpp"

namespace flatfront {

using Json = nlohmann::json;  // std::map objects: keys come out sorted

/// Non-finite reals become the strings "inf", "-inf", "nan".
Json real_json(double x);
/// [re, im]
Json complex_json(cplx z);
Json rational_json(const Rational& q);
Json order_json(const Order& o);
Json point_json(const ExpansionPoint& p);
Json boundary_json(const BoundaryPoint& b);
Json matrix_json(const Mat2& m);

Json end_report_json(const EndReport& r);
Json profile_json(const AsymptoticProfile& a);
Json flux_report_json(const FluxReport& f);
Json balancing_json(const BalancingResult& b);
Json caustic_json(const CausticData& c);
Json descriptor_json(const CycloidDescriptor& d);
Json ode_check_json(const CycloidOdeCheck& c);
Json pitch_json(const PitchEstimate& p);
Json profile_report_json(const ProfileReport& p);

/// Two-space indented, trailing newline.
std::string dump(const Json& j);

}  // namespace flatfront
