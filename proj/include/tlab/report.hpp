#pragma once

#include <string>
#include <vector>

#include "tlab/bounds.hpp"

namespace tlab {

/// "%.17g", with "inf", "-inf" and "nan" spelled out.
std::string format_double(double x);

/// Fixed CSV columns: statement_id,space,n,K,p,lhs,rhs,slack_ratio,pass.
std::string reports_to_csv(const std::vector<BoundReport>& reports);

/// Full reports, parameters included; non-finite numbers become strings.
std::string reports_to_json(const std::vector<BoundReport>& reports);

/// Two-column numeric table with a header line.
std::string curve_to_csv(const std::string& x_name, const std::string& y_name, const std::vector<double>& x,
                         const std::vector<double>& y);

}  // namespace tlab
