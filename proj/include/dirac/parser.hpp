#pragma once

#include <string>

#include "dirac/model.hpp"

namespace dirac {

/// Parses a model definition in the .lag DSL. Throws SyntaxError /
/// ValidationError.
LagrangianModel parse_model(const std::string& source);

/// Parses a standalone expression against a model's declarations (fields,
/// constants, momenta as Pi_<field>, dirac(p,q) kernels, @point suffixes).
/// Free indices are allowed.
Expr parse_expression(const std::string& source, const LagrangianModel& ctx);

/// Writes a model back to DSL text; parse(serialize(parse(s))) == parse(s).
std::string serialize_model(const LagrangianModel& m);

} // namespace dirac
