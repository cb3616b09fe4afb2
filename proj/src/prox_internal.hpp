#pragma once

#include "lietrans/solver.hpp"

namespace lietrans::detail {

/// prox_trace_norm that also reports the trace norm of its output.
Matrix prox_trace_norm(const Matrix& m, double tau, const SvtMode& mode, Index rank_hint,
                       double& out_norm);

}  // namespace lietrans::detail
