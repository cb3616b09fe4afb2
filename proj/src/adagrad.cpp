#include "lietrans/error.hpp"
#include "lietrans/solver.hpp"

#include <cmath>

namespace lietrans {

AdagradState::AdagradState(Index rows, Index cols, double step_, double delta_)
    : accum(Matrix::Zero(rows, cols)), step(step_), delta(delta_) {}

double AdagradState::effective_step() const {
  const double mean = accum.size() > 0 ? accum.mean() : 0.0;
  return step / std::sqrt(mean + delta);
}

Matrix adagrad_step(AdagradState& state, const Matrix& gradient) {
  if (gradient.rows() != state.accum.rows() || gradient.cols() != state.accum.cols()) {
    throw InvalidInput("adagrad_step: gradient shape does not match state");
  }
  state.accum.array() += gradient.array().square();
  Matrix update = -state.step * gradient.array() / (state.accum.array() + state.delta).sqrt();
  // 0/√δ with δ = 0 would give NaN; untouched coordinates do not move.
  for (Index i = 0; i < update.size(); ++i) {
    if (gradient.data()[i] == 0.0) update.data()[i] = 0.0;
  }
  return update;
}

}  // namespace lietrans
