#include <algorithm>

#include "lavanet/errors.hpp"
#include "lavanet/plasticity.hpp"

namespace lavanet {

TraceState::TraceState(std::size_t neurons)
    : x1(neurons, 0.0), y1(neurons, 0.0), y2(neurons, 0.0), x0(neurons, 0), y0(neurons, 0) {}

void TraceState::reset() {
  std::fill(x1.begin(), x1.end(), 0.0);
  std::fill(y1.begin(), y1.end(), 0.0);
  std::fill(y2.begin(), y2.end(), 0.0);
  clearEpoch();
}

void TraceState::clearEpoch() {
  std::fill(x0.begin(), x0.end(), 0);
  std::fill(y0.begin(), y0.end(), 0);
}

void updateTraces(TraceState& state, std::span<const std::uint8_t> spikes, std::size_t offset,
                  const TraceConfig& config) {
  const double preDecay = 1.0 - 1.0 / config.tauPre;
  const double postDecay = 1.0 - 1.0 / config.tauPost;
  const double post2Decay = 1.0 - 1.0 / config.tauPost2;
  const std::size_t end = std::min(state.size(), offset + spikes.size());
  for (std::size_t i = offset; i < end; ++i) {
    const bool spiked = spikes[i - offset] != 0;
    const double bump = spiked ? config.impulse : 0.0;
    state.x1[i] = state.x1[i] * preDecay + bump;
    state.y1[i] = state.y1[i] * postDecay + bump;
    state.y2[i] = state.y2[i] * post2Decay + bump;
    if (spiked) {
      state.x0[i] = 1;
      state.y0[i] = 1;
    }
  }
}

CompiledRule::CompiledRule(const RuleAst& ast) {
  for (const Term& t : ast.terms) {
    for (Variable v : t.factors) {
      if (static_cast<int>(v) > static_cast<int>(Variable::kW)) {
        throw UnknownVariable("unsupported learning-rule variable code " +
                              std::to_string(static_cast<int>(v)));
      }
    }
    terms_.push_back({t.sign * t.coefficient, t.factors});
  }
}

double CompiledRule::delta(const TraceState& traces, std::size_t pre, std::size_t post,
                           double w) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    double product = term.scale;
    for (Variable v : term.factors) {
      switch (v) {
        case Variable::kX0: product *= traces.x0[pre]; break;
        case Variable::kX1: product *= traces.x1[pre]; break;
        case Variable::kY0: product *= traces.y0[post]; break;
        case Variable::kY1: product *= traces.y1[post]; break;
        case Variable::kY2: product *= traces.y2[post]; break;
        case Variable::kW: product *= w; break;
      }
    }
    sum += product;
  }
  return sum;
}

void applyRule(const CompiledRule& rule, SparseMatrix& chunk, std::size_t rowOffset,
               std::size_t colOffset, const TraceState& traces, std::size_t plasticLimit,
               double weightMax) {
  if (rowOffset >= plasticLimit || colOffset >= plasticLimit) return;
  const auto rowPointers = chunk.rowPointers();
  const auto columns = chunk.columnIndices();
  auto values = chunk.mutableValues();
  const std::size_t rowEnd = std::min(chunk.rows(), plasticLimit - rowOffset);
  for (std::size_t r = 0; r < rowEnd; ++r) {
    const std::size_t post = rowOffset + r;
    for (Index k = rowPointers[r]; k < rowPointers[r + 1]; ++k) {
      const std::size_t pre = colOffset + columns[k];
      if (pre >= plasticLimit) break;  // columns are sorted
      const double w = values[k];
      values[k] = std::clamp(w + rule.delta(traces, pre, post, w), 0.0, weightMax);
    }
  }
}

}  // namespace lavanet
