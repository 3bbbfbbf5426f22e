#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lavanet/sparse.hpp"

namespace lavanet {

// Learning-rule language, e.g. "2^-2*x1*y0 - 2^-2*y1*x0 + 2^-4*x1*y1*y0 - 2^-3*y0*w*w".
//
//   rule   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := INT '^' SIGNED_INT | DECIMAL | VARIABLE
//
// x0/y0 are pre/post spike indicators for the current learning epoch, x1 is
// the presynaptic trace, y1/y2 are postsynaptic traces, w the weight.

enum class Variable : std::uint8_t { kX0, kX1, kY0, kY1, kY2, kW };

std::string_view variableName(Variable v);

struct Term {
  int sign = 1;  // +1 or -1
  double coefficient = 1.0;
  std::vector<Variable> factors;

  bool operator==(const Term&) const = default;
};

struct RuleAst {
  std::vector<Term> terms;

  bool operator==(const RuleAst&) const = default;
};

/// Throws ParseError on malformed text and UnknownVariable for hardware
/// variables this simulator does not model (delays, tags, epoch u_k, rewards).
RuleAst parseRule(std::string_view text);

/// Canonical text; parseRule(formatRule(ast)) == ast.
std::string formatRule(const RuleAst& ast);

struct TraceConfig {
  double tauPre = 20.0;    // x1
  double tauPost = 20.0;   // y1
  double tauPost2 = 40.0;  // y2
  double impulse = 4.0;
};

/// Per-neuron traces for the plastic population. Every plastic neuron is
/// both presynaptic and postsynaptic, so x and y traces share indices.
struct TraceState {
  std::vector<double> x1, y1, y2;
  std::vector<std::uint8_t> x0, y0;

  TraceState() = default;
  explicit TraceState(std::size_t neurons);

  std::size_t size() const { return x1.size(); }
  void reset();
  void clearEpoch();
};

/// Decays and bumps the traces of neurons [offset, offset + spikes.size())
/// with this step's spikes. Neurons outside the trace state are ignored.
///   x1 <- x1 (1 - 1/tauPre) + impulse [spike]
/// and likewise y1, y2 with their taus; x0/y0 accumulate epoch indicators.
void updateTraces(TraceState& state, std::span<const std::uint8_t> spikes, std::size_t offset,
                  const TraceConfig& config);

/// Rule compiled for per-synapse evaluation.
class CompiledRule {
 public:
  explicit CompiledRule(const RuleAst& ast);

  /// Weight change for synapse post <- pre with current weight w.
  double delta(const TraceState& traces, std::size_t pre, std::size_t post, double w) const;

 private:
  struct CompiledTerm {
    double scale;
    std::vector<Variable> factors;
  };
  std::vector<CompiledTerm> terms_;
};

/// Applies the rule to every stored synapse of `chunk` whose global target
/// and source both lie below `plasticLimit`; rowOffset/colOffset map chunk
/// indices to global ones. Weights are clamped to [0, weightMax]; the
/// sparsity pattern is left untouched.
void applyRule(const CompiledRule& rule, SparseMatrix& chunk, std::size_t rowOffset,
               std::size_t colOffset, const TraceState& traces, std::size_t plasticLimit,
               double weightMax);

}  // namespace lavanet
