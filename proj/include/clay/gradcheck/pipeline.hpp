#pragma once

#include <any>
#include <span>
#include <string>
#include <vector>

#include "clay/gradcheck/diff_op.hpp"

namespace clay {

namespace detail {

inline void check_chain(std::span<const DiffOp> stages) {
  if (stages.empty()) throw ConfigError("a pipeline needs at least one stage");
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    if (stages[i].output_dim != stages[i + 1].input_dim) {
      throw ConfigError("stage '" + stages[i].name + "' produces " + std::to_string(stages[i].output_dim) +
                        " values but '" + stages[i + 1].name + "' takes " + std::to_string(stages[i + 1].input_dim));
    }
  }
}

struct ChainContext {
  std::vector<Vector> inputs;
  std::vector<std::any> contexts;
};

}  // namespace detail

/// The fixed composition stages.back() o ... o stages.front() as one op. Its
/// signature combines the stage signatures at their respective inputs.
inline DiffOp compose(std::vector<DiffOp> stages) {
  detail::check_chain(stages);
  DiffOp op;
  for (std::size_t i = 0; i < stages.size(); ++i) op.name += (i ? "->" : "") + stages[i].name;
  op.input_dim = stages.front().input_dim;
  op.output_dim = stages.back().output_dim;
  op.forward = [stages](const Vector& x) {
    detail::ChainContext ctx;
    Vector cur = x;
    for (const auto& s : stages) {
      ForwardResult r = s.run(cur);
      ctx.inputs.push_back(std::move(cur));
      ctx.contexts.push_back(std::move(r.context));
      cur = std::move(r.output);
    }
    return ForwardResult{std::move(cur), std::move(ctx)};
  };
  op.vjp = [stages](const Vector&, const std::any& context, const Vector& upstream) {
    const auto& ctx = std::any_cast<const detail::ChainContext&>(context);
    Vector g = upstream;
    for (std::size_t i = stages.size(); i-- > 0;) g = stages[i].pullback(ctx.inputs[i], ctx.contexts[i], g);
    return g;
  };
  bool any_signature = false;
  for (const auto& s : stages) any_signature |= static_cast<bool>(s.signature);
  if (any_signature) {
    op.signature = [stages](const Vector& x) {
      std::uint64_t h = 1469598103934665603ULL;
      Vector cur = x;
      for (const auto& s : stages) {
        if (s.signature) h = (h ^ s.signature(cur)) * 1099511628211ULL;
        cur = s.run(cur).output;
      }
      return h;
    };
  }
  return op;
}

struct PipelineGradient {
  double loss = 0.0;
  Vector gradient;
};

/// Runs the stages and the scalar loss forward, then pulls the unit cotangent
/// back through them in reverse order.
inline PipelineGradient backward_pipeline(const std::vector<DiffOp>& stages, const Vector& inputs, const DiffOp& loss) {
  if (loss.output_dim != 1) throw ConfigError("loss '" + loss.name + "' must produce a single value");
  std::vector<DiffOp> chain = stages;
  chain.push_back(loss);
  detail::check_chain(chain);
  if (inputs.size() != chain.front().input_dim) {
    throw ConfigError("pipeline input has " + std::to_string(inputs.size()) + " entries, first stage takes " +
                      std::to_string(chain.front().input_dim));
  }
  const DiffOp whole = compose(std::move(chain));
  const ForwardResult r = whole.run(inputs);
  return {r.output[0], whole.pullback(inputs, r.context, Vector::Ones(1))};
}

}  // namespace clay
