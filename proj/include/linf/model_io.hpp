#pragma once

#include "linf/graded.hpp"
#include "linf/lie_models.hpp"
#include "linf/linfty.hpp"
#include "linf/nilpotent_base.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace linf {

enum class ModelKind { lie, linfty, cdga, presented_lie };

struct ModelCaps {
    std::optional<int> weight;
    std::optional<int> degree;
    std::optional<int> length;
    std::optional<std::pair<int, int>> window;
};

/// A parsed and validated model file. Exactly one of structure/base is the
/// primary payload; presented-lie models carry both the presented algebra
/// and its L-infinity structure.
struct Model {
    ModelKind kind = ModelKind::linfty;
    Grading grading = Grading::homological;
    ModelCaps caps;
    std::optional<LInftyStructure> structure;
    std::optional<NilpotentBase> base;
    std::optional<GradedLie> presented;
    std::vector<std::string> relation_text;
    std::vector<std::pair<std::string, std::string>> differential_text;  // presented-lie only
};

/// Schema: {kind, grading, basis: [{name, degree}], ops: [{arity, inputs,
/// output: [{name, coeff}]}], differential: [{input, output}], caps:
/// {weight, degree, length, window: [lo, hi]}}; presented-lie models list
/// generators in basis and Lie words in "relations".
Model parse_model(const std::string& text);
Model load_model(const std::string& path);
std::string serialize_model(const Model& m);

std::string kind_name(ModelKind k);

}  // namespace linf
