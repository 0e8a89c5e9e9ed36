#pragma once

// Built-in polynomial models and the JSON model format
//
//   {"name": "...", "n": 3, "m": 2, "s": 2,
//    "fields": [ [ [ {"exps": [0,1,0], "coeff": "-1/2"}, ... ],   // f_1, component 1
//                  ... n components ... ],
//                ... m fields ... ]}
//
// Each component is a list of terms; an empty list is the zero polynomial.

#include "liebox/vfield.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liebox {

class UnknownModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Model {
    std::string name;
    std::string description;
    int n = 0;
    int m = 0;
    int s = 0;
    std::vector<PolyMap> fields;
};

/// heisenberg, grushin, engel, martinet, flat2, flat3.
std::vector<std::string> builtin_model_names();
Model builtin_model(std::string_view name);

Model parse_model_json(const std::string& text);
Model load_model_file(const std::filesystem::path& path);
std::string model_to_json(const Model& model);

/// A built-in name, or else a path to a JSON model file.
Model resolve_model(const std::string& name_or_path);

VectorFieldSystem make_system(const Model& model, const FlowOptions& options = {});

}  // namespace liebox
