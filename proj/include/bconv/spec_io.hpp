#pragma once

// JSON form of a ConvolutionSpec. Parsing rejects unknown fields and reports
// the offending path through SpecValidationError::field().

#include <string>

#include "bconv/convolution_spec.hpp"
#include "json.hpp"

namespace bconv {

using Json = nlohmann::ordered_json;

ConvolutionSpec spec_from_json(const Json& doc);
Json spec_to_json(const ConvolutionSpec& spec);

// Reads a spec file, or a built-in spec given as "catalog:<name>".
ConvolutionSpec load_spec(const std::string& source);

// Built-in names: cantor, uniform, two_term, ratio_excess, squared_exponent, discrete.
ConvolutionSpec catalog_spec(const std::string& name);

}  // namespace bconv
