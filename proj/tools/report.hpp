#pragma once

// Report assembly and rendering. Reports are ordered JSON objects; the text
// format is an indented key: value view of the same object.

#include <ostream>
#include <string>

#include "json.hpp"
#include "qlinz/exact.hpp"
#include "qlinz/poly.hpp"
#include "qlinz/spectrum.hpp"

namespace qlinz::cli {

using Json = nlohmann::ordered_json;

enum class Format { text, json };

/// "a+bi" with 17 significant digits.
Json complex_json(Complex z);
Json spectrum_json(const Spectrum& s);
Json gr_json(const GR& g);

/// Writes the report followed by a newline.
void render(std::ostream& out, const Json& report, Format format);

}  // namespace qlinz::cli
