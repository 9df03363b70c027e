#include "report.hpp"

namespace qlinz::cli {
namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

// Arrays nesting only scalars (matrices, pairs) print on one line.
bool inline_array(const Json& j) {
  for (const auto& v : j) {
    if (v.is_object() || (v.is_array() && !inline_array(v))) return false;
  }
  return true;
}

std::string inline_text(const Json& j) {
  std::string s = "[";
  bool first = true;
  for (const auto& v : j) {
    if (!first) s += ", ";
    s += v.is_array() ? inline_text(v) : scalar_text(v);
    first = false;
  }
  return s + "]";
}

void render_text(std::ostream& out, const Json& j, int indent);

void render_value(std::ostream& out, const std::string& prefix, const Json& v, int indent) {
  if (is_scalar(v)) {
    out << prefix << ' ' << scalar_text(v) << '\n';
  } else if (v.is_array() && inline_array(v)) {
    out << prefix << ' ' << inline_text(v) << '\n';
  } else if (v.empty()) {
    out << prefix << (v.is_array() ? " []" : " {}") << '\n';
  } else {
    out << prefix << '\n';
    render_text(out, v, indent + 2);
  }
}

void render_text(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) render_value(out, pad + key + ':', v, indent);
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() && !v.empty()) {
        // First key shares the dash line.
        bool first = true;
        for (const auto& [key, item] : v.items()) {
          render_value(out, (first ? pad + "- " : pad + "  ") + key + ':', item, indent + 2);
          first = false;
        }
      } else {
        render_value(out, pad + "-", v, indent);
      }
    }
  } else {
    out << pad << scalar_text(j) << '\n';
  }
}

}  // namespace

Json complex_json(Complex z) { return format_complex(z, 17); }

Json gr_json(const GR& g) { return g.str(); }

Json spectrum_json(const Spectrum& s) {
  Json j;
  j["method"] = to_string(s.method());
  j["count"] = s.size();
  Json values = Json::array();
  for (const auto& v : s.values()) {
    Json e;
    e["value"] = complex_json(v.value);
    e["multiplicity"] = v.multiplicity;
    if (v.exact) e["exact"] = v.exact_text;
    values.push_back(std::move(e));
  }
  j["values"] = std::move(values);
  if (!s.flags().empty()) j["flags"] = s.flags();
  return j;
}

void render(std::ostream& out, const Json& report, Format format) {
  if (format == Format::json) {
    out << report.dump(2) << '\n';
  } else {
    render_text(out, report, 0);
  }
}

}  // namespace qlinz::cli
