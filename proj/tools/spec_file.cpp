#include "spec_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace qlinz::cli {
namespace {

struct Entry {
  GR exact;
  Complex value;
  bool is_exact = true;
};

struct EntryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> data;
  bool exact = true;

  const Entry& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  GMatrix to_exact() const {
    GMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = at(i, j).exact;
    return m;
  }

  CMatrix to_numeric() const {
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = at(i, j).value;
    return m;
  }
};

class Reader {
 public:
  Reader(std::string source, bool require_exact)
      : source_(std::move(source)), require_exact_(require_exact) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw UsageError(source_ + ": " + where + ": " + what);
  }

  Rational real_part(const Json& j, const std::string& where, bool& is_exact, double& value) const {
    if (j.is_number_integer()) {
      const Rational r(j.dump());
      value = r.get_d();
      return r;
    }
    if (j.is_number_float()) {
      value = j.get<double>();
      if (!std::isfinite(value)) fail(where, "entry is not finite");
      if (require_exact_) {
        throw ExactnessError(source_ + ": " + where + ": floating-point entry " + j.dump() +
                             " in exact mode; write it as an integer or a \"p/q\" string");
      }
      is_exact = false;
      return rational_from_double(value);
    }
    if (j.is_string()) {
      try {
        const Rational r = parse_rational(j.get<std::string>());
        value = r.get_d();
        return r;
      } catch (const ParameterError& e) {
        fail(where, e.what());
      }
    }
    fail(where, "expected a number or a \"p/q\" string, got " + j.dump());
  }

  Entry entry(const Json& j, const std::string& where) const {
    Entry e;
    double re = 0.0, im = 0.0;
    if (j.is_array()) {
      if (j.size() != 2) fail(where, "complex entries are [re, im] pairs");
      const Rational r = real_part(j[0], where, e.is_exact, re);
      const Rational i = real_part(j[1], where, e.is_exact, im);
      e.exact = GR(r, i);
    } else {
      e.exact = GR(real_part(j, where, e.is_exact, re));
    }
    e.value = Complex(re, im);
    return e;
  }

  EntryMatrix matrix(const Json& spec, const std::string& field, std::optional<std::size_t> rows,
                     std::optional<std::size_t> cols) const {
    if (!spec.contains(field)) fail("field '" + field + "'", "missing");
    const Json& j = spec.at(field);
    if (!j.is_array()) fail("field '" + field + "'", "expected an array of rows");
    EntryMatrix m;
    m.rows = j.size();
    m.cols = m.rows == 0 ? cols.value_or(0) : 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const Json& row = j[i];
      const std::string where_row = "field '" + field + "' row " + std::to_string(i);
      if (!row.is_array()) fail(where_row, "expected an array of entries");
      if (i == 0) m.cols = row.size();
      if (row.size() != m.cols) fail(where_row, "ragged matrix: expected " + std::to_string(m.cols) + " entries");
      for (std::size_t k = 0; k < row.size(); ++k) {
        Entry e = entry(row[k], where_row + " col " + std::to_string(k));
        m.exact = m.exact && e.is_exact;
        m.data.push_back(std::move(e));
      }
    }
    if (rows && m.rows != *rows) {
      fail("field '" + field + "'", "expected " + std::to_string(*rows) + " rows, got " + std::to_string(m.rows));
    }
    if (cols && m.cols != *cols) {
      fail("field '" + field + "'",
           "expected " + std::to_string(*cols) + " columns, got " + std::to_string(m.cols));
    }
    return m;
  }

  std::optional<std::size_t> size_field(const Json& spec, const std::string& field) const {
    if (!spec.contains(field)) return std::nullopt;
    const Json& j = spec.at(field);
    if (!j.is_number_unsigned()) fail("field '" + field + "'", "expected a nonnegative integer");
    return j.get<std::size_t>();
  }

  Entry scalar(const Json& spec, const std::string& field) const {
    return entry(spec.at(field), "field '" + field + "'");
  }

  Rational coupling_scale(const Json& spec, bool& exact, double& value) const {
    value = 1.0;
    if (!spec.contains("coupling_scale")) return Rational(1);
    const Entry e = scalar(spec, "coupling_scale");
    if (!e.exact.is_real() || sgn(e.exact.re()) <= 0) {
      fail("field 'coupling_scale'", "must be a positive real number");
    }
    exact = exact && e.is_exact;
    value = e.value.real();
    return e.exact.re();
  }

 private:
  std::string source_;
  bool require_exact_;
};

SpecKind parse_kind(const Reader& rd, const Json& spec) {
  if (!spec.contains("representation") || !spec.at("representation").is_string()) {
    rd.fail("field 'representation'", "missing; expected params, annihilation, quadrature or quad_plant");
  }
  const std::string k = spec.at("representation").get<std::string>();
  if (k == "params") return SpecKind::params;
  if (k == "annihilation") return SpecKind::annihilation;
  if (k == "quadrature") return SpecKind::quadrature;
  if (k == "quad_plant") return SpecKind::quad_plant;
  rd.fail("field 'representation'", "unknown representation '" + k + "'");
}

void parse_params(const Reader& rd, const Json& spec, SystemSpec& out) {
  const EntryMatrix om = rd.matrix(spec, "omega_minus", rd.size_field(spec, "n"), rd.size_field(spec, "n"));
  const std::size_t n = om.rows;
  const EntryMatrix op = rd.matrix(spec, "omega_plus", n, n);
  const EntryMatrix cm = rd.matrix(spec, "c_minus", rd.size_field(spec, "m"), n);
  const std::size_t m = cm.rows;
  const EntryMatrix cp = rd.matrix(spec, "c_plus", m, n);
  bool exact = om.exact && op.exact && cm.exact && cp.exact;
  double scale_value = 1.0;
  const Rational scale = rd.coupling_scale(spec, exact, scale_value);
  out.exact = exact;
  if (exact) {
    ExactParams e;
    e.n = n;
    e.m = m;
    e.omega_minus = om.to_exact();
    e.omega_plus = op.to_exact();
    e.c_minus = cm.to_exact();
    e.c_plus = cp.to_exact();
    e.coupling_scale = scale;
    out.system = build_state_space(QSystemParams::from_exact(std::move(e)));
  } else {
    const double root = std::sqrt(scale_value);
    out.system = build_state_space(QSystemParams::numeric(om.to_numeric(), op.to_numeric(),
                                                          root * cm.to_numeric(), root * cp.to_numeric()));
  }
}

void parse_matrices(const Reader& rd, const Json& spec, SystemSpec& out) {
  const EntryMatrix a = rd.matrix(spec, "A", std::nullopt, std::nullopt);
  if (a.rows != a.cols) rd.fail("field 'A'", "must be square");
  const EntryMatrix b = rd.matrix(spec, "B", a.rows, std::nullopt);
  const EntryMatrix c = rd.matrix(spec, "C", std::nullopt, a.rows);
  const EntryMatrix d = rd.matrix(spec, "D", c.rows, b.cols);
  const Representation rep =
      out.kind == SpecKind::quadrature ? Representation::quadrature : Representation::annihilation;
  bool exact = a.exact && b.exact && c.exact && d.exact;
  double scale_value = 1.0;
  const Rational scale = rd.coupling_scale(spec, exact, scale_value);
  out.exact = exact;
  if (exact) {
    ExactRealization r;
    r.a = a.to_exact();
    r.b = b.to_exact();
    r.c = c.to_exact();
    r.d = d.to_exact();
    r.coupling_scale = scale;
    out.system = StateSpace::from_exact(std::move(r), rep);
  } else {
    const double root = std::sqrt(scale_value);
    out.system = StateSpace(a.to_numeric(), root * b.to_numeric(), root * c.to_numeric(), d.to_numeric(), rep);
  }
}

void parse_quad_plant(const Reader& rd, const Json& spec, SystemSpec& out) {
  if (!spec.contains("omega_plus")) rd.fail("field 'omega_plus'", "missing");
  const Entry omega = rd.scalar(spec, "omega_plus");
  bool exact = omega.is_exact;
  auto take = [&](const char* field) {
    const Entry e = rd.scalar(spec, field);
    exact = exact && e.is_exact;
    return e.exact;
  };
  if (spec.contains("c_q") || spec.contains("c_p")) {
    out.plant = QuadPlantParams{omega.exact, take("c_q"), take("c_p")};
  } else if (spec.contains("c_minus") || spec.contains("c_plus")) {
    out.plant = QuadPlantParams::from_couplings(omega.exact, take("c_minus"), take("c_plus"));
  } else if (spec.contains("coupling")) {
    out.plant = QuadPlantParams::from_product(omega.exact, take("coupling"));
  } else {
    rd.fail("quad_plant", "give c_q and c_p, c_minus and c_plus, or coupling");
  }
  out.plant->validate();
  out.exact = exact;
}

}  // namespace

std::string to_string(SpecKind k) {
  switch (k) {
    case SpecKind::params: return "params";
    case SpecKind::annihilation: return "annihilation";
    case SpecKind::quadrature: return "quadrature";
    case SpecKind::quad_plant: return "quad_plant";
  }
  return "params";
}

SystemSpec parse_spec(const std::string& text, const std::string& source, bool require_exact) {
  SystemSpec out;
  out.source = source;
  try {
    out.echo = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw UsageError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": invalid JSON (" + e.what() + ")");
  }
  if (!out.echo.is_object()) throw UsageError(source + ": a spec file holds one JSON object");
  const Reader rd(source, require_exact);
  out.kind = parse_kind(rd, out.echo);
  out.name = out.echo.value("name", std::string());
  try {
    switch (out.kind) {
      case SpecKind::params: parse_params(rd, out.echo, out); break;
      case SpecKind::annihilation:
      case SpecKind::quadrature: parse_matrices(rd, out.echo, out); break;
      case SpecKind::quad_plant: parse_quad_plant(rd, out.echo, out); break;
    }
  } catch (const Json::exception& e) {
    throw UsageError(source + ": " + e.what());
  }
  return out;
}

SystemSpec load_spec(const std::string& path, bool require_exact) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path, require_exact);
}

}  // namespace qlinz::cli
