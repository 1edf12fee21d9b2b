#include "abcat/json_io.hpp"

#include <fstream>
#include <sstream>

#include "abcat/regsite.hpp"

namespace abcat {

json to_json(const BitMatrix& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c) ? 1 : 0);
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

json to_json(const GMor& f) { return {{"dom", f.dom().n}, {"cod", f.cod().n}, {"mat", to_json(f.mat())}}; }

json to_json(const AddFunctor& F) { return {{"k", F.k}, {"variance", to_string(F.variance)}}; }

json to_json(const ShortExact& ses) { return {{"mono", to_json(ses.mono)}, {"epi", to_json(ses.epi)}}; }

namespace {

const json& field(const json& j, const char* name, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw InputError(std::string(what) + ": missing field \"" + name + "\"");
  return *it;
}

std::size_t natural(const json& j, const char* name, const char* what) {
  const json& v = field(j, name, what);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw InputError(std::string(what) + ": field \"" + name + "\" must be a natural number");
  }
  return v.get<std::size_t>();
}

}  // namespace

BitMatrix matrix_from_json(const json& j) {
  const std::size_t rows = natural(j, "rows", "matrix");
  const std::size_t cols = natural(j, "cols", "matrix");
  const json& entries = field(j, "entries", "matrix");
  if (!entries.is_array() || entries.size() != rows) {
    throw InputError("matrix: \"entries\" must be an array of " + std::to_string(rows) + " rows");
  }
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = entries[r];
    if (!row.is_array() || row.size() != cols) {
      throw InputError("matrix: row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& v = row[c];
      if (!v.is_number_integer() || (v.get<long long>() != 0 && v.get<long long>() != 1)) {
        throw InputError("matrix: entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be 0 or 1");
      }
      m.set(r, c, v.get<long long>() == 1);
    }
  }
  return m;
}

GMor morphism_from_json(const json& j) {
  const std::size_t dom = natural(j, "dom", "morphism");
  const std::size_t cod = natural(j, "cod", "morphism");
  BitMatrix m = matrix_from_json(field(j, "mat", "morphism"));
  if (m.rows() != cod || m.cols() != dom) {
    throw InputError("morphism: matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " does not match cod x dom = " + std::to_string(cod) + "x" + std::to_string(dom));
  }
  return {GObj{dom}, GObj{cod}, std::move(m)};
}

AddFunctor functor_from_json(const json& j) {
  const std::size_t k = natural(j, "k", "functor");
  const json& v = field(j, "variance", "functor");
  if (v == "co") return AddFunctor::covariant(k);
  if (v == "contra") return AddFunctor::contravariant(k);
  throw InputError("functor: \"variance\" must be \"co\" or \"contra\"");
}

ShortExact short_exact_from_json(const json& j) {
  return {morphism_from_json(field(j, "mono", "short exact sequence")),
          morphism_from_json(field(j, "epi", "short exact sequence"))};
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

}  // namespace abcat
