#pragma once

#include <stdexcept>
#include <string>

#include "abcat/addfun.hpp"
#include "abcat/bitmatrix.hpp"
#include "abcat/matcat.hpp"
#include "abcat/report.hpp"

namespace abcat {

struct ShortExact;

/// Malformed or ill-typed JSON input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix:   {"rows": n, "cols": m, "entries": [[0|1, ...], ...]}
// Morphism: {"dom": n, "cod": m, "mat": <matrix>}
// Functor:  {"k": n, "variance": "co" | "contra"}
// Short exact sequence: {"mono": <morphism>, "epi": <morphism>}

json to_json(const BitMatrix& m);
json to_json(const GMor& f);
json to_json(const AddFunctor& F);
json to_json(const ShortExact& ses);

/// All parsers throw InputError with a message naming the offending field.
BitMatrix matrix_from_json(const json& j);
GMor morphism_from_json(const json& j);
AddFunctor functor_from_json(const json& j);
ShortExact short_exact_from_json(const json& j);

/// Parses text, turning syntax errors into InputError.
json parse_json_text(const std::string& text);
/// Reads and parses a file; a missing file is an InputError.
json read_json_file(const std::string& path);

}  // namespace abcat
