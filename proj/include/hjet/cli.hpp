#ifndef HJET_CLI_HPP_
#define HJET_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjet/geometry.hpp"
#include "hjet/jets.hpp"

namespace hjet {

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitPrecondition = 3, kExitVerdict = 4, kExitInternal = 5 };

class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& what, std::string path, size_t line = 0, size_t column = 0)
      : std::runtime_error(what), path_(std::move(path)), line_(line), column_(column) {}
  // JSON pointer of the offending value; empty for syntax errors.
  const std::string& path() const { return path_; }
  // 1-based; 0 when unknown. For polynomial strings the column is inside
  // the string.
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  std::string path_;
  size_t line_, column_;
};

struct Problem {
  std::string name;
  size_t dim = 0;
  std::vector<OneForm> coframe;
  std::vector<VectorField> generators;
  QVector base_point;
  std::optional<PolyCurve> curve;
  Rational t0 = 0;
  std::optional<QVector> first_jet;
  std::optional<GrowthVector> growth;

  // Throws GeometryError for a rank-deficient coframe.
  Distribution distribution() const;
};

Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

// Empty when the report matches the hjet-report/1 layout, otherwise the
// first problem found.
std::string validate_report(const nlohmann::json& report);

// argv without the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hjet

#endif  // HJET_CLI_HPP_
