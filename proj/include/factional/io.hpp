#pragma once

// File formats: priors and epistemic models as JSON, degree-sequence files,
// edge lists, and the CSV/JSON table writer shared by the CLI.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factional/algorithms.hpp"
#include "factional/epistemic.hpp"
#include "factional/rational.hpp"
#include "factional/revolt_model.hpp"

namespace factional {

using Json = nlohmann::ordered_json;

// A rational given as a JSON string ("2/5", "0.4") or number. `key` names the
// field in error messages.
Rational RationalFromJson(const Json& value, const std::string& key);

// {"p": "2/5", "mu": "1/2", "states": {"A": {"prob": "1/2", "types":
// {"alpha": "0", "chi": "4/5", "nu": "1/5"}}, ...}}; states keep file order.
// Missing type entries default to 0.
Prior PriorFromJson(const Json& j);
Json PriorToJson(const Prior& prior);
// `source` is either a path or inline JSON text starting with '{'.
Prior LoadPrior(const std::string& source);

// {"outcomes": ["1", ...], "prob": ["1/6", ...], "agents": {"1": [["1","2"],
// ["3","4","5","6"]], ...}}; a missing "prob" means uniform. "prob" may also
// be an object keyed by outcome, and "partitions" may replace "agents".
epistemic::EpistemicModel ModelFromJson(const Json& j);
epistemic::EpistemicModel LoadModel(const std::string& source);

// One degree per line or "count x degree"; '#' starts a comment. Throws
// Error{kParse} with the line number on malformed input and on an empty file.
DegreeSequence ParseDegreeSequence(std::istream& in, const std::string& name = "<input>");
DegreeSequence LoadDegreeSequence(const std::string& path);
void WriteDegreeSequence(std::ostream& out, const DegreeSequence& seq);

// "u v" per line, 0-indexed, '#' comments; an optional "n <count>" line fixes
// the vertex count (otherwise max id + 1).
ConcreteGraph ParseEdgeList(std::istream& in, const std::string& name = "<input>");
ConcreteGraph LoadEdgeList(const std::string& path);
void WriteEdgeList(std::ostream& out, const ConcreteGraph& graph);

Json ReadJsonFile(const std::string& path);

// A rectangular table rendered as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void Add(std::vector<std::string> row);
};

enum class Format { kCsv, kJson };
Format ParseFormat(const std::string& name);

std::string CsvEscape(const std::string& field);
void WriteCsv(std::ostream& out, const Table& table);
Json TableToJson(const Table& table);

}  // namespace factional
