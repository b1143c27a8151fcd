#include "factional/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "factional/error.hpp"

namespace factional {

namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string StripComment(const std::string& line) { return Trim(line.substr(0, line.find('#'))); }

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kParse, "cannot open '" + path + "'");
  return in;
}

long ParseLong(const std::string& token, const std::string& where) {
  if (token.empty()) Fail(ErrorKind::kParse, where + ": expected an integer");
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    Fail(ErrorKind::kParse, where + ": '" + token + "' is not an integer");
  }
  if (used != token.size()) Fail(ErrorKind::kParse, where + ": '" + token + "' is not an integer");
  return value;
}

const Json& Require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) Fail(ErrorKind::kParse, where + ": missing key '" + key + "'");
  return j.at(key);
}

}  // namespace

Rational RationalFromJson(const Json& value, const std::string& key) {
  try {
    if (value.is_string()) return ParseRational(value.get<std::string>());
    if (value.is_number_integer()) return ParseRational(value.dump());
    if (value.is_number_float()) return ParseRational(value.dump());
  } catch (const Error& e) {
    Fail(ErrorKind::kParse, key + ": " + e.what());
  }
  Fail(ErrorKind::kParse, key + ": expected a rational, got " + value.dump());
}

Prior PriorFromJson(const Json& j) {
  if (!j.is_object()) Fail(ErrorKind::kParse, "prior: expected a JSON object");
  const Rational p = RationalFromJson(Require(j, "p", "prior"), "prior.p");
  const Rational mu = RationalFromJson(Require(j, "mu", "prior"), "prior.mu");
  const Json& states = Require(j, "states", "prior");
  if (!states.is_object()) Fail(ErrorKind::kParse, "prior.states: expected an object keyed by state id");
  std::vector<StateSpec> specs;
  for (const auto& [id, body] : states.items()) {
    const std::string where = "prior.states." + id;
    const Rational prob = RationalFromJson(Require(body, "prob", where), where + ".prob");
    const Json& types = Require(body, "types", where);
    if (!types.is_object()) Fail(ErrorKind::kParse, where + ".types: expected an object");
    std::array<Rational, kNumTypes> masses{};
    for (const auto& [name, value] : types.items()) {
      AgentType t;
      try {
        t = ParseType(name);
      } catch (const Error&) {
        Fail(ErrorKind::kParse, where + ".types: unknown type '" + name + "' (expected alpha, nu or chi)");
      }
      masses[Index(t)] = RationalFromJson(value, where + ".types." + name);
    }
    specs.push_back(StateSpec{id, prob, TypeDistribution(masses[0], masses[1], masses[2])});
  }
  try {
    return Prior(p, mu, std::move(specs));
  } catch (const Error& e) {
    Fail(ErrorKind::kParse, std::string("prior: ") + e.what());
  }
}

Json PriorToJson(const Prior& prior) {
  Json j;
  j["p"] = FormatRational(prior.p());
  j["mu"] = FormatRational(prior.mu());
  Json states = Json::object();
  for (const auto& s : prior.states()) {
    Json types;
    for (AgentType t : kAllTypes) types[TypeName(t)] = FormatRational(s.types[t]);
    states[s.id] = Json{{"prob", FormatRational(s.prob)}, {"types", types}};
  }
  j["states"] = states;
  return j;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in = OpenInput(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    Fail(ErrorKind::kParse, path + ": " + e.what());
  }
}

namespace {

Json JsonFromSource(const std::string& source) {
  const std::string trimmed = Trim(source);
  if (!trimmed.empty() && trimmed.front() == '{') {
    try {
      return Json::parse(trimmed);
    } catch (const Json::parse_error& e) {
      Fail(ErrorKind::kParse, std::string("inline JSON: ") + e.what());
    }
  }
  return ReadJsonFile(source);
}

}  // namespace

Prior LoadPrior(const std::string& source) { return PriorFromJson(JsonFromSource(source)); }

epistemic::EpistemicModel ModelFromJson(const Json& j) {
  using namespace epistemic;
  const Json& outcomes_json = Require(j, "outcomes", "model");
  if (!outcomes_json.is_array() || outcomes_json.empty()) {
    Fail(ErrorKind::kParse, "model.outcomes: expected a nonempty array");
  }
  std::vector<std::string> outcomes;
  for (const auto& o : outcomes_json) outcomes.push_back(o.is_string() ? o.get<std::string>() : o.dump());
  std::vector<Rational> prob;
  if (j.contains("prob")) {
    const Json& pj = j.at("prob");
    if (pj.is_object()) {
      // Map form: outcome label -> probability.
      if (pj.size() != outcomes.size()) Fail(ErrorKind::kParse, "model.prob: expected one probability per outcome");
      for (const auto& o : outcomes) {
        if (!pj.contains(o)) Fail(ErrorKind::kParse, "model.prob: missing outcome '" + o + "'");
        prob.push_back(RationalFromJson(pj.at(o), "model.prob." + o));
      }
    } else {
      if (!pj.is_array() || pj.size() != outcomes.size()) {
        Fail(ErrorKind::kParse, "model.prob: expected one probability per outcome");
      }
      for (std::size_t i = 0; i < pj.size(); ++i) prob.push_back(RationalFromJson(pj[i], "model.prob[" + std::to_string(i) + "]"));
    }
  } else {
    prob.assign(outcomes.size(), Rational(1, static_cast<unsigned long>(outcomes.size())));
  }
  try {
    FiniteProbSpace space(outcomes, prob);
    const char* key = j.contains("partitions") ? "partitions" : "agents";
    const Json& agents_json = Require(j, key, "model");
    if (!agents_json.is_object() || agents_json.empty()) {
      Fail(ErrorKind::kParse, std::string("model.") + key + ": expected an object mapping agent id to partition");
    }
    std::vector<std::string> agents;
    std::vector<AgentPartition> partitions;
    for (const auto& [agent, cells_json] : agents_json.items()) {
      std::vector<std::vector<std::size_t>> cells;
      for (const auto& cell : cells_json) {
        std::vector<std::size_t> members;
        for (const auto& label : cell) members.push_back(space.index_of(label.is_string() ? label.get<std::string>() : label.dump()));
        cells.push_back(std::move(members));
      }
      agents.push_back(agent);
      partitions.emplace_back(space.size(), std::move(cells));
    }
    return EpistemicModel(std::move(space), std::move(agents), std::move(partitions));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    Fail(ErrorKind::kParse, std::string("model: ") + e.what());
  }
}

epistemic::EpistemicModel LoadModel(const std::string& source) { return ModelFromJson(JsonFromSource(source)); }

DegreeSequence ParseDegreeSequence(std::istream& in, const std::string& name) {
  std::vector<int> degrees;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string body = StripComment(line);
    if (body.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_number);
    std::istringstream tokens(body);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    long count = 1;
    long degree = 0;
    if (parts.size() == 1) {
      degree = ParseLong(parts[0], where);
    } else if (parts.size() == 3 && parts[1] == "x") {
      count = ParseLong(parts[0], where);
      degree = ParseLong(parts[2], where);
      if (count < 1) Fail(ErrorKind::kParse, where + ": count must be positive");
    } else {
      Fail(ErrorKind::kParse, where + ": expected a degree or 'count x degree', got '" + body + "'");
    }
    if (degree < 0) Fail(ErrorKind::kParse, where + ": negative degree " + std::to_string(degree));
    if (degree > 100000000 || count > 100000000) Fail(ErrorKind::kParse, where + ": value too large");
    degrees.insert(degrees.end(), static_cast<std::size_t>(count), static_cast<int>(degree));
  }
  if (degrees.empty()) Fail(ErrorKind::kParse, name + ": degree sequence is empty");
  return DegreeSequence(std::move(degrees));
}

DegreeSequence LoadDegreeSequence(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseDegreeSequence(in, path);
}

void WriteDegreeSequence(std::ostream& out, const DegreeSequence& seq) {
  for (int d : seq.degrees) out << d << '\n';
}

ConcreteGraph ParseEdgeList(std::istream& in, const std::string& name) {
  std::vector<std::pair<int, int>> edges;
  long declared = -1;
  long max_id = -1;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string body = StripComment(line);
    if (body.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_number);
    std::istringstream tokens(body);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (parts.size() == 2 && parts[0] == "n") {
      declared = ParseLong(parts[1], where);
      if (declared < 1) Fail(ErrorKind::kParse, where + ": vertex count must be positive");
      continue;
    }
    if (parts.size() != 2) Fail(ErrorKind::kParse, where + ": expected 'u v', got '" + body + "'");
    const long u = ParseLong(parts[0], where);
    const long v = ParseLong(parts[1], where);
    if (u < 0 || v < 0 || u > 1000000 || v > 1000000) Fail(ErrorKind::kParse, where + ": vertex id out of range");
    if (u == v) Fail(ErrorKind::kParse, where + ": self-loop at vertex " + std::to_string(u));
    max_id = std::max({max_id, u, v});
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  const long n = declared >= 0 ? declared : max_id + 1;
  if (n < 1) Fail(ErrorKind::kParse, name + ": graph has no vertices");
  if (max_id >= n) Fail(ErrorKind::kParse, name + ": vertex id " + std::to_string(max_id) + " exceeds declared n");
  ConcreteGraph g(static_cast<int>(n));
  for (const auto& [u, v] : edges) {
    if (g.has_edge(u, v)) Fail(ErrorKind::kParse, name + ": duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    g.AddEdge(u, v);
  }
  return g;
}

ConcreteGraph LoadEdgeList(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseEdgeList(in, path);
}

void WriteEdgeList(std::ostream& out, const ConcreteGraph& graph) {
  out << "n " << graph.num_vertices() << '\n';
  for (const auto& [u, v] : graph.Edges()) out << u << ' ' << v << '\n';
}

void Table::Add(std::vector<std::string> row) {
  if (row.size() != columns.size()) Fail(ErrorKind::kInternal, "table row width does not match the header");
  rows.push_back(std::move(row));
}

Format ParseFormat(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  Fail(ErrorKind::kParse, "format: expected csv or json, got '" + name + "'");
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteCsv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << CsvEscape(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << CsvEscape(row[i]);
    out << '\n';
  }
}

Json TableToJson(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace factional
