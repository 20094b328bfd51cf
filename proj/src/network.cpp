#include "selcond/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "selcond/error.hpp"

namespace selcond {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UndeclaredParent: return "UndeclaredParent";
    case ErrorCode::WrongRowCount: return "WrongRowCount";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::MissingParentBinding: return "MissingParentBinding";
    case ErrorCode::ConflictingBinding: return "ConflictingBinding";
    case ErrorCode::NetworkTooLarge: return "NetworkTooLarge";
    case ErrorCode::OverlappingAssignments: return "OverlappingAssignments";
    case ErrorCode::CategoryOutOfRange: return "CategoryOutOfRange";
    case ErrorCode::EmptyPosterior: return "EmptyPosterior";
    case ErrorCode::InvalidSimplexPoint: return "InvalidSimplexPoint";
    case ErrorCode::UndefinedDensity: return "UndefinedDensity";
    case ErrorCode::NonPositiveShape: return "NonPositiveShape";
    case ErrorCode::NonPositivePhiMin: return "NonPositivePhiMin";
    case ErrorCode::SampleBudgetExceeded: return "SampleBudgetExceeded";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// BeliefNetwork

BeliefNetwork::BeliefNetwork(std::string name,
                             std::vector<std::string> node_names,
                             std::vector<Cpt> cpts)
    : name_(std::move(name)), names_(std::move(node_names)),
      cpts_(std::move(cpts)) {
  const std::size_t n = names_.size();
  if (cpts_.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "one CPT per node required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) {
        throw ParseError(ErrorCode::DuplicateNode, 0,
                         "duplicate node '" + names_[i] + "'");
      }
    }
  }

  children_.assign(n, {});
  std::vector<std::size_t> indegree(n, 0);
  for (NodeIndex i = 0; i < n; ++i) {
    const Cpt& t = cpts_[i];
    for (std::size_t k = 0; k < t.parents.size(); ++k) {
      const NodeIndex p = t.parents[k];
      if (p >= n) {
        throw ParseError(ErrorCode::UndeclaredParent, 0,
                         "node '" + names_[i] + "' has an undeclared parent");
      }
      if (std::find(t.parents.begin(), t.parents.begin() + k, p) !=
          t.parents.begin() + k) {
        throw ParseError(ErrorCode::DuplicateNode, 0,
                         "node '" + names_[i] + "' lists parent '" +
                             names_[p] + "' twice");
      }
      children_[p].push_back(i);
      ++indegree[i];
    }
    if (t.parents.size() >= 31 ||
        t.rows.size() != (std::size_t{1} << t.parents.size())) {
      throw ParseError(ErrorCode::WrongRowCount, 0,
                       "node '" + names_[i] + "' needs " +
                           std::to_string(std::size_t{1} << t.parents.size()) +
                           " CPT rows, has " + std::to_string(t.rows.size()));
    }
    for (double p : t.rows) {
      if (!(p > 0.0 && p < 1.0)) {
        throw ParseError(ErrorCode::ProbabilityOutOfRange, 0,
                         "node '" + names_[i] +
                             "' has a CPT entry outside (0, 1)");
      }
    }
  }

  // Kahn's algorithm; the queue is ordered by declaration index so the
  // resulting order is deterministic.
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  topo_.reserve(n);
  while (!ready.empty()) {
    const NodeIndex i = ready.top();
    ready.pop();
    topo_.push_back(i);
    for (NodeIndex c : children_[i]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (topo_.size() != n) {
    throw ParseError(ErrorCode::CycleDetected, 0, "parent graph has a cycle");
  }
}

std::optional<NodeIndex> BeliefNetwork::find(std::string_view name) const {
  for (NodeIndex i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

NodeIndex BeliefNetwork::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Assignment

Assignment& Assignment::bind(NodeIndex i, int v) {
  if (v != 0 && v != 1) {
    throw Error(ErrorCode::InvalidArgument, "node values are 0 or 1");
  }
  values_.at(i) = static_cast<std::int8_t>(v);
  return *this;
}

Assignment& Assignment::unbind(NodeIndex i) {
  values_.at(i) = kUnbound;
  return *this;
}

std::size_t Assignment::bound_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(),
                    [](std::int8_t v) { return v != kUnbound; }));
}

std::vector<NodeIndex> Assignment::bound_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < values_.size(); ++i) {
    if (values_[i] != kUnbound) out.push_back(i);
  }
  return out;
}

bool Assignment::agrees_with(const Assignment& other) const {
  for (NodeIndex i = 0; i < other.values_.size(); ++i) {
    if (other.values_[i] != kUnbound && values_.at(i) != other.values_[i]) {
      return false;
    }
  }
  return true;
}

bool Assignment::disjoint_from(const Assignment& other) const {
  for (NodeIndex i = 0; i < std::min(values_.size(), other.values_.size());
       ++i) {
    if (values_[i] != kUnbound && other.values_[i] != kUnbound) return false;
  }
  return true;
}

Assignment Assignment::merged(const Assignment& other) const {
  if (other.values_.size() != values_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "assignments belong to different networks");
  }
  Assignment out = *this;
  for (NodeIndex i = 0; i < values_.size(); ++i) {
    if (other.values_[i] == kUnbound) continue;
    if (out.values_[i] != kUnbound && out.values_[i] != other.values_[i]) {
      throw Error(ErrorCode::ConflictingBinding,
                  "conflicting bindings for node " + std::to_string(i));
    }
    out.values_[i] = other.values_[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

double parse_probability(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(ErrorCode::SyntaxError, line,
                     "expected a probability, got '" + std::string(token) + "'");
  }
  if (!(value > 0.0 && value < 1.0)) {
    throw ParseError(ErrorCode::ProbabilityOutOfRange, line,
                     "probability " + std::string(token) +
                         " is outside the open interval (0, 1)");
  }
  return value;
}

std::string format_probability(double p) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, ptr);
}

struct PendingNode {
  std::string name;
  std::size_t line = 0;
  std::optional<std::vector<std::string_view>> parent_names;
  std::size_t parents_line = 0;
  std::optional<std::vector<double>> rows;
  bool is_prior_decl = false;
};

}  // namespace

BeliefNetwork parse_network(std::string_view text) {
  std::string net_name;
  bool have_header = false;
  std::vector<PendingNode> nodes;
  std::unordered_map<std::string, NodeIndex> index;

  auto expect_current = [&](std::string_view id, std::size_t line) -> PendingNode& {
    if (nodes.empty() || nodes.back().name != id) {
      throw ParseError(ErrorCode::SyntaxError, line,
                       "'" + std::string(id) +
                           "' does not name the node being declared");
    }
    return nodes.back();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split_tokens(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const std::string_view keyword = tokens[0];
    if (!have_header) {
      if (keyword != "network" || tokens.size() != 2) {
        throw ParseError(ErrorCode::SyntaxError, line_no,
                         "expected 'network <name>'");
      }
      net_name = std::string(tokens[1]);
      have_header = true;
    } else if (keyword == "node") {
      if (tokens.size() != 2) {
        throw ParseError(ErrorCode::SyntaxError, line_no, "expected 'node <id>'");
      }
      if (!nodes.empty() && !nodes.back().rows) {
        throw ParseError(ErrorCode::SyntaxError, line_no,
                         "node '" + nodes.back().name + "' has no cpt or prior");
      }
      std::string id(tokens[1]);
      if (index.contains(id)) {
        throw ParseError(ErrorCode::DuplicateNode, line_no,
                         "duplicate node '" + id + "'");
      }
      index.emplace(id, nodes.size());
      nodes.push_back({.name = id, .line = line_no});
    } else if (keyword == "parents" || keyword == "cpt" || keyword == "prior") {
      if (tokens.size() < 3 || tokens[2] != ":") {
        throw ParseError(ErrorCode::SyntaxError, line_no,
                         "expected '" + std::string(keyword) + " <id> : ...'");
      }
      PendingNode& node = expect_current(tokens[1], line_no);
      if (node.rows) {
        throw ParseError(ErrorCode::SyntaxError, line_no,
                         "node '" + node.name + "' already has its table");
      }
      auto rest = std::span(tokens).subspan(3);
      if (keyword == "parents") {
        if (node.parent_names) {
          throw ParseError(ErrorCode::SyntaxError, line_no,
                           "duplicate parents line for '" + node.name + "'");
        }
        for (auto p : rest) {
          auto it = index.find(std::string(p));
          if (it != index.end() && it->second + 1 == nodes.size()) {
            throw ParseError(ErrorCode::CycleDetected, line_no,
                             "node '" + node.name + "' lists itself as parent");
          }
          if (it == index.end()) {
            throw ParseError(ErrorCode::UndeclaredParent, line_no,
                             "parent '" + std::string(p) +
                                 "' is not declared before '" + node.name + "'");
          }
        }
        node.parent_names.emplace(rest.begin(), rest.end());
        node.parents_line = line_no;
      } else {
        const std::size_t k = node.parent_names ? node.parent_names->size() : 0;
        if (keyword == "prior" && k != 0) {
          throw ParseError(ErrorCode::SyntaxError, line_no,
                           "'prior' used for node '" + node.name +
                               "', which has parents");
        }
        std::vector<double> rows;
        for (auto t : rest) rows.push_back(parse_probability(t, line_no));
        const std::size_t want = std::size_t{1} << k;
        if (rows.size() != want) {
          throw ParseError(ErrorCode::WrongRowCount, line_no,
                           "node '" + node.name + "' needs " +
                               std::to_string(want) + " rows, got " +
                               std::to_string(rows.size()));
        }
        node.rows = std::move(rows);
        node.is_prior_decl = keyword == "prior";
      }
    } else {
      throw ParseError(ErrorCode::SyntaxError, line_no,
                       "unknown keyword '" + std::string(keyword) + "'");
    }
    if (end == text.size()) break;
  }

  if (!have_header) {
    throw ParseError(ErrorCode::SyntaxError, line_no, "missing 'network' line");
  }
  if (!nodes.empty() && !nodes.back().rows) {
    throw ParseError(ErrorCode::SyntaxError, line_no,
                     "node '" + nodes.back().name + "' has no cpt or prior");
  }

  std::vector<std::string> names;
  std::vector<Cpt> cpts;
  names.reserve(nodes.size());
  cpts.reserve(nodes.size());
  for (auto& node : nodes) {
    Cpt t;
    if (node.parent_names) {
      for (auto p : *node.parent_names) t.parents.push_back(index.at(std::string(p)));
    }
    t.rows = std::move(*node.rows);
    names.push_back(std::move(node.name));
    cpts.push_back(std::move(t));
  }
  return BeliefNetwork(std::move(net_name), std::move(names), std::move(cpts));
}

BeliefNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(ErrorCode::SyntaxError, 0, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string serialize_network(const BeliefNetwork& net) {
  std::string out = "network " + net.name() + "\n";
  for (NodeIndex i = 0; i < net.size(); ++i) {
    const Cpt& t = net.cpt(i);
    const std::string& id = net.node_name(i);
    out += "node " + id + "\n";
    if (t.parents.empty()) {
      out += "prior " + id + " : " + format_probability(t.rows[0]) + "\n";
      continue;
    }
    out += "parents " + id + " :";
    for (NodeIndex p : t.parents) out += " " + net.node_name(p);
    out += "\ncpt " + id + " :";
    for (double r : t.rows) out += " " + format_probability(r);
    out += "\n";
  }
  return out;
}

Assignment parse_assignment(const BeliefNetwork& net, std::string_view text) {
  Assignment out(net.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 2 != item.size() ||
        (item[eq + 1] != '0' && item[eq + 1] != '1')) {
      throw Error(ErrorCode::InvalidArgument,
                  "expected Name=0 or Name=1, got '" + std::string(item) + "'");
    }
    const NodeIndex node = net.index_of(item.substr(0, eq));
    if (out.is_bound(node)) {
      throw Error(ErrorCode::ConflictingBinding,
                  "node '" + net.node_name(node) + "' bound twice");
    }
    out.bind(node, item[eq + 1] - '0');
  }
  return out;
}

std::string format_assignment(const BeliefNetwork& net, const Assignment& a) {
  std::string out;
  for (NodeIndex i : a.bound_nodes()) {
    if (!out.empty()) out += ",";
    out += net.node_name(i) + "=" + std::to_string(a.value(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

std::size_t cpt_row_index(const BeliefNetwork& net, NodeIndex node,
                          const Assignment& a) {
  std::size_t row = 0;
  for (NodeIndex p : net.parents(node)) {
    const std::int8_t v = a[p];
    if (v == Assignment::kUnbound) {
      throw Error(ErrorCode::MissingParentBinding,
                  "parent '" + net.node_name(p) + "' of '" +
                      net.node_name(node) + "' is unbound");
    }
    row = (row << 1) | static_cast<std::size_t>(v);
  }
  return row;
}

double conditional_row(const BeliefNetwork& net, NodeIndex node,
                       int node_value, const Assignment& parent_assignment) {
  const double p1 = net.cpt(node).rows[cpt_row_index(net, node, parent_assignment)];
  return node_value == 1 ? p1 : 1.0 - p1;
}

double joint_probability(const BeliefNetwork& net, const Assignment& full) {
  if (full.node_count() != net.size() || !full.is_full()) {
    throw Error(ErrorCode::IncompleteAssignment,
                "joint probability needs every node bound");
  }
  double prod = 1.0;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    prod *= conditional_row(net, i, full[i], full);
  }
  return prod;
}

std::size_t instantiation_index(std::span<const NodeIndex> nodes,
                                const Assignment& a) {
  std::size_t index = 0;
  for (NodeIndex i : nodes) {
    const std::int8_t v = a[i];
    if (v == Assignment::kUnbound) {
      throw Error(ErrorCode::IncompleteAssignment,
                  "instantiation index needs every listed node bound");
    }
    index = (index << 1) | static_cast<std::size_t>(v);
  }
  return index;
}

void bind_instantiation(std::span<const NodeIndex> nodes, std::size_t index,
                        Assignment& a) {
  const std::size_t k = nodes.size();
  for (std::size_t j = 0; j < k; ++j) {
    a.bind(nodes[j], static_cast<int>((index >> (k - 1 - j)) & 1U));
  }
}

}  // namespace selcond
