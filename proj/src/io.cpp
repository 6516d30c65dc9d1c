#include "dendro/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace dendro::io {

namespace {

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what(), e.byte);
  }
}

Rational rational_field(const Json& j, const std::string& what) {
  if (!j.is_string())
    throw ParseError(what + " must be a rational encoded as a string");
  auto r = parse_rational(j.get<std::string>());
  if (!r)
    throw ParseError(what + ": '" + j.get<std::string>() +
                     "' is not an exact rational");
  return *r;
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> keys,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ParseError(what + ": unknown key '" + key + "'");
  }
}

}  // namespace

UltrametricSpace parse_space(const std::string& text) {
  Json j = parse_json_text(text);
  if (!j.is_object() || !j.contains("points") || !j.contains("heights"))
    throw ParseError("a space needs 'points' and 'heights'");
  reject_unknown_keys(j, {"points", "heights"}, "space");
  if (!j["points"].is_array()) throw ParseError("'points' must be an array");
  std::vector<std::string> points;
  for (const auto& p : j["points"]) {
    if (!p.is_string()) throw ParseError("point labels must be strings");
    points.push_back(p.get<std::string>());
  }
  if (!j["heights"].is_array()) throw ParseError("'heights' must be an array");
  std::vector<std::vector<UltrametricSpace::Entry>> heights;
  for (const auto& row : j["heights"]) {
    if (!row.is_array()) throw ParseError("'heights' rows must be arrays");
    std::vector<UltrametricSpace::Entry> out;
    for (const auto& cell : row) {
      if (cell.is_null())
        out.push_back(std::nullopt);
      else
        out.push_back(rational_field(cell, "height entry"));
    }
    heights.push_back(std::move(out));
  }
  try {
    return UltrametricSpace(std::move(points), std::move(heights));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_space(const UltrametricSpace& space) {
  Json j;
  j["points"] = space.points();
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < space.size(); ++k) {
      const auto& e = space.entry(i, k);
      if (e)
        row.push_back(format_rational(*e));
      else
        row.push_back(nullptr);
    }
    rows.push_back(std::move(row));
  }
  j["heights"] = std::move(rows);
  return j.dump(2) + "\n";
}

RootedTree parse_tree_json(const std::string& text) {
  Json j = parse_json_text(text);
  if (!j.is_object() || !j.contains("root") || !j.contains("vertices"))
    throw ParseError("a tree needs 'root' and 'vertices'");
  reject_unknown_keys(j, {"root", "vertices", "truncation_depth"}, "tree");
  if (!j["root"].is_string()) throw ParseError("'root' must be a string");
  std::vector<RootedTree::VertexSpec> specs;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object()) throw ParseError("vertices must be objects");
    reject_unknown_keys(v, {"label", "parent", "length"}, "vertex");
    if (!v.contains("label") || !v.contains("parent") || !v.contains("length"))
      throw ParseError("each vertex needs 'label', 'parent' and 'length'");
    if (!v["label"].is_string() || !v["parent"].is_string())
      throw ParseError("vertex labels must be strings");
    specs.push_back(RootedTree::VertexSpec{
        v["label"].get<std::string>(), v["parent"].get<std::string>(),
        rational_field(v["length"], "edge length")});
  }
  std::optional<Rational> tag;
  if (j.contains("truncation_depth") && !j["truncation_depth"].is_null())
    tag = rational_field(j["truncation_depth"], "truncation_depth");
  try {
    return RootedTree(j["root"].get<std::string>(), std::move(specs),
                      std::move(tag));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_tree_json(const RootedTree& tree) {
  Json j;
  j["root"] = tree.label(tree.root());
  Json vertices = Json::array();
  for (std::size_t v = 1; v < tree.size(); ++v) {
    Json spec;
    spec["label"] = tree.label(v);
    spec["parent"] = tree.label(static_cast<std::size_t>(tree.parent(v)));
    spec["length"] = format_rational(tree.edge_length(v));
    vertices.push_back(std::move(spec));
  }
  j["vertices"] = std::move(vertices);
  if (tree.truncation_depth())
    j["truncation_depth"] = format_rational(*tree.truncation_depth());
  return j.dump(2) + "\n";
}

// --- Newick ------------------------------------------------------------------

namespace {

bool newick_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '@' || c == '+' || c == '|' || c == '-';
}

bool newick_length_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' ||
         c == '-' || c == '+';
}

struct NewickNode {
  std::string label;
  std::optional<Rational> length;
  std::vector<NewickNode> children;
};

class NewickParser {
 public:
  explicit NewickParser(const std::string& text) : text_(text) {}

  NewickNode parse() {
    skip_space();
    NewickNode root = node();
    skip_space();
    expect(';');
    skip_space();
    if (pos_ != text_.size())
      throw ParseError("trailing characters after ';'", pos_);
    return root;
  }

 private:
  NewickNode node() {
    NewickNode out;
    skip_space();
    if (peek() == '(') {
      ++pos_;
      out.children.push_back(node());
      skip_space();
      while (peek() == ',') {
        ++pos_;
        out.children.push_back(node());
        skip_space();
      }
      expect(')');
    }
    skip_space();
    if (peek() == '[')
      throw ParseError("comments are not part of the accepted subset", pos_);
    if (peek() == '\'' || peek() == '"')
      throw ParseError("quoted labels are not part of the accepted subset",
                       pos_);
    while (pos_ < text_.size() && newick_label_char(text_[pos_]))
      out.label += text_[pos_++];
    skip_space();
    if (peek() == ':') {
      ++pos_;
      skip_space();
      std::size_t start = pos_;
      std::string token;
      while (pos_ < text_.size() && newick_length_char(text_[pos_]))
        token += text_[pos_++];
      if (pos_ < text_.size() &&
          (text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == 'x'))
        throw ParseError("branch length is not an exact rational", pos_);
      auto r = parse_rational(token);
      if (!r)
        throw ParseError("branch length '" + token +
                             "' is not an exact rational",
                         start);
      out.length = *r;
    }
    return out;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

void collect_labels(const NewickNode& node, std::vector<std::string>& out) {
  if (!node.label.empty()) out.push_back(node.label);
  for (const auto& c : node.children) collect_labels(c, out);
}

}  // namespace

RootedTree parse_newick(const std::string& text) {
  NewickParser parser(text);
  NewickNode root = parser.parse();
  if (root.length)
    throw ParseError("the root cannot carry an edge length");

  std::vector<std::string> taken;
  collect_labels(root, taken);
  std::unordered_set<std::string> used(taken.begin(), taken.end());
  std::size_t counter = 0;
  auto fresh = [&] {
    for (;;) {
      std::string candidate = "_" + std::to_string(++counter);
      if (used.insert(candidate).second) return candidate;
    }
  };

  std::vector<RootedTree::VertexSpec> specs;
  std::function<void(NewickNode&, const std::string&)> emit =
      [&](NewickNode& node, const std::string& parent) {
        if (node.label.empty()) node.label = fresh();
        if (!parent.empty()) {
          if (!node.length)
            throw ParseError("vertex '" + node.label +
                             "' is missing its branch length");
          specs.push_back(
              RootedTree::VertexSpec{node.label, parent, *node.length});
        }
        for (auto& c : node.children) emit(c, node.label);
      };
  emit(root, "");
  try {
    return RootedTree(root.label, std::move(specs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

namespace {

void write_newick_node(const RootedTree& tree, std::size_t v,
                       std::string& out) {
  for (char c : tree.label(v))
    if (!newick_label_char(c))
      throw std::invalid_argument("label '" + tree.label(v) +
                                  "' is not representable in the Newick "
                                  "subset; use the JSON tree format");
  if (!tree.is_leaf(v)) {
    out += '(';
    const auto& kids = tree.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ',';
      write_newick_node(tree, kids[i], out);
    }
    out += ')';
  }
  out += tree.label(v);
  if (v != tree.root()) {
    out += ':';
    out += format_rational(tree.edge_length(v));
  }
}

}  // namespace

std::string serialize_newick(const RootedTree& tree) {
  std::string out;
  write_newick_node(tree, tree.root(), out);
  out += ";\n";
  return out;
}

ParsedFile parse_any(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  if (i < text.size() && text[i] == '{') {
    Json j = parse_json_text(text);
    if (j.contains("points")) return parse_space(text);
    if (j.contains("root")) return parse_tree_json(text);
    throw ParseError("JSON input is neither a space nor a tree");
  }
  return parse_newick(text);
}

UltrametricSpace as_space(const std::string& text) {
  ParsedFile parsed = parse_any(text);
  if (std::holds_alternative<UltrametricSpace>(parsed))
    return std::get<UltrametricSpace>(std::move(parsed));
  return end_space(std::get<RootedTree>(parsed));
}

// --- result payloads ---------------------------------------------------------

Json bijection_to_json(const BijectionMap& f, const UltrametricSpace& from,
                       const UltrametricSpace& to) {
  Json map = Json::object();
  for (std::size_t i = 0; i < from.size(); ++i)
    map[from.label(i)] = to.label(f.image(i));
  return map;
}

Json validation_to_json(const Validation& v) {
  Json j;
  j["ok"] = v.ok;
  if (v.issue) {
    const char* kind = nullptr;
    switch (v.issue->kind) {
      case ValidationIssue::Kind::MissingEntry: kind = "missing-entry"; break;
      case ValidationIssue::Kind::SelfEntry: kind = "self-entry"; break;
      case ValidationIssue::Kind::Asymmetric: kind = "asymmetric"; break;
      case ValidationIssue::Kind::Negative: kind = "negative"; break;
      case ValidationIssue::Kind::ThreePoint: kind = "three-point"; break;
    }
    j["issue"] = Json{{"kind", kind}, {"message", v.issue->message}};
  }
  return j;
}

Json distortion_report_to_json(const DistortionReport& report,
                               const UltrametricSpace& from) {
  Json j;
  j["max_exponent"] = format_rational(report.max_exponent);
  if (report.worst) {
    j["worst"] = Json{{"center", from.label(report.worst->center)},
                      {"level", format_rational(report.worst->level)},
                      {"exponent", format_rational(report.worst->exponent)},
                      {"pair", Json::array({from.label(report.worst->witness_max),
                                            from.label(report.worst->witness_min)})}};
  }
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back(Json{{"center", from.label(e.center)},
                           {"level", format_rational(e.level)},
                           {"exponent", format_rational(e.exponent)}});
  }
  j["spheres"] = std::move(entries);
  return j;
}

Json kappa_result_to_json(const KappaResult& result, const UltrametricSpace& u,
                          const UltrametricSpace& u2) {
  Json j;
  switch (result.status) {
    case KappaStatus::Solved: j["status"] = "solved"; break;
    case KappaStatus::Bracket: j["status"] = "bracket"; break;
    case KappaStatus::Infinite: j["status"] = "infinite"; break;
  }
  if (result.status == KappaStatus::Infinite) {
    j["rho"] = "INFINITE";
    j["node_count"] = result.node_count;
    return j;
  }
  if (result.kappa) {
    j["kappa"] = format_rational(*result.kappa);
    j["rho_display"] = display_decimal(rho(result));
    auto exact = rho_exact_form(*result.kappa);
    if (exact)
      j["rho_exact_form"] = Json{{"n", exact->str()}};
    else
      j["rho_exact_form"] = "NON-INTEGER";
  }
  j["lower_bound"] = format_rational(result.lower_bound);
  j["upper_bound"] = format_rational(result.upper_bound);
  j["rho_lower_display"] = display_decimal(rho_of_exponent(result.lower_bound));
  j["rho_upper_display"] = display_decimal(rho_of_exponent(result.upper_bound));
  if (result.certificate)
    j["certificate"] = bijection_to_json(*result.certificate, u, u2);
  j["node_count"] = result.node_count;
  j["stopped_early"] = result.stopped_early;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dendro::io
