#include "topogas/gas_io.hpp"

#include "../common/files.hpp"
#include "../common/text.hpp"
#include "topogas/errors.hpp"

#include <sstream>

namespace topogas {

namespace {

constexpr std::string_view kMagic = "topogas-gas";
constexpr int kVersion = 1;

class Reader {
public:
  explicit Reader(std::string_view doc) : lines_(doc) {}

  // Next non-blank line split into fields.
  std::vector<std::string_view> fields() {
    std::string_view line;
    while (lines_.next(line)) {
      auto f = text::split(line);
      if (!f.empty()) return f;
    }
    throw ParseError(lines_.line_number() + 1, "<eof>", "unexpected end of document");
  }

  std::vector<std::string_view> keyed(std::string_view key, std::size_t arity) {
    auto f = fields();
    if (f[0] != key) fail(key, "expected '" + std::string(key) + "', got '" + std::string(f[0]) + "'");
    if (f.size() != arity + 1) fail(key, "expected " + std::to_string(arity) + " value(s)");
    return f;
  }

  template <typename Int>
  Int integer(std::string_view token, std::string_view field) {
    auto v = text::parse_int<Int>(token);
    if (!v) fail(field, "not an integer: '" + std::string(token) + "'");
    return *v;
  }

  double real(std::string_view token, std::string_view field) {
    auto v = text::parse_double(token);
    if (!v) fail(field, "not a number: '" + std::string(token) + "'");
    return *v;
  }

  [[noreturn]] void fail(std::string_view field, const std::string &message) const {
    throw ParseError(lines_.line_number(), std::string(field), message);
  }

private:
  text::LineReader lines_;
};

} // namespace

std::string serialize_gas(const Gas &gas) {
  using text::format_double;
  const GasState &s = gas.state();
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "tick " << s.tick << '\n';
  out << "next_id " << s.next_id << '\n';
  out << "nodes " << s.nodes.size() << '\n';
  for (const Node &n : s.nodes)
    out << to_index(n.id) << ' ' << format_double(n.pos.x) << ' ' << format_double(n.pos.y) << ' '
        << format_double(n.pos.z) << ' ' << format_double(n.error) << '\n';
  out << "edges " << s.edges.size() << '\n';
  for (const Edge &e : s.edges)
    out << to_index(e.key.a) << ' ' << to_index(e.key.b) << ' ' << to_string(e.key.kind) << ' ' << e.age << '\n';
  out << "last_winners " << s.last_winner.size() << '\n';
  for (const auto &[demo, id] : s.last_winner) out << demo << ' ' << to_index(id) << '\n';
  const Params &p = s.params;
  out << "params\n";
  out << "winner_attraction " << format_double(p.winner_attraction) << '\n';
  out << "neighbor_attraction " << format_double(p.neighbor_attraction) << '\n';
  out << "error_decay " << format_double(p.error_decay) << '\n';
  out << "max_error " << format_double(p.max_error) << '\n';
  out << "max_age " << p.max_age << '\n';
  out << "edge_mode " << to_string(p.edge_mode) << '\n';
  out << "remove_isolated_nodes " << (p.remove_isolated_nodes ? "true" : "false") << '\n';
  out << "neighbor_rule " << to_string(p.neighbor_rule) << '\n';
  out << "end\n";
  return out.str();
}

Gas deserialize_gas(std::string_view document) {
  Reader r(document);
  GasState s;

  auto header = r.keyed(kMagic, 1);
  if (r.integer<int>(header[1], "version") != kVersion) r.fail("version", "unsupported version");

  s.tick = r.integer<std::uint64_t>(r.keyed("tick", 1)[1], "tick");
  s.next_id = r.integer<std::uint32_t>(r.keyed("next_id", 1)[1], "next_id");

  const auto node_count = r.integer<std::size_t>(r.keyed("nodes", 1)[1], "nodes");
  for (std::size_t i = 0; i < node_count; ++i) {
    auto f = r.fields();
    if (f.size() != 5) r.fail("node", "expected: id x y z error");
    Node n;
    n.id = NodeId{r.integer<std::uint32_t>(f[0], "node.id")};
    n.pos = {r.real(f[1], "node.x"), r.real(f[2], "node.y"), r.real(f[3], "node.z")};
    n.error = r.real(f[4], "node.error");
    s.nodes.push_back(n);
  }

  const auto edge_count = r.integer<std::size_t>(r.keyed("edges", 1)[1], "edges");
  for (std::size_t i = 0; i < edge_count; ++i) {
    auto f = r.fields();
    if (f.size() != 4) r.fail("edge", "expected: a b kind age");
    Edge e;
    e.key.a = NodeId{r.integer<std::uint32_t>(f[0], "edge.a")};
    e.key.b = NodeId{r.integer<std::uint32_t>(f[1], "edge.b")};
    const auto kind = parse_edge_kind(f[2]);
    if (!kind) r.fail("edge.kind", "unknown edge kind '" + std::string(f[2]) + "'");
    e.key.kind = *kind;
    e.age = r.integer<int>(f[3], "edge.age");
    s.edges.push_back(e);
  }

  const auto winner_count = r.integer<std::size_t>(r.keyed("last_winners", 1)[1], "last_winners");
  for (std::size_t i = 0; i < winner_count; ++i) {
    auto f = r.fields();
    if (f.size() != 2) r.fail("last_winner", "expected: demonstrator node");
    s.last_winner[r.integer<DemonstratorId>(f[0], "last_winner.demonstrator")] =
        NodeId{r.integer<std::uint32_t>(f[1], "last_winner.node")};
  }

  r.keyed("params", 0);
  Params &p = s.params;
  p.winner_attraction = r.real(r.keyed("winner_attraction", 1)[1], "winner_attraction");
  p.neighbor_attraction = r.real(r.keyed("neighbor_attraction", 1)[1], "neighbor_attraction");
  p.error_decay = r.real(r.keyed("error_decay", 1)[1], "error_decay");
  p.max_error = r.real(r.keyed("max_error", 1)[1], "max_error");
  p.max_age = r.integer<int>(r.keyed("max_age", 1)[1], "max_age");
  {
    auto v = r.keyed("edge_mode", 1)[1];
    auto mode = parse_edge_mode(v);
    if (!mode) r.fail("edge_mode", "unknown edge mode '" + std::string(v) + "'");
    p.edge_mode = *mode;
  }
  {
    auto v = r.keyed("remove_isolated_nodes", 1)[1];
    if (v != "true" && v != "false") r.fail("remove_isolated_nodes", "expected true or false");
    p.remove_isolated_nodes = v == "true";
  }
  {
    auto v = r.keyed("neighbor_rule", 1)[1];
    auto rule = parse_neighbor_rule(v);
    if (!rule) r.fail("neighbor_rule", "unknown neighbor rule '" + std::string(v) + "'");
    p.neighbor_rule = *rule;
  }
  r.keyed("end", 0);

  return Gas::from_state(std::move(s));
}

Gas load_gas_file(const std::string &path) { return deserialize_gas(files::read_all(path)); }

void save_gas_file(const Gas &gas, const std::string &path) { files::write_all(path, serialize_gas(gas)); }

std::string export_dot(const Gas &gas) {
  using text::format_double;
  std::ostringstream out;
  out << "graph gas {\n";
  for (const Node &n : gas.nodes())
    out << "  n" << to_index(n.id) << " [pos=\"" << format_double(n.pos.x) << ',' << format_double(n.pos.y)
        << "!\", z=" << format_double(n.pos.z) << ", error=" << format_double(n.error) << "];\n";
  for (const Edge &e : gas.edges())
    out << "  n" << to_index(e.key.a) << " -- n" << to_index(e.key.b) << " [kind=" << to_string(e.key.kind)
        << ", age=" << e.age << "];\n";
  out << "}\n";
  return out.str();
}

std::string export_nodes_csv(const Gas &gas) {
  using text::format_double;
  std::ostringstream out;
  out << "id,x,y,z,error\n";
  for (const Node &n : gas.nodes())
    out << to_index(n.id) << ',' << format_double(n.pos.x) << ',' << format_double(n.pos.y) << ','
        << format_double(n.pos.z) << ',' << format_double(n.error) << '\n';
  return out.str();
}

} // namespace topogas
