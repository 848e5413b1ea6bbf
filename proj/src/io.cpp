#include "polynash/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace polynash {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  first_stack_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_stack_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  first_stack_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_stack_.pop_back();
  return *this;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_stack_.empty()) {
    if (!first_stack_.back()) out_ += ',';
    first_stack_.back() = false;
  }
}

namespace {
std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += '"';
  out_ += escape(k);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<std::int64_t>(v)); }

JsonWriter& JsonWriter::value(std::int64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  out_ += '"';
  out_ += escape(v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

std::string game_to_json(const PolymatrixGame& game) {
  // Edges sorted (i<j lexicographic); payoff keys follow edge order.
  std::vector<const PolymatrixGame::Edge*> edges;
  for (const auto& e : game.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const auto* a, const auto* b) {
    return std::make_pair(std::min(a->i, a->j), std::max(a->i, a->j)) <
           std::make_pair(std::min(b->i, b->j), std::max(b->i, b->j));
  });

  JsonWriter w;
  w.begin_object();
  w.key("N").value(game.num_players);
  w.key("k").value(game.num_actions);
  w.key("edges").begin_array();
  for (const auto* e : edges) {
    w.begin_array().value(std::min(e->i, e->j)).value(std::max(e->i, e->j)).end_array();
  }
  w.end_array();
  w.key("payoffs").begin_object();
  auto table = [&](const Eigen::MatrixXd& m) {
    w.begin_array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      w.begin_array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) w.value(m(r, c));
      w.end_array();
    }
    w.end_array();
  };
  for (const auto* e : edges) {
    w.key(std::to_string(e->i) + "->" + std::to_string(e->j));
    table(e->pay_ij);
    w.key(std::to_string(e->j) + "->" + std::to_string(e->i));
    table(e->pay_ji);
  }
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

PolymatrixGame game_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PolymatrixGame game;
  game.num_players = j.at("N").get<int>();
  game.num_actions = j.at("k").get<int>();
  const auto& payoffs = j.at("payoffs");
  auto table = [&](const std::string& key) {
    const auto& t = payoffs.at(key);
    Eigen::MatrixXd m(game.num_actions, game.num_actions);
    for (int r = 0; r < game.num_actions; ++r)
      for (int c = 0; c < game.num_actions; ++c) m(r, c) = t.at(r).at(c).get<double>();
    return m;
  };
  for (const auto& e : j.at("edges")) {
    PolymatrixGame::Edge edge;
    edge.i = e.at(0).get<int>();
    edge.j = e.at(1).get<int>();
    edge.pay_ij = table(std::to_string(edge.i) + "->" + std::to_string(edge.j));
    edge.pay_ji = table(std::to_string(edge.j) + "->" + std::to_string(edge.i));
    game.edges.push_back(std::move(edge));
  }
  game.validate();
  return game;
}

std::string graph_to_json(const Graph& g) {
  JsonWriter w;
  w.begin_object();
  w.key("N").value(g.num_nodes);
  w.key("seed").value(static_cast<std::uint64_t>(g.seed));
  w.key("p").value(g.edge_prob);
  w.key("edges").begin_array();
  for (const auto& [i, j] : g.edge_list()) w.begin_array().value(i).value(j).end_array();
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

Graph graph_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  Graph g = Graph::from_edges(j.at("N").get<int>(), edges);
  g.seed = j.value("seed", 0ull);
  g.edge_prob = j.value("p", 0.0);
  return g;
}

std::string moment_table_dump(const Pseudoexpectation& pe) {
  std::string out;
  const MonomialBasis& basis = pe.basis();
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    JsonWriter w;
    w.begin_object();
    w.key("monomial").begin_array();
    for (int var : basis.monomial(idx))
      w.begin_array().value(basis.player_of(var)).value(basis.action_of(var)).end_array();
    w.end_array();
    w.key("value").value(pe[idx]);
    w.end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

std::string rounding_trace_csv(const RoundingTrace& trace) {
  std::string out = "round,player,action,delta,avg_mi\n";
  int round = 0;
  for (const auto& s : trace.steps) {
    out += std::to_string(++round) + "," + std::to_string(s.player) + "," +
           std::to_string(s.action) + "," + format_double(s.delta_after) + "," +
           format_double(s.avg_mi_after) + "\n";
  }
  return out;
}

std::string pursuit_trace_csv(const PursuitTrace& trace) {
  std::string out = "t,k_size,w_size,q_size,max_phi_assigned,max_phi_global\n";
  for (const auto& it : trace.iterations) {
    out += std::to_string(it.t) + "," + std::to_string(it.k_size) + "," +
           std::to_string(it.w_size) + "," + std::to_string(it.q_size) + "," +
           format_double(it.max_phi_assigned) + "," + format_double(it.max_phi_global) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace polynash
