#pragma once

#include <string>
#include <vector>

#include "polynash/brp.hpp"
#include "polynash/game.hpp"
#include "polynash/graph.hpp"
#include "polynash/pseudoexpectation.hpp"
#include "polynash/rounding.hpp"

namespace polynash {

// All floats on the wire carry 17 significant digits so identical inputs
// yield byte-identical files.
std::string format_double(double v);

// Minimal ordered JSON writer; keys appear in insertion order.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null();

  std::string str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_stack_;
  bool pending_key_ = false;
};

std::string game_to_json(const PolymatrixGame& game);
PolymatrixGame game_from_json(const std::string& text);

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

// JSON-lines moment dump: {"monomial": [[i,p],...], "value": v}, canonical
// monomial order; byte-stable for identical inputs.
std::string moment_table_dump(const Pseudoexpectation& pe);

std::string rounding_trace_csv(const RoundingTrace& trace);
std::string pursuit_trace_csv(const PursuitTrace& trace);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace polynash
