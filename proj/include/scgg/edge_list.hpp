#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scgg/graph.hpp"

namespace scgg {

// Error raised by the edge-list parser; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Edge-list file format (UTF-8 text):
//   % comment lines start with a percent sign
//   #graph <k>           one header per graph
//   n=<num_nodes>        first payload line of each graph
//   <i> <j>              one edge per line, i < j
std::vector<Graph> load_edge_list(const std::string& path);
void save_edge_list(const std::vector<Graph>& graphs, const std::string& path);

std::vector<Graph> parse_edge_list(const std::string& text, const std::string& path_for_errors = "<string>");
std::string format_edge_list(const std::vector<Graph>& graphs);

}  // namespace scgg
