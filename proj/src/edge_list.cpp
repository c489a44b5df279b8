#include "scgg/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace scgg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

std::vector<Graph> parse_edge_list(const std::string& text, const std::string& path) {
  std::vector<Graph> graphs;
  bool expect_n = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (line.starts_with("#graph")) {
      if (expect_n) throw ParseError(path, lineno, "missing n=<num_nodes> for previous graph");
      expect_n = true;
      continue;
    }
    if (line.starts_with("n=")) {
      if (!expect_n) throw ParseError(path, lineno, "n= line outside of a #graph block");
      int n = 0;
      if (!parse_int(line.substr(2), n) || n < 0) throw ParseError(path, lineno, "bad node count");
      graphs.emplace_back(n);
      expect_n = false;
      continue;
    }
    if (expect_n) throw ParseError(path, lineno, "expected n=<num_nodes> after #graph");
    if (graphs.empty()) throw ParseError(path, lineno, "edge before any #graph header");
    const auto sep = line.find(' ');
    int a = 0, b = 0;
    if (sep == std::string_view::npos || !parse_int(trim(line.substr(0, sep)), a) ||
        !parse_int(trim(line.substr(sep + 1)), b))
      throw ParseError(path, lineno, "malformed edge line");
    Graph& g = graphs.back();
    if (a == b) throw ParseError(path, lineno, "self-loop");
    if (a < 0 || b < 0 || a >= g.num_nodes() || b >= g.num_nodes())
      throw ParseError(path, lineno, "edge endpoint out of range");
    g.add_edge(a, b);
  }
  if (expect_n) throw ParseError(path, lineno, "missing n=<num_nodes> for last graph");
  return graphs;
}

std::string format_edge_list(const std::vector<Graph>& graphs) {
  std::ostringstream out;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    out << "#graph " << k << "\n";
    out << "n=" << graphs[k].num_nodes() << "\n";
    for (const auto& [a, b] : graphs[k].edges()) out << a << " " << b << "\n";
  }
  return out.str();
}

std::vector<Graph> load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str(), path);
}

void save_edge_list(const std::vector<Graph>& graphs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << format_edge_list(graphs);
}

}  // namespace scgg
