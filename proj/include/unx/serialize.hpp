#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unx/graph.hpp"

// Graph interchange format (text, canonical, byte-deterministic):
//
//   unx-graph v1
//   kind graph            | kind bipartite
//   n <n>                 | nl <nl>
//   regular <d>   (opt)   | nr <nr>
//   edges <count>
//   <u> <v> <mult>        (sorted; u<=v for graphs; diagonal = loop units)
//   ...
//   right_order canonical | explicit   (bipartite only)
//   <v>: <u0> <u1> ...                 (one line per right vertex if explicit)
//   end
//
// serialize(deserialize(x)) == x for every canonical document.

namespace unx {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string& out) {
    if (pos_ >= text_.size()) return false;
    std::size_t e = text_.find('\n', pos_);
    if (e == std::string_view::npos) e = text_.size();
    out.assign(text_.substr(pos_, e - pos_));
    pos_ = e + 1;
    ++line_;
    return true;
  }

  std::string expect() {
    std::string s;
    if (!next(s)) throw ParseError(line_ + 1, "unexpected end of document");
    return s;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint32_t parse_u32(std::string_view tok, std::size_t line) {
  std::uint32_t v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError(line, "expected nonnegative integer, got '" +
                               std::string(tok) + "'");
  return v;
}

}  // namespace detail

inline std::string serialize(const RegularGraph& g) {
  std::ostringstream os;
  os << "unx-graph v1\n" << "kind graph\n" << "n " << g.n() << "\n";
  if (g.declared_degree()) os << "regular " << *g.declared_degree() << "\n";
  auto edges = g.canonical_edges();
  os << "edges " << edges.size() << "\n";
  for (auto [u, v, t] : edges) os << u << " " << v << " " << t << "\n";
  os << "end\n";
  return os.str();
}

inline std::string serialize(const BipartiteGraph& b) {
  std::ostringstream os;
  os << "unx-graph v1\n"
     << "kind bipartite\n"
     << "nl " << b.num_left() << "\n"
     << "nr " << b.num_right() << "\n";
  auto edges = b.canonical_edges();
  os << "edges " << edges.size() << "\n";
  for (const auto& e : edges) os << e.left << " " << e.right << " " << e.mult << "\n";
  if (b.has_custom_order()) {
    os << "right_order explicit\n";
    for (std::uint32_t v = 0; v < b.num_right(); ++v) {
      os << v << ":";
      for (auto u : b.slots(v)) os << " " << u;
      os << "\n";
    }
  } else {
    os << "right_order canonical\n";
  }
  os << "end\n";
  return os.str();
}

using AnyGraph = std::variant<RegularGraph, BipartiteGraph>;

inline AnyGraph deserialize(std::string_view text) {
  detail::LineReader rd(text);
  if (rd.expect() != "unx-graph v1")
    throw ParseError(rd.line(), "expected header 'unx-graph v1'");
  std::string kind_line = rd.expect();
  auto read_kv = [&](std::string_view line, std::string_view key) {
    auto toks = detail::split_ws(line);
    if (toks.size() != 2 || toks[0] != key)
      throw ParseError(rd.line(), "expected '" + std::string(key) + " <value>'");
    return detail::parse_u32(toks[1], rd.line());
  };

  if (kind_line == "kind graph") {
    std::uint32_t n = read_kv(rd.expect(), "n");
    std::string line = rd.expect();
    std::optional<std::uint32_t> deg;
    if (line.starts_with("regular ")) {
      deg = read_kv(line, "regular");
      line = rd.expect();
    }
    std::uint32_t m = read_kv(line, "edges");
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < m; ++i) {
      auto toks = detail::split_ws(rd.expect());
      if (toks.size() != 3)
        throw ParseError(rd.line(), "expected '<u> <v> <mult>'");
      std::uint32_t u = detail::parse_u32(toks[0], rd.line());
      std::uint32_t v = detail::parse_u32(toks[1], rd.line());
      std::uint32_t t = detail::parse_u32(toks[2], rd.line());
      if (u >= n || v >= n)
        throw ParseError(rd.line(), "edge endpoint out of range");
      if (u > v) throw ParseError(rd.line(), "edges must satisfy u <= v");
      if (t == 0) throw ParseError(rd.line(), "zero multiplicity");
      edges.emplace_back(u, v, t);
    }
    if (rd.expect() != "end") throw ParseError(rd.line(), "expected 'end'");
    try {
      return RegularGraph::from_edges(n, edges, deg);
    } catch (const Error& e) {
      throw ParseError(rd.line(), e.what());
    }
  }

  if (kind_line == "kind bipartite") {
    std::uint32_t nl = read_kv(rd.expect(), "nl");
    std::uint32_t nr = read_kv(rd.expect(), "nr");
    std::uint32_t m = read_kv(rd.expect(), "edges");
    std::vector<BipartiteEdge> edges;
    for (std::uint32_t i = 0; i < m; ++i) {
      auto toks = detail::split_ws(rd.expect());
      if (toks.size() != 3)
        throw ParseError(rd.line(), "expected '<left> <right> <mult>'");
      BipartiteEdge e{detail::parse_u32(toks[0], rd.line()),
                      detail::parse_u32(toks[1], rd.line()),
                      detail::parse_u32(toks[2], rd.line())};
      if (e.left >= nl) throw ParseError(rd.line(), "left index out of range");
      if (e.right >= nr) throw ParseError(rd.line(), "right index out of range");
      if (e.mult == 0) throw ParseError(rd.line(), "zero multiplicity");
      edges.push_back(e);
    }
    std::string order_line = rd.expect();
    BipartiteGraph b = [&] {
      try {
        return BipartiteGraph(nl, nr, edges);
      } catch (const Error& e) {
        throw ParseError(rd.line(), e.what());
      }
    }();
    if (order_line == "right_order explicit") {
      for (std::uint32_t v = 0; v < nr; ++v) {
        auto toks = detail::split_ws(rd.expect());
        if (toks.empty() || toks[0] != std::to_string(v) + ":")
          throw ParseError(rd.line(),
                           "expected slot order line '" + std::to_string(v) + ": ...'");
        std::vector<std::uint32_t> order;
        for (std::size_t i = 1; i < toks.size(); ++i)
          order.push_back(detail::parse_u32(toks[i], rd.line()));
        try {
          b.override_order(v, std::move(order));
        } catch (const Error& e) {
          throw ParseError(rd.line(), e.what());
        }
      }
    } else if (order_line != "right_order canonical") {
      throw ParseError(rd.line(), "expected 'right_order canonical|explicit'");
    }
    if (rd.expect() != "end") throw ParseError(rd.line(), "expected 'end'");
    return b;
  }

  throw ParseError(rd.line(), "expected 'kind graph' or 'kind bipartite'");
}

inline RegularGraph deserialize_regular(std::string_view text) {
  auto g = deserialize(text);
  if (!std::holds_alternative<RegularGraph>(g))
    throw Error("expected kind graph, got bipartite");
  return std::get<RegularGraph>(std::move(g));
}

inline BipartiteGraph deserialize_bipartite(std::string_view text) {
  auto g = deserialize(text);
  if (!std::holds_alternative<BipartiteGraph>(g))
    throw Error("expected kind bipartite, got graph");
  return std::get<BipartiteGraph>(std::move(g));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path);
}

}  // namespace unx
