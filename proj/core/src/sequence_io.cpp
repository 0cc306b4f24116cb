#include "consensus/sequence_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace consensus {

namespace {

int parse_int(const std::string& tok, long line, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw SequenceParseError(line, "expected integer for " + what + ", got '" + tok + "'");
  }
  if (pos != tok.size())
    throw SequenceParseError(line, "trailing characters after " + what + " in '" + tok + "'");
  return v;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

GraphSequence read_sequence(std::istream& in) {
  std::string line;
  long lineno = 0;

  // Leading `# ...` metadata comments and blank lines are tolerated; the
  // canonical writer never emits them.
  do {
    if (!std::getline(in, line)) throw SequenceParseError(lineno + 1, "empty file, expected header");
    ++lineno;
    line = strip(line);
  } while (line.empty() || line[0] == '#');
  int n = 0, B = 0;
  {
    std::istringstream hs(line);
    std::string ntok, btok;
    if (!(hs >> ntok >> btok) || ntok.rfind("n=", 0) != 0 || btok.rfind("B=", 0) != 0)
      throw SequenceParseError(lineno, "malformed header, expected 'n=<n> B=<B>'");
    std::string rest;
    if (hs >> rest) throw SequenceParseError(lineno, "unexpected token '" + rest + "' in header");
    n = parse_int(ntok.substr(2), lineno, "n");
    B = parse_int(btok.substr(2), lineno, "B");
    if (n < 1) throw SequenceParseError(lineno, "node count must be positive");
    if (B < 1) throw SequenceParseError(lineno, "window B must be positive");
  }

  GraphSequence seq;
  seq.n = n;
  seq.B = B;

  long expected_t = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw SequenceParseError(lineno, "missing ':' after time step");
    long t = parse_int(strip(s.substr(0, colon)), lineno, "time step");
    if (t != expected_t)
      throw SequenceParseError(lineno, "time step " + std::to_string(t) +
                                           " out of order, expected " +
                                           std::to_string(expected_t));
    ++expected_t;

    Graph g(n);
    std::string edge_part = strip(s.substr(colon + 1));
    if (!edge_part.empty()) {
      std::istringstream es(edge_part);
      std::string tok;
      while (std::getline(es, tok, ',')) {
        tok = strip(tok);
        std::size_t dash = tok.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
          throw SequenceParseError(lineno, "malformed edge '" + tok + "'");
        int i = parse_int(tok.substr(0, dash), lineno, "edge endpoint");
        int j = parse_int(tok.substr(dash + 1), lineno, "edge endpoint");
        if (i < 0 || i >= n || j < 0 || j >= n)
          throw SequenceParseError(lineno, "edge endpoint out of range in '" + tok + "'");
        if (i == j)
          throw SequenceParseError(lineno, "explicit self-loop '" + tok +
                                               "' (self-loops are implicit)");
        if (g.has_edge(i, j))
          throw SequenceParseError(lineno, "duplicate edge '" + tok + "'");
        g.add_edge(i, j);
      }
    }
    seq.graphs.push_back(std::move(g));
  }
  return seq;
}

GraphSequence read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("no such sequence file: " + path);
  return read_sequence(in);
}

void write_sequence(std::ostream& out, const GraphSequence& seq) {
  out << "n=" << seq.n << " B=" << seq.B << "\n";
  for (long t = 0; t < seq.length(); ++t) {
    out << t << ":";
    const auto edges = seq.graphs[t].edges();  // sorted (i, j), i < j
    for (std::size_t k = 0; k < edges.size(); ++k) {
      out << (k == 0 ? " " : ",") << edges[k].first << "-" << edges[k].second;
    }
    out << "\n";
  }
}

void write_sequence_file(const std::string& path, const GraphSequence& seq) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_sequence(out, seq);
}

}  // namespace consensus
