#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "consensus/graph.hpp"

namespace consensus {

// Graph-sequence file format, one sequence per file:
//
//   n=<n> B=<B>
//   0: 0-1,2-3
//   1:
//   2: 1-2
//
// One line per time step; non-loop undirected edges as `i-j` with i < j,
// comma-separated, lexicographically sorted. Self-loops are implicit and
// always present; an empty edge list means all-isolated. The writer emits
// this canonical form byte-exactly. The reader additionally skips blank
// lines and `# ...` comments, which tools may prepend as metadata.

class SequenceParseError : public std::runtime_error {
 public:
  SequenceParseError(long line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

GraphSequence read_sequence(std::istream& in);
GraphSequence read_sequence_file(const std::string& path);

void write_sequence(std::ostream& out, const GraphSequence& seq);
void write_sequence_file(const std::string& path, const GraphSequence& seq);

}  // namespace consensus
