#pragma once

// File formats: rudy-style edge lists (G-set, Biq Mac), the ICSR1 binary
// CSR container, JSON instance descriptors and run traces (CSV / JSONL).

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isingdc/model.hpp"
#include "isingdc/trace.hpp"

namespace isingdc {

/// Thrown for malformed input; carries a 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  std::size_t i = 0;  // 1-based
  std::size_t j = 0;  // 1-based
  double w = 0.0;
  bool operator==(const Edge&) const = default;
};

struct EdgeListGraph {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Edge> edges;
  bool integer_weights = true;
};

/// Header "n m" then m lines "i j w". Blank lines and lines starting with
/// '%' or '#' are skipped. Self loops and repeated pairs are errors.
EdgeListGraph parse_edgelist(std::string_view text);
EdgeListGraph read_edgelist(const std::filesystem::path& path);
void write_edgelist(std::ostream& out, const EdgeListGraph& g);

/// W as CSR, J = -W/2, cut_offset = (sum of edge weights) / 2.
ProblemInstance graph_to_instance(const EdgeListGraph& g, std::string name = {});
/// Inverse of graph_to_instance on dense or CSR couplings: W = -2J, one edge
/// per nonzero upper-triangle entry.
EdgeListGraph instance_to_graph(const ProblemInstance& instance);

enum class TraceFormat { csv, jsonl };
TraceFormat trace_format_from_string(const std::string& name);

inline constexpr std::string_view kTraceHeader =
    "iter,elapsed_s,energy,best_energy,cut_value,event";

/// Reals are written with 17 significant digits; absent optionals are empty
/// (CSV) or omitted (JSONL).
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records,
                 TraceFormat format = TraceFormat::csv);
std::vector<TraceRecord> read_trace(std::istream& in, TraceFormat format = TraceFormat::csv);
void write_trace_file(const std::filesystem::path& path,
                      const std::vector<TraceRecord>& records, TraceFormat format);
std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path,
                                         TraceFormat format);

/// "ICSR1", then little-endian u64 n, u64 nnz, row_offsets, column_indices
/// (u64) and values (f64). Dense couplings are stored by their nonzeros.
void csr_save(std::ostream& out, const CouplingMatrix& J);
CouplingMatrix csr_load(std::istream& in);
void csr_save_file(const std::filesystem::path& path, const CouplingMatrix& J);
CouplingMatrix csr_load_file(const std::filesystem::path& path);
/// Dense or CSR input; procedural and bordered couplings are rejected.
CsrData to_csr(const CouplingMatrix& J);

/// Loads by extension: .icsr (binary CSR), .json (descriptor), anything else
/// is parsed as an edge list.
ProblemInstance load_instance(const std::filesystem::path& path);
/// .icsr (no field allowed) or .json; other extensions write an edge list.
void save_instance(const std::filesystem::path& path, const ProblemInstance& instance);

}  // namespace isingdc
