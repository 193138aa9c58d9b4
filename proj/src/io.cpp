#include "isingdc/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "isingdc/generate.hpp"

namespace isingdc {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_real(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  return parse_number(tok, out) && std::isfinite(out);
}

std::string fmt17(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void finish_write(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// Little-endian fixed-width encoding, independent of host order.
void put_u64(std::string& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

constexpr std::string_view kMagic = "ICSR1";

bool all_integral(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == std::nearbyint(x); });
}

}  // namespace

// ---------------------------------------------------------------------------
// Edge lists

EdgeListGraph parse_edgelist(std::string_view text) {
  EdgeListGraph g;
  bool have_header = false;
  std::size_t line_no = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '%' || toks[0].front() == '#') continue;
    if (!have_header) {
      if (toks.size() != 2 || !parse_number(toks[0], g.n) || !parse_number(toks[1], g.m)) {
        throw ParseError("expected header 'n m'", line_no);
      }
      if (g.n == 0) throw ParseError("graph must have at least one node", line_no);
      have_header = true;
      continue;
    }
    if (g.edges.size() == g.m) {
      throw ParseError("more edge lines than the " + std::to_string(g.m) + " declared",
                       line_no);
    }
    Edge e;
    if (toks.size() != 3 || !parse_number(toks[0], e.i) || !parse_number(toks[1], e.j) ||
        !parse_real(toks[2], e.w)) {
      throw ParseError("expected edge 'i j w'", line_no);
    }
    if (e.i < 1 || e.i > g.n || e.j < 1 || e.j > g.n) {
      throw ParseError("node index out of range 1.." + std::to_string(g.n), line_no);
    }
    if (e.i == e.j) throw ParseError("self loop on node " + std::to_string(e.i), line_no);
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
      throw ParseError("duplicate edge " + std::to_string(e.i) + "-" + std::to_string(e.j),
                       line_no);
    }
    if (e.w != std::nearbyint(e.w)) g.integer_weights = false;
    g.edges.push_back(e);
  }
  if (!have_header) throw ParseError("missing header 'n m'");
  if (g.edges.size() != g.m) {
    throw ParseError("expected " + std::to_string(g.m) + " edges, found " +
                     std::to_string(g.edges.size()));
  }
  return g;
}

EdgeListGraph read_edgelist(const std::filesystem::path& path) {
  return parse_edgelist(read_all(path));
}

void write_edgelist(std::ostream& out, const EdgeListGraph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) out << e.i << ' ' << e.j << ' ' << fmt17(e.w) << '\n';
}

ProblemInstance graph_to_instance(const EdgeListGraph& g, std::string name) {
  if (g.edges.size() != g.m) throw std::invalid_argument("graph: m disagrees with edge count");
  std::vector<std::vector<std::pair<std::uint64_t, double>>> rows(g.n);
  double total = 0.0;
  for (const auto& e : g.edges) {
    if (e.i < 1 || e.i > g.n || e.j < 1 || e.j > g.n || e.i == e.j) {
      throw std::invalid_argument("graph: invalid edge");
    }
    rows[e.i - 1].emplace_back(e.j - 1, e.w);
    rows[e.j - 1].emplace_back(e.i - 1, e.w);
    total += e.w;
  }
  CsrData w;
  w.n = g.n;
  w.row_offsets.push_back(0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    for (const auto& [c, v] : r) {
      w.column_indices.push_back(c);
      w.values.push_back(v);
    }
    w.row_offsets.push_back(w.values.size());
  }
  const auto kind = g.integer_weights ? ValueKind::integer : ValueKind::real;
  ProblemInstance inst{maxcut_to_ising(CouplingMatrix::csr(std::move(w), kind)),
                       std::nullopt, std::move(name), std::nullopt, 0.5 * total};
  return inst;
}

EdgeListGraph instance_to_graph(const ProblemInstance& instance) {
  if (instance.field) throw std::invalid_argument("graph export: instance has a field");
  const CsrData c = to_csr(instance.coupling);
  EdgeListGraph g;
  g.n = c.n;
  for (std::size_t i = 0; i < c.n; ++i) {
    for (auto k = c.row_offsets[i]; k < c.row_offsets[i + 1]; ++k) {
      const auto j = c.column_indices[k];
      if (j <= i || c.values[k] == 0.0) continue;
      const double w = -2.0 * c.values[k];
      if (w != std::nearbyint(w)) g.integer_weights = false;
      g.edges.push_back({i + 1, j + 1, w});
    }
  }
  g.m = g.edges.size();
  return g;
}

// ---------------------------------------------------------------------------
// Traces

TraceFormat trace_format_from_string(const std::string& name) {
  if (name == "csv") return TraceFormat::csv;
  if (name == "jsonl") return TraceFormat::jsonl;
  throw std::invalid_argument("unknown trace format '" + name + "' (csv or jsonl)");
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records,
                 TraceFormat format) {
  if (format == TraceFormat::csv) {
    out << kTraceHeader << '\n';
    for (const auto& r : records) {
      if (r.event && r.event->find_first_of(",\"\r\n") != std::string::npos) {
        throw std::invalid_argument("trace event tags may not contain separators");
      }
      out << r.iter << ',' << fmt17(r.elapsed_s) << ',' << fmt17(r.energy) << ','
          << fmt17(r.best_energy) << ',' << (r.cut_value ? fmt17(*r.cut_value) : "") << ','
          << r.event.value_or("") << '\n';
    }
    return;
  }
  for (const auto& r : records) {
    json j = {{"iter", r.iter},
              {"elapsed_s", r.elapsed_s},
              {"energy", r.energy},
              {"best_energy", r.best_energy}};
    if (r.cut_value) j["cut_value"] = *r.cut_value;
    if (r.event) j["event"] = *r.event;
    out << j.dump() << '\n';
  }
}

std::vector<TraceRecord> read_trace(std::istream& in, TraceFormat format) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  if (format == TraceFormat::csv) {
    if (!std::getline(in, line)) throw ParseError("empty trace: missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader) throw ParseError("unexpected trace header", 1);
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string_view> f;
      std::string_view rest = line;
      for (;;) {
        const auto c = rest.find(',');
        f.push_back(rest.substr(0, c));
        if (c == std::string_view::npos) break;
        rest.remove_prefix(c + 1);
      }
      if (f.size() != 6) throw ParseError("expected 6 columns", line_no);
      TraceRecord r;
      if (!parse_number(f[0], r.iter) || !parse_number(f[1], r.elapsed_s) ||
          !parse_number(f[2], r.energy) || !parse_number(f[3], r.best_energy)) {
        throw ParseError("malformed trace row", line_no);
      }
      if (!f[4].empty()) {
        double cut = 0.0;
        if (!parse_number(f[4], cut)) throw ParseError("malformed cut_value", line_no);
        r.cut_value = cut;
      }
      if (!f[5].empty()) r.event = std::string(f[5]);
      out.push_back(std::move(r));
    }
    return out;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TraceRecord r;
      r.iter = j.at("iter").get<std::int64_t>();
      r.elapsed_s = j.at("elapsed_s").get<double>();
      r.energy = j.at("energy").get<double>();
      r.best_energy = j.at("best_energy").get<double>();
      if (j.contains("cut_value") && !j["cut_value"].is_null()) {
        r.cut_value = j["cut_value"].get<double>();
      }
      if (j.contains("event") && !j["event"].is_null()) r.event = j["event"].get<std::string>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed trace record: ") + e.what(), line_no);
    }
  }
  return out;
}

void write_trace_file(const std::filesystem::path& path,
                      const std::vector<TraceRecord>& records, TraceFormat format) {
  auto out = open_out(path);
  write_trace(out, records, format);
  finish_write(out, path);
}

std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path,
                                         TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_trace(in, format);
}

// ---------------------------------------------------------------------------
// CSR container

CsrData to_csr(const CouplingMatrix& J) {
  if (const auto* c = J.as_csr()) return *c;
  const auto* d = J.as_dense();
  if (!d) throw std::invalid_argument("CSR export needs dense or CSR couplings");
  const std::size_t n = J.size();
  CsrData out;
  out.n = n;
  out.row_offsets.reserve(n + 1);
  out.row_offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d->values[i * n + j];
      if (v != 0.0) {
        out.column_indices.push_back(j);
        out.values.push_back(v);
      }
    }
    out.row_offsets.push_back(out.values.size());
  }
  return out;
}

void csr_save(std::ostream& out, const CouplingMatrix& J) {
  const CsrData c = to_csr(J);
  std::string buf(kMagic);
  buf.reserve(kMagic.size() + 16 + 8 * (c.row_offsets.size() + 2 * c.nnz()));
  put_u64(buf, c.n);
  put_u64(buf, c.nnz());
  for (auto v : c.row_offsets) put_u64(buf, v);
  for (auto v : c.column_indices) put_u64(buf, v);
  for (double v : c.values) put_u64(buf, std::bit_cast<std::uint64_t>(v));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("csr_save: write failed");
}

CouplingMatrix csr_load(std::istream& in) {
  const std::string buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const std::size_t head = kMagic.size() + 16;
  if (buf.size() < kMagic.size() || std::string_view(buf).substr(0, kMagic.size()) != kMagic) {
    throw ParseError("csr_load: bad magic (expected ICSR1)");
  }
  if (buf.size() < head) throw ParseError("csr_load: truncated header");
  const std::uint64_t n = get_u64(p + kMagic.size());
  const std::uint64_t nnz = get_u64(p + kMagic.size() + 8);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 32;
  if (n >= limit || nnz >= limit) throw ParseError("csr_load: implausible sizes");
  const std::uint64_t expected = head + 8 * (n + 1) + 16 * nnz;
  if (buf.size() < expected) {
    throw ParseError("csr_load: truncated (" + std::to_string(buf.size()) + " of " +
                     std::to_string(expected) + " bytes)");
  }
  if (buf.size() > expected) throw ParseError("csr_load: trailing bytes after payload");
  CsrData c;
  c.n = n;
  c.row_offsets.resize(n + 1);
  c.column_indices.resize(nnz);
  c.values.resize(nnz);
  std::size_t off = head;
  for (auto& v : c.row_offsets) v = get_u64(p + off), off += 8;
  for (auto& v : c.column_indices) v = get_u64(p + off), off += 8;
  for (auto& v : c.values) v = std::bit_cast<double>(get_u64(p + off)), off += 8;
  const auto kind = all_integral(c.values) ? ValueKind::integer : ValueKind::real;
  try {
    return CouplingMatrix::csr(std::move(c), kind);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("csr_load: ") + e.what());
  }
}

void csr_save_file(const std::filesystem::path& path, const CouplingMatrix& J) {
  auto out = open_out(path, true);
  csr_save(out, J);
  finish_write(out, path);
}

CouplingMatrix csr_load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return csr_load(in);
}

// ---------------------------------------------------------------------------
// Instance files

namespace {

ProblemInstance instance_from_json(const json& j, const std::filesystem::path& base) {
  const int sources = static_cast<int>(j.contains("dense")) +
                      static_cast<int>(j.contains("csr_file")) +
                      static_cast<int>(j.contains("generator"));
  if (sources != 1) {
    throw ParseError("instance descriptor needs exactly one of dense, csr_file, generator");
  }
  std::optional<CouplingMatrix> J;
  if (j.contains("dense")) {
    const auto rows = j["dense"].get<std::vector<std::vector<double>>>();
    const std::size_t n = rows.size();
    std::vector<double> v;
    v.reserve(n * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw ParseError("dense couplings must be square");
      v.insert(v.end(), r.begin(), r.end());
    }
    const auto kind = all_integral(v) ? ValueKind::integer : ValueKind::real;
    J = CouplingMatrix::dense(n, std::move(v), kind);
  } else if (j.contains("csr_file")) {
    J = csr_load_file(base / j["csr_file"].get<std::string>());
  } else {
    const auto& g = j["generator"];
    GeneratorSpec spec;
    spec.kind = generator_kind_from_string(g.at("kind").get<std::string>());
    spec.n = g.at("n").get<std::size_t>();
    spec.seed = g.value("seed", std::uint64_t{0});
    spec.connectivity_pct = g.value("connectivity_pct", 1.0);
    J = generate(spec);
  }
  ProblemInstance inst{*J, std::nullopt, j.value("name", std::string{}), std::nullopt,
                       std::nullopt};
  if (j.contains("field")) inst.field = ExternalField(j["field"].get<std::vector<double>>());
  if (j.contains("best_known")) inst.best_known = j["best_known"].get<double>();
  if (j.contains("cut_offset")) inst.cut_offset = j["cut_offset"].get<double>();
  inst.validate();
  return inst;
}

}  // namespace

ProblemInstance load_instance(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".icsr") {
    return ProblemInstance{csr_load_file(path), std::nullopt, path.stem().string(),
                           std::nullopt, std::nullopt};
  }
  if (ext == ".json") {
    json j;
    try {
      j = json::parse(read_all(path));
    } catch (const json::exception& e) {
      throw ParseError("instance descriptor: " + std::string(e.what()));
    }
    try {
      auto inst = instance_from_json(j, path.parent_path());
      if (inst.name.empty()) inst.name = path.stem().string();
      return inst;
    } catch (const json::exception& e) {
      throw ParseError("instance descriptor: " + std::string(e.what()));
    }
  }
  return graph_to_instance(read_edgelist(path), path.stem().string());
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& instance) {
  instance.validate();
  const auto ext = path.extension().string();
  if (ext == ".icsr") {
    if (instance.field) throw std::invalid_argument(".icsr cannot hold a field; use .json");
    csr_save_file(path, instance.coupling);
    return;
  }
  if (ext == ".json") {
    json j;
    if (!instance.name.empty()) j["name"] = instance.name;
    const auto& J = instance.coupling;
    if (const auto* p = J.as_procedural()) {
      if (p->rule.name != "sin") {
        throw std::invalid_argument("only the sin rule has a descriptor form");
      }
      j["generator"] = {{"kind", "procedural_sin"},
                        {"n", J.size()},
                        {"seed", static_cast<std::uint64_t>(p->rule.seed)}};
    } else if (J.as_dense() && J.size() <= 64) {
      std::vector<std::vector<double>> rows(J.size());
      for (std::size_t i = 0; i < J.size(); ++i) {
        for (std::size_t k = 0; k < J.size(); ++k) rows[i].push_back(J.entry(i, k));
      }
      j["dense"] = rows;
    } else {
      auto side = path;
      side.replace_extension(".icsr");
      csr_save_file(side, J);
      j["csr_file"] = side.filename().string();
    }
    if (instance.field) j["field"] = instance.field->h;
    if (instance.best_known) j["best_known"] = *instance.best_known;
    if (instance.cut_offset) j["cut_offset"] = *instance.cut_offset;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    finish_write(out, path);
    return;
  }
  auto out = open_out(path);
  write_edgelist(out, instance_to_graph(instance));
  finish_write(out, path);
}

}  // namespace isingdc
