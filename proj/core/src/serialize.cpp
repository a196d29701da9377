#include "multitree/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace multitree {

std::string to_text(const GraphState& state) {
  std::ostringstream out;
  out << state.n() << ' ' << state.m() << ' ' << state.k() << '\n';
  for (NodeId u = 1; u <= state.n(); ++u)
    out << u << ' ' << state.cap(u) << '\n';
  // children lists are sorted, so iterating color -> parent -> child is
  // already canonical
  for (Color i = 1; i <= state.m(); ++i)
    for (NodeId u = 1; u <= state.n(); ++u)
      for (NodeId c : state.children(u, i))
        out << i << ' ' << u << ' ' << c << '\n';
  return out.str();
}

namespace {

// one whitespace-separated line of unsigned fields, exact count
std::vector<std::uint64_t> parse_fields(const std::string& line, std::size_t lineno,
                                        std::size_t want) {
  std::istringstream in(line);
  std::vector<std::uint64_t> out;
  std::uint64_t v;
  while (in >> v) out.push_back(v);
  std::string junk;
  if (!in.eof() && (in.clear(), in >> junk))
    throw ParseError(lineno, "unexpected token '" + junk + "'");
  if (out.size() != want)
    throw ParseError(lineno, "expected " + std::to_string(want) + " fields, got " +
                                 std::to_string(out.size()));
  return out;
}

}  // namespace

GraphState from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(1, "empty input");
  auto header = parse_fields(line, lineno, 3);
  std::uint64_t n = header[0], m = header[1], k = header[2];
  if (n < 1 || n > 10'000'000) throw ParseError(lineno, "bad node count");
  if (m < 1 || m > n) throw ParseError(lineno, "color count must be in [1, N]");
  if (k < 1 || k > m) throw ParseError(lineno, "cover requirement must be in [1, M]");

  std::vector<std::uint32_t> caps(n, 0);
  std::vector<char> seen(n, 0);
  for (std::uint64_t row = 0; row < n; ++row) {
    if (!next_line()) throw ParseError(lineno + 1, "missing node line");
    auto f = parse_fields(line, lineno, 2);
    if (f[0] < 1 || f[0] > n) throw ParseError(lineno, "node id out of range");
    if (seen[f[0] - 1]) throw ParseError(lineno, "duplicate node id");
    if (f[1] > std::numeric_limits<std::uint32_t>::max())
      throw ParseError(lineno, "cap out of range");
    seen[f[0] - 1] = 1;
    caps[f[0] - 1] = static_cast<std::uint32_t>(f[1]);
  }

  GraphState state(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m),
                   static_cast<std::uint32_t>(k), caps);
  while (next_line()) {
    auto f = parse_fields(line, lineno, 3);
    if (f[0] < 1 || f[0] > m) throw ParseError(lineno, "color out of range");
    if (f[1] < 1 || f[1] > n || f[2] < 1 || f[2] > n)
      throw ParseError(lineno, "node id out of range");
    try {
      state.build_link(static_cast<NodeId>(f[1]), static_cast<NodeId>(f[2]),
                       static_cast<Color>(f[0]));
    } catch (const std::logic_error& e) {
      // a link the state cannot hold is an input problem, not API misuse
      throw ParseError(lineno, e.what());
    }
  }

  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u)
      state.set_buffered_depth(u, i, depths[u - 1]);
  }
  return state;
}

void save_text(const GraphState& state, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << to_text(state);
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

GraphState load_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace multitree
