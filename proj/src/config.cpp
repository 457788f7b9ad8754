#include "hcn/config.hpp"

#include "hcn/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#ifndef HCN_MANIFOLD_DIR
#define HCN_MANIFOLD_DIR "manifolds"
#endif

namespace hcn {

namespace {

class Cursor {
public:
  Cursor(std::string_view text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string quoted() {
    expect('"');
    std::size_t end = s_.find('"', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }
  double number() {
    skip_ws();
    const std::string rest(s_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }
  int integer() {
    const double v = number();
    if (v != static_cast<int>(v)) fail("expected an integer");
    return static_cast<int>(v);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(msg, line_); }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

std::vector<std::vector<double>> parse_samples(Cursor& c) {
  std::vector<std::vector<double>> out;
  c.expect('[');
  if (c.peek(']')) {
    c.expect(']');
    return out;
  }
  while (true) {
    std::vector<double> point;
    c.expect('[');
    while (true) {
      point.push_back(c.number());
      if (c.peek(',')) {
        c.expect(',');
        continue;
      }
      c.expect(']');
      break;
    }
    out.push_back(std::move(point));
    if (c.peek(',')) {
      c.expect(',');
      continue;
    }
    c.expect(']');
    break;
  }
  return out;
}

} // namespace

ChartManifold parse_manifold_config(const std::string& text) {
  ChartManifold m;
  std::optional<ExprMatrix> g, J;
  std::vector<std::vector<bool>> g_set;

  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    std::string line = lines[li];
    Cursor c(line, line_no);
    if (c.at_end()) continue;
    const std::string key = c.word();

    if (key == "name") {
      c.expect('=');
      m.name = c.quoted();
    } else if (key == "dim") {
      c.expect('=');
      if (m.dim != 0) c.fail("dim given twice");
      m.dim = c.integer();
      if (m.dim < 1 || m.dim > 16) c.fail("dim must be between 1 and 16");
      g.emplace(m.dim);
      J.emplace(m.dim);
      for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) {
          (*g)(i, j) = Expr(0.0);
          (*J)(i, j) = Expr(0.0);
        }
      }
      g_set.assign(static_cast<std::size_t>(m.dim), std::vector<bool>(static_cast<std::size_t>(m.dim)));
    } else if (key == "g" || key == "J") {
      if (m.dim == 0) c.fail("dim must be declared before " + key);
      c.expect('[');
      const int i = c.integer();
      c.expect(']');
      c.expect('[');
      const int j = c.integer();
      c.expect(']');
      c.expect('=');
      const std::string src = c.quoted();
      if (i < 1 || i > m.dim || j < 1 || j > m.dim) c.fail("index out of range");
      Expr e;
      try {
        e = parse(src, m.dim);
      } catch (const ParseError& err) {
        c.fail("in expression \"" + src + "\": " + err.what());
      }
      if (key == "J") {
        (*J)(i - 1, j - 1) = e;
      } else {
        auto& set = g_set[static_cast<std::size_t>(i - 1)];
        if (set[static_cast<std::size_t>(j - 1)]) c.fail("g entry given twice");
        set[static_cast<std::size_t>(j - 1)] = true;
        (*g)(i - 1, j - 1) = e;
        if (!g_set[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)]) {
          (*g)(j - 1, i - 1) = e;
        }
      }
    } else if (key == "samples") {
      if (m.dim == 0) c.fail("dim must be declared before samples");
      c.expect('=');
      // Join continuation lines until brackets balance.
      std::string joined = line.substr(line.find('=') + 1);
      auto depth = [](const std::string& s) {
        int d = 0;
        for (char ch : s) {
          if (ch == '#') break;
          d += ch == '[' ? 1 : ch == ']' ? -1 : 0;
        }
        return d;
      };
      int total = depth(joined);
      while (total > 0 && li + 1 < lines.size()) {
        ++li;
        std::string next = lines[li];
        const auto hash = next.find('#');
        if (hash != std::string::npos) next.resize(hash);
        total += depth(next);
        joined += " " + next;
      }
      if (const auto hash = joined.find('#'); hash != std::string::npos) joined.resize(hash);
      Cursor sc(joined, line_no);
      m.samples = parse_samples(sc);
      if (!sc.at_end()) sc.fail("trailing characters after samples");
      for (const auto& pt : m.samples) {
        if (static_cast<int>(pt.size()) != m.dim) sc.fail("sample point has wrong length");
      }
      continue;
    } else {
      c.fail("unknown key '" + key + "'");
    }
    if (!c.at_end()) c.fail("trailing characters");
  }

  if (m.dim == 0) throw ConfigError("missing dim", 0);
  if (m.name.empty()) throw ConfigError("missing name", 0);
  m.g = std::move(*g);
  m.J = std::move(*J);
  return m;
}

ChartManifold load_manifold_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string(), 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifold_config(buf.str());
}

std::filesystem::path manifold_directory() {
  if (const char* env = std::getenv("HCN_MANIFOLD_DIR"); env && *env) return env;
  return HCN_MANIFOLD_DIR;
}

ChartManifold resolve_manifold(const std::string& name_or_path) {
  const std::filesystem::path direct(name_or_path);
  if (direct.has_extension() && std::filesystem::exists(direct)) return load_manifold_file(direct);
  const auto builtin = manifold_directory() / (name_or_path + ".conf");
  if (std::filesystem::exists(builtin)) return load_manifold_file(builtin);
  if (std::filesystem::exists(direct)) return load_manifold_file(direct);
  throw ConfigError("unknown manifold '" + name_or_path + "'", 0);
}

} // namespace hcn
