#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "star/circuit.hpp"

namespace star {

namespace {

struct Statement {
  int line = 0;
  std::string text;
};

// Splits source into ';'-terminated statements, stripping // comments.
std::vector<Statement> split_statements(const std::string& text) {
  std::vector<Statement> out;
  std::string current;
  int line = 1;
  int start_line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      --i;
      continue;
    }
    if (c == '\n') {
      ++line;
      c = ' ';
    }
    if (c == ';') {
      out.push_back({start_line, current});
      current.clear();
      start_line = line;
      continue;
    }
    if (current.empty() && std::isspace(static_cast<unsigned char>(c))) {
      start_line = line;
      continue;
    }
    current.push_back(c);
  }
  // trailing non-';' content
  bool only_space = true;
  for (char c : current) {
    if (!std::isspace(static_cast<unsigned char>(c))) only_space = false;
  }
  if (!only_space) throw ParseError(start_line, "statement missing ';'");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

// expr := ['-'] factor (('*' | '/') factor)*, factor := number | 'pi'
double parse_angle_expr(const std::string& expr, int line) {
  std::string s = trim(expr);
  if (s.empty()) throw ParseError(line, "empty rotation angle");
  std::size_t pos = 0;
  double sign = 1.0;
  if (s[pos] == '-') {
    sign = -1.0;
    ++pos;
  } else if (s[pos] == '+') {
    ++pos;
  }
  auto read_factor = [&]() -> double {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (s.compare(pos, 2, "pi") == 0) {
      pos += 2;
      return kPi;
    }
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(line, "malformed angle expression '" + expr + "'");
    pos += static_cast<std::size_t>(end - begin);
    return v;
  };
  double value = read_factor();
  while (true) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) break;
    char op = s[pos];
    if (op != '*' && op != '/') {
      throw ParseError(line, "malformed angle expression '" + expr + "'");
    }
    ++pos;
    double rhs = read_factor();
    if (op == '*') {
      value *= rhs;
    } else {
      value /= rhs;
    }
  }
  return sign * value;
}

struct OperandParser {
  const std::string& reg_name;
  int reg_size;
  int line;

  int parse_one(const std::string& token) const {
    std::string t = trim(token);
    std::size_t lb = t.find('[');
    std::size_t rb = t.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
      throw ParseError(line, "expected qubit operand like q[i], got '" + t + "'");
    }
    std::string name = trim(t.substr(0, lb));
    if (name != reg_name) {
      throw ParseError(line, "unknown register '" + name + "'");
    }
    std::string idx = t.substr(lb + 1, rb - lb - 1);
    char* end = nullptr;
    long v = std::strtol(idx.c_str(), &end, 10);
    if (end == idx.c_str() || *end != '\0') {
      throw ParseError(line, "malformed qubit index '" + idx + "'");
    }
    if (v < 0 || v >= reg_size) {
      throw ParseError(line, "qubit index out of range: " + t);
    }
    return static_cast<int>(v);
  }

  std::vector<int> parse_list(const std::string& text) const {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) out.push_back(parse_one(token));
    return out;
  }
};

void append_named_gate(std::vector<Gate>& gates, const std::string& name, int q,
                       int line) {
  if (name == "h") {
    gates.push_back(Gate::rz(q, kPi / 2));
    gates.push_back(Gate::rx(q, kPi / 2));
    gates.push_back(Gate::rz(q, kPi / 2));
  } else if (name == "x") {
    gates.push_back(Gate::rx(q, kPi / 2));
    gates.push_back(Gate::rx(q, kPi / 2));
  } else if (name == "z") {
    gates.push_back(Gate::rz(q, kPi));
  } else if (name == "s") {
    gates.push_back(Gate::rz(q, kPi / 2));
  } else if (name == "sdg") {
    gates.push_back(Gate::rz(q, -kPi / 2));
  } else if (name == "t") {
    gates.push_back(Gate::rz(q, kPi / 4));
  } else if (name == "tdg") {
    gates.push_back(Gate::rz(q, -kPi / 4));
  } else {
    throw ParseError(line, "unknown gate '" + name + "'");
  }
}

}  // namespace

Circuit parse_qasm(const std::string& text, const std::string& source_name) {
  Circuit circuit;
  circuit.source_name = source_name;
  std::string reg_name;
  int reg_size = -1;

  for (const Statement& st : split_statements(text)) {
    std::string body = trim(st.text);
    if (body.empty()) continue;

    std::size_t ws = 0;
    while (ws < body.size() && !std::isspace(static_cast<unsigned char>(body[ws])) &&
           body[ws] != '(') {
      ++ws;
    }
    std::string head = body.substr(0, ws);
    std::string rest = trim(body.substr(ws));

    if (head == "OPENQASM" || head == "include" || head == "creg" ||
        head == "barrier" || head == "measure") {
      continue;
    }
    if (head == "qreg") {
      if (reg_size >= 0) throw ParseError(st.line, "multiple qubit registers");
      std::size_t lb = rest.find('[');
      std::size_t rb = rest.find(']');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
        throw ParseError(st.line, "malformed qreg declaration");
      }
      reg_name = trim(rest.substr(0, lb));
      char* end = nullptr;
      std::string n = rest.substr(lb + 1, rb - lb - 1);
      long v = std::strtol(n.c_str(), &end, 10);
      if (end == n.c_str() || *end != '\0' || v <= 0) {
        throw ParseError(st.line, "malformed register size '" + n + "'");
      }
      reg_size = static_cast<int>(v);
      circuit.n_qubits = reg_size;
      continue;
    }

    // gate application
    if (reg_size < 0) throw ParseError(st.line, "no qubit register declared");
    std::string params;
    std::string name = head;
    std::string operands = rest;
    std::size_t lp = body.find('(');
    if (lp != std::string::npos && lp <= ws) {
      std::size_t rp = body.find(')', lp);
      if (rp == std::string::npos) throw ParseError(st.line, "missing ')'");
      name = trim(body.substr(0, lp));
      params = body.substr(lp + 1, rp - lp - 1);
      operands = trim(body.substr(rp + 1));
    }

    OperandParser op{reg_name, reg_size, st.line};
    if (name == "cx") {
      std::vector<int> qs = op.parse_list(operands);
      if (qs.size() != 2) throw ParseError(st.line, "cx expects two operands");
      if (qs[0] == qs[1]) throw ParseError(st.line, "cx control equals target");
      circuit.gates.push_back(Gate::cnot(qs[0], qs[1]));
    } else if (name == "rz" || name == "rx") {
      std::vector<int> qs = op.parse_list(operands);
      if (qs.size() != 1) throw ParseError(st.line, name + " expects one operand");
      double angle = parse_angle_expr(params, st.line);
      circuit.gates.push_back(name == "rz" ? Gate::rz(qs[0], angle)
                                           : Gate::rx(qs[0], angle));
    } else {
      std::vector<int> qs = op.parse_list(operands);
      if (qs.size() != 1) {
        throw ParseError(st.line, name + " expects one operand");
      }
      append_named_gate(circuit.gates, name, qs[0], st.line);
    }
  }

  if (reg_size < 0 && !circuit.gates.empty()) {
    throw ParseError(1, "no qubit register declared");
  }
  if (reg_size < 0) circuit.n_qubits = 0;
  return circuit;
}

Circuit parse_qasm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base = path;
  std::size_t slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return parse_qasm(ss.str(), base);
}

}  // namespace star
