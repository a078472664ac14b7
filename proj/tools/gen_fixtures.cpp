// Writes the benchmark-style QASM fixtures used by the tests: a trotterized
// transverse-field Ising chain, a layered neural-net ansatz, a Cuccaro
// ripple-carry adder and a phase-estimation circuit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "star/rng.hpp"

namespace {

constexpr int kIsingQubits = 10;
constexpr int kIsingSteps = 6;
constexpr int kDnnBlocks = 30;

// Deterministic generic angles in [0.15, 1.35]; far from 0, pi/2 and pi so
// every rotation runs the full protocol.
double generic_angle(std::uint64_t tag) {
  const std::uint64_t h = star::splitmix64(tag * 0x9e37u + 17);
  return 0.15 + 1.2 * (static_cast<double>(h >> 11) * 0x1.0p-53);
}

std::string fmt_angle(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", a);
  return buf;
}

std::string ising_chain(int n, int steps) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << n << "];\n";
  std::uint64_t tag = 1;
  for (int s = 0; s < steps; ++s) {
    os << "// trotter step " << s << "\n";
    for (int q = 0; q < n; ++q) {
      os << "rz(" << fmt_angle(generic_angle(tag++)) << ") q[" << q << "];\n";
      os << "rx(" << fmt_angle(generic_angle(tag++)) << ") q[" << q << "];\n";
      os << "rz(" << fmt_angle(generic_angle(tag++)) << ") q[" << q << "];\n";
    }
    for (int parity = 0; parity < 2; ++parity) {
      for (int i = parity; i + 1 < n; i += 2) {
        os << "cx q[" << i << "],q[" << i + 1 << "];\n";
        os << "rz(" << fmt_angle(generic_angle(tag++)) << ") q[" << i + 1 << "];\n";
        os << "cx q[" << i << "],q[" << i + 1 << "];\n";
      }
    }
  }
  return os.str();
}

std::string dnn_ansatz(int blocks) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[8];\n";
  std::uint64_t tag = 1000;
  for (int b = 0; b < blocks; ++b) {
    os << "// layer " << b << "\n";
    for (int q = 0; q < 8; ++q) {
      os << "rz(" << fmt_angle(generic_angle(tag++)) << ") q[" << q << "];\n";
      if (q == b % 8) {
        os << "rx(" << fmt_angle(generic_angle(tag++)) << ") q[" << q << "];\n";
      }
    }
    if (b % 2 == 0) {
      for (int i = 0; i < 8; i += 2) {
        os << "cx q[" << i << "],q[" << i + 1 << "];\n";
      }
    } else {
      for (int i = 1; i < 8; i += 2) {
        os << "cx q[" << i << "],q[" << (i + 1) % 8 << "];\n";
      }
    }
  }
  return os.str();
}

void emit_ccx(std::ostringstream& os, int a, int b, int c) {
  os << "h q[" << c << "];\n";
  os << "cx q[" << b << "],q[" << c << "];\n";
  os << "tdg q[" << c << "];\n";
  os << "cx q[" << a << "],q[" << c << "];\n";
  os << "t q[" << c << "];\n";
  os << "cx q[" << b << "],q[" << c << "];\n";
  os << "tdg q[" << c << "];\n";
  os << "cx q[" << a << "],q[" << c << "];\n";
  os << "t q[" << b << "];\n";
  os << "t q[" << c << "];\n";
  os << "h q[" << c << "];\n";
  os << "cx q[" << a << "],q[" << b << "];\n";
  os << "t q[" << a << "];\n";
  os << "tdg q[" << b << "];\n";
  os << "cx q[" << a << "],q[" << b << "];\n";
}

// Cuccaro ripple-carry adder: cin = q0, a = q1..q4, b = q5..q8, cout = q9.
std::string adder() {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[10];\n";
  os << "// a = 1011, b = 0110\n";
  for (int q : {1, 3, 4, 6, 7}) os << "x q[" << q << "];\n";
  auto majority = [&](int a, int b, int c) {
    os << "cx q[" << c << "],q[" << b << "];\n";
    os << "cx q[" << c << "],q[" << a << "];\n";
    emit_ccx(os, a, b, c);
  };
  auto unmaj = [&](int a, int b, int c) {
    emit_ccx(os, a, b, c);
    os << "cx q[" << c << "],q[" << a << "];\n";
    os << "cx q[" << a << "],q[" << b << "];\n";
  };
  majority(0, 5, 1);
  majority(1, 6, 2);
  majority(2, 7, 3);
  majority(3, 8, 4);
  os << "cx q[4],q[9];\n";
  unmaj(3, 8, 4);
  unmaj(2, 7, 3);
  unmaj(1, 6, 2);
  unmaj(0, 5, 1);
  return os.str();
}

// Phase estimation with 8 counting qubits and one eigenstate qubit.
std::string qpe() {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[9];\n";
  auto cu1 = [&](double lambda, int a, int b) {
    os << "rz(" << fmt_angle(lambda / 2) << ") q[" << a << "];\n";
    os << "cx q[" << a << "],q[" << b << "];\n";
    os << "rz(" << fmt_angle(-lambda / 2) << ") q[" << b << "];\n";
    os << "cx q[" << a << "],q[" << b << "];\n";
    os << "rz(" << fmt_angle(lambda / 2) << ") q[" << b << "];\n";
  };
  os << "x q[8];\n";
  for (int j = 0; j < 8; ++j) os << "h q[" << j << "];\n";
  // controlled powers of a phase rotation with phase 2*pi/3
  const double base = 2.0 * 3.14159265358979324 / 3.0;
  double lambda = base;
  for (int j = 0; j < 8; ++j) {
    cu1(lambda, j, 8);
    lambda = 2.0 * lambda;
    while (lambda > 3.14159265358979324) lambda -= 2.0 * 3.14159265358979324;
  }
  // inverse QFT on the counting register
  for (int i = 0; i < 4; ++i) {
    const int a = i;
    const int b = 7 - i;
    os << "cx q[" << a << "],q[" << b << "];\n";
    os << "cx q[" << b << "],q[" << a << "];\n";
    os << "cx q[" << a << "],q[" << b << "];\n";
  }
  for (int j = 0; j < 8; ++j) {
    for (int m = 0; m < j; ++m) {
      cu1(-3.14159265358979324 / static_cast<double>(1 << (j - m)), m, j);
    }
    os << "h q[" << j << "];\n";
  }
  return os.str();
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = "fixtures";
  int ising_n = 0, ising_steps = 0;
  std::string ising_out;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out-dir" && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (arg == "--ising" && i + 2 < argc) {
      ising_n = std::atoi(argv[++i]);
      ising_steps = std::atoi(argv[++i]);
    } else if (arg == "--out" && i + 1 < argc) {
      ising_out = argv[++i];
    } else {
      std::cerr << "usage: gen_fixtures [--out-dir DIR] | --ising N STEPS --out FILE\n";
      return 1;
    }
  }
  if (ising_n > 0) {
    const std::string text = ising_chain(ising_n, ising_steps);
    if (ising_out.empty()) {
      std::cout << text;
    } else {
      write(ising_out, text);
    }
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write(dir / "ising_n10.qasm", ising_chain(kIsingQubits, kIsingSteps));
  write(dir / "dnn_n8.qasm", dnn_ansatz(kDnnBlocks));
  write(dir / "adder_n10.qasm", adder());
  write(dir / "qpe_n9.qasm", qpe());
  return 0;
}
