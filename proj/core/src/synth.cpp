#include "qflake/synth.hpp"

#include <fstream>
#include <sstream>

#include "qflake/error.hpp"
#include "qflake/random.hpp"

namespace qflake {

namespace {

constexpr const char* kRepos[] = {"qiskit-terra", "cirq",     "pennylane",   "qiskit-aer",
                                  "pyquil",       "qutip",    "openfermion", "tket"};

constexpr const char* kSubjects[] = {
    "bell_state", "ghz",       "teleport",  "grover",     "qft",       "vqe",
    "qaoa",       "transpile", "layout",    "routing",    "pulse",     "schedule",
    "estimator",  "sampler",   "noise",     "readout",    "tomography", "unitary",
    "statevector", "density",  "operator",  "pauli",      "clifford",  "parameter",
    "optimizer",  "gradient",  "backend",   "job",        "register",  "measure",
    "barrier",    "swap",      "toffoli",   "phase",      "rotation",  "entangle"};

constexpr const char* kGates[] = {"h", "x", "y", "z", "cx", "cz", "rx", "ry", "rz", "swap", "ccx", "s", "t"};

constexpr const char* kExactAsserts[] = {"assertEqual", "assertTrue", "assertFalse", "assertIn",
                                         "assertIsInstance", "assertRaises", "assertListEqual"};

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&items)[N]) {
  return items[rng.below(N)];
}

bool chance(Rng& rng, double p) { return rng.uniform01() < p; }

std::string setup_block(Rng& rng, const std::string& cls) {
  std::ostringstream os;
  os << "    def setUp(self):\n";
  os << "        super().setUp()\n";
  os << "        self.num_qubits = " << 2 + rng.below(6) << "\n";
  os << "        self.circuit = QuantumCircuit(self.num_qubits)\n";
  if (chance(rng, 0.4)) os << "        self.backend = BasicAer.get_backend('qasm_simulator')\n";
  if (chance(rng, 0.3)) os << "        self.name = '" << cls << "'\n";
  return os.str();
}

void gate_lines(Rng& rng, std::ostringstream& os, int count) {
  for (int i = 0; i < count; ++i) {
    const char* g = pick(rng, kGates);
    os << "        circuit." << g << "(" << rng.below(4);
    if (g[0] == 'c' || std::string(g) == "swap") os << ", " << 4 + rng.below(3);
    os << ")\n";
  }
}

// Statements that tend to make a quantum test nondeterministic.
void flaky_statement(Rng& rng, std::ostringstream& os) {
  switch (rng.below(10)) {
    case 0:
      os << "        job = execute(circuit, backend, shots=" << (1 + rng.below(8)) * 256 << ")\n";
      os << "        counts = job.result().get_counts()\n";
      break;
    case 1:
      os << "        result = simulator.run(circuit, shots=" << (1 + rng.below(4)) * 512
         << ").result()\n";
      os << "        counts = result.get_counts(circuit)\n";
      break;
    case 2:
      os << "        self.assertAlmostEqual(counts['00'] / shots, 0.5, delta=0." << 1 + rng.below(5)
         << ")\n";
      break;
    case 3:
      os << "        value = np.random.rand()\n";
      break;
    case 4:
      os << "        time.sleep(0." << 1 + rng.below(9) << ")\n";
      break;
    case 5:
      os << "        params = np.random.uniform(0, 2 * np.pi, size=" << 2 + rng.below(6) << ")\n";
      break;
    case 6:
      os << "        expectation = estimate(circuit, observable, samples=" << 100 * (1 + rng.below(9))
         << ")\n";
      os << "        self.assertLess(abs(expectation - expected), tolerance)\n";
      break;
    case 7:
      os << "        noise_model = NoiseModel.from_backend(fake_backend)\n";
      break;
    case 8:
      os << "        for attempt in range(retries):\n";
      os << "            if job.status() == JobStatus.DONE:\n";
      os << "                break\n";
      break;
    default:
      os << "        probs = sampler.run(circuit, shots=shots).result().quasi_dists[0]\n";
      os << "        self.assertGreater(probs.get(0, 0), 0.4)\n";
      break;
  }
}

void exact_statement(Rng& rng, std::ostringstream& os, const char* subject) {
  switch (rng.below(7)) {
    case 0:
      os << "        expected = Statevector.from_label('" << (rng.below(2) ? "00" : "01") << "')\n";
      os << "        self.assertTrue(Statevector(circuit).equiv(expected))\n";
      break;
    case 1:
      os << "        op = Operator(circuit)\n";
      os << "        self.assertEqual(op.dim, (" << (1 << (1 + rng.below(3))) << ", "
         << (1 << (1 + rng.below(3))) << "))\n";
      break;
    case 2:
      os << "        self." << pick(rng, kExactAsserts) << "(circuit.num_qubits, "
         << 1 + rng.below(5) << ")\n";
      break;
    case 3:
      os << "        dag = circuit_to_dag(circuit)\n";
      os << "        self.assertEqual(len(dag.op_nodes()), " << rng.below(12) << ")\n";
      break;
    case 4:
      os << "        with self.assertRaises(" << (rng.below(2) ? "CircuitError" : "ValueError")
         << "):\n";
      os << "            circuit." << pick(rng, kGates) << "(" << 10 + rng.below(5) << ")\n";
      break;
    case 5:
      os << "        out = transpile(circuit, basis_gates=['u', 'cx'], optimization_level="
         << rng.below(4) << ")\n";
      os << "        self.assertEqual(out.count_ops().get('cx', 0), " << rng.below(6) << ")\n";
      break;
    default:
      os << "        self.assertEqual(" << subject << "_helper(circuit), " << subject
         << "_reference())\n";
      break;
  }
}

std::string make_file(Rng& rng, bool flaky, const char* subject, std::size_t index) {
  std::ostringstream os;
  os << "import unittest\n";
  if (chance(rng, 0.7)) os << "import numpy as np\n";
  if (flaky ? chance(rng, 0.5) : chance(rng, 0.08)) os << "import time\n";
  if (flaky ? chance(rng, 0.5) : chance(rng, 0.1)) os << "import random\n";
  os << "from qiskit import QuantumCircuit, transpile";
  if (flaky ? chance(rng, 0.8) : chance(rng, 0.3)) os << ", execute, BasicAer";
  os << "\n";
  if (chance(rng, 0.5)) os << "from qiskit.quantum_info import Operator, Statevector\n";
  if (chance(rng, 0.3)) os << "from qiskit.converters import circuit_to_dag\n";
  os << "\n\n";

  std::string cls = "Test";
  cls += subject;
  cls += std::to_string(index);
  os << "class " << cls << "(unittest.TestCase):\n";
  os << "    \"\"\"Tests for " << subject << ".\"\"\"\n\n";
  if (chance(rng, 0.6)) os << setup_block(rng, cls) << "\n";

  const int methods = 2 + static_cast<int>(rng.below(9));
  // Flaky files carry one or two nondeterministic tests among ordinary ones.
  const int noisy = flaky ? 1 + static_cast<int>(rng.below(2)) : 0;
  for (int m = 0; m < methods; ++m) {
    os << "    def test_" << subject << "_" << pick(rng, kSubjects) << "_" << m << "(self):\n";
    os << "        circuit = QuantumCircuit(" << 1 + rng.below(5) << ")\n";
    gate_lines(rng, os, 1 + static_cast<int>(rng.below(5)));
    const bool nondeterministic = m < noisy;
    const int statements = 1 + static_cast<int>(rng.below(3));
    for (int s = 0; s < statements; ++s) {
      if (nondeterministic && (s == 0 || chance(rng, 0.6))) flaky_statement(rng, os);
      else if (!flaky && chance(rng, 0.06)) flaky_statement(rng, os);
      else exact_statement(rng, os, subject);
    }
    os << "\n";
  }
  if (chance(rng, 0.5)) os << "\nif __name__ == '__main__':\n    unittest.main()\n";
  return os.str();
}

}  // namespace

std::vector<CorpusEntry> synthesize_corpus(const SynthOptions& options) {
  std::vector<CorpusEntry> out;
  for (Label label : {Label::Flaky, Label::NonFlaky}) {
    const bool flaky = label == Label::Flaky;
    const std::size_t n = flaky ? options.flaky : options.non_flaky;
    Rng rng(derive_seed(options.seed, flaky ? "synth-flaky" : "synth-nonflaky"));
    for (std::size_t i = 0; i < n; ++i) {
      const char* repo = pick(rng, kRepos);
      const char* subject = pick(rng, kSubjects);
      CorpusEntry e;
      e.label = label;
      e.repo = repo;
      e.id = std::string(to_string(label)) + "/" + repo + "/test_" + subject + "_" +
             std::to_string(i) + ".py";
      e.path = e.id;
      e.text = make_file(rng, flaky, subject, i);
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::filesystem::path write_synthetic_corpus(const std::filesystem::path& root,
                                             const SynthOptions& options) {
  std::vector<ManifestRecord> records;
  for (const auto& e : synthesize_corpus(options)) {
    const auto path = root / e.path;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << e.text;
    records.push_back({e.id, e.path.generic_string(), e.label, e.repo});
  }
  const auto manifest = root / "manifest.jsonl";
  write_manifest(records, manifest);
  return manifest;
}

}  // namespace qflake
