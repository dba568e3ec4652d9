#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "svb/io.hpp"
#include "svb/rng.hpp"

using namespace svb;

namespace {

DeviceModel line(int n) {
    std::vector<std::string> qubits;
    for (int i = 0; i < n; ++i) qubits.push_back("q" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(qubits[i], qubits[i + 1]);
    return DeviceModel(qubits, edges, {{"rz", 1}, {"sx", 1}, {"cx", 2}});
}

}  // namespace

TEST_CASE("parse: empty layer list gives depth 0 with declared width") {
    const Circuit c = io::parse_circuit(R"({"qubits": ["a", "b"], "layers": []})");
    CHECK(c.width() == 2);
    CHECK(c.depth() == 0);
    CHECK(circuit_shape(c).quops == 0);
}

TEST_CASE("parse: one cx layer on two qubits") {
    const Circuit c = io::parse_circuit(R"({"qubits": ["q0","q1"], "layers": [[{"g":"cx","q":["q0","q1"]}]]})");
    CHECK(c.width() == 2);
    CHECK(c.depth() == 1);
    CHECK(c.layers()[0][0].name == "cx");
}

TEST_CASE("parse: idle qubit in a middle layer keeps the layer") {
    const char* text = R"({
      "qubits": ["q0", "q1"],
      "layers": [
        [{"g": "sx", "q": ["q0"]}, {"g": "sx", "q": ["q1"]}],
        [{"g": "rz", "q": ["q0"], "p": [0.25]}],
        [{"g": "cx", "q": ["q0", "q1"]}]
      ]
    })";
    const Circuit c = io::parse_circuit(text);
    CHECK(c.depth() == 3);
    CHECK(c.gate_at(1, 1) == nullptr);  // q1 idle in layer 1
    CHECK(c.gate_at(0, 1) != nullptr);
    const Circuit back = io::parse_circuit(io::serialize_circuit(c));
    CHECK(semantically_equal(c, back));
}

TEST_CASE("parse errors carry position; structural errors name the problem") {
    CHECK_THROWS_AS(io::parse_circuit("{\"qubits\": [\"a\""), ParseError);
    // duplicate qubit within one layer
    CHECK_THROWS_AS(
        io::parse_circuit(
            R"({"qubits":["a","b"],"layers":[[{"g":"sx","q":["a"]},{"g":"rz","q":["a"],"p":[0.1]}]]})"),
        StructuralError);
    // repeated qubit inside one gate
    CHECK_THROWS_AS(io::parse_circuit(R"({"qubits":["a","b"],"layers":[[{"g":"cx","q":["a","a"]}]]})"),
                    StructuralError);
    // wrong arity for a known name
    CHECK_THROWS_AS(io::parse_circuit(R"({"qubits":["a","b"],"layers":[[{"g":"cx","q":["a"]}]]})"),
                    StructuralError);
    // undeclared qubit
    CHECK_THROWS_AS(io::parse_circuit(R"({"qubits":["a"],"layers":[[{"g":"sx","q":["z"]}]]})"),
                    StructuralError);
}

TEST_CASE("round-trip property over random circuits") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto rc = testing::random_native_circuit(1 + seed % 5, 1 + (seed * 7) % 9, seed);
        const Circuit back = io::parse_circuit(io::serialize_circuit(rc.circuit));
        CHECK(semantically_equal(rc.circuit, back));
    }
}

TEST_CASE("validate_compiled flags uncoupled pairs and non-native gates") {
    const DeviceModel dev = line(3);
    {
        const Circuit c({"q0", "q1", "q2"}, {{Gate("cx", {"q0", "q2"})}});
        const auto rep = validate_compiled(c, dev);
        CHECK_FALSE(rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].reason.find("uncoupled") != std::string::npos);
        CHECK(rep.violations[0].layer == 0);
    }
    {
        const Circuit c({"q0", "q1", "q2"}, {{Gate("mcx", {"q0", "q1", "q2"})}});
        const auto rep = validate_compiled(c, dev);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violations[0].reason.find("non-native") != std::string::npos);
    }
    {
        // unknown names are representable in the IR; the validator flags them
        const Circuit c({"q0", "q1", "q2"}, {{Gate("toffoli", {"q0", "q1", "q2"})}});
        const auto rep = validate_compiled(c, dev);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violations[0].reason.find("non-native") != std::string::npos);
    }
    {
        const Circuit c({"q0", "q1"},
                        {{Gate("cx", {"q0", "q1"})}, {Gate("rz", {"q0"}, {0.3}), Gate("sx", {"q1"})}});
        const auto rep = validate_compiled(c, dev);
        CHECK(rep.ok);
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("validate_compiled is monotone under native gate insertion") {
    const DeviceModel dev = line(4);
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const auto rc = testing::random_native_circuit(4, 4, 100 + rep);
        auto layers = rc.circuit.layers();
        // append a native connectivity-respecting gate in a fresh layer
        layers.push_back({Gate("cx", {"q1", "q2"})});
        const Circuit grown(rc.circuit.qubits(), layers);
        CHECK(validate_compiled(rc.circuit, dev).ok);
        CHECK(validate_compiled(grown, dev).ok);
    }
}

TEST_CASE("circuit_shape counts quops as width x depth") {
    // block-encoding-scale register sizes: 11x1277 and 21x12090
    std::vector<std::string> qubits;
    for (int i = 0; i < 11; ++i) qubits.push_back("q" + std::to_string(i));
    const Circuit h2(qubits, std::vector<std::vector<Gate>>(1277));
    const auto s = circuit_shape(h2);
    CHECK(s.width == 11);
    CHECK(s.depth == 1277);
    CHECK(s.quops == 14047);

    std::vector<std::string> lih_qubits;
    for (int i = 0; i < 21; ++i) lih_qubits.push_back("q" + std::to_string(i));
    const Circuit lih(lih_qubits, std::vector<std::vector<Gate>>(12090));
    CHECK(circuit_shape(lih).quops == 253890);

    CHECK(circuit_shape(Circuit({}, {})).quops == 0);
    CHECK(circuit_shape(Circuit({"a"}, {})).quops == 0);
}

TEST_CASE("quops property: width*depth for random circuits") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto rc = testing::random_native_circuit(2 + seed % 4, 1 + seed % 6, seed ^ 0xabc);
        const auto s = circuit_shape(rc.circuit);
        CHECK(s.quops == static_cast<long long>(s.width) * s.depth);
    }
}

TEST_CASE("gate names are case-insensitive") {
    const Circuit c = io::parse_circuit(R"({"qubits":["a","b"],"layers":[[{"g":"CX","q":["a","b"]}]]})");
    CHECK(c.layers()[0][0].name == "cx");
    const DeviceModel dev({"a", "b"}, {{"a", "b"}}, {{"CX", 2}});
    CHECK(validate_compiled(c, dev).ok);
}

TEST_CASE("device model rejects malformed graphs") {
    CHECK_THROWS_AS(DeviceModel({"a"}, {{"a", "a"}}, {}), StructuralError);
    CHECK_THROWS_AS(DeviceModel({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {}), StructuralError);
    CHECK_THROWS_AS(DeviceModel({"a"}, {{"a", "z"}}, {}), StructuralError);
}

TEST_CASE("adjoint inverts the generator vocabulary") {
    const Circuit c({"a", "b"},
                    {{Gate("ry", {"a"}, {0.7})}, {Gate("cx", {"a", "b"})}, {Gate("s", {"b"})}});
    const Circuit adj = adjoint(c);
    CHECK(adj.layers()[0][0].name == "sdg");
    CHECK(adj.layers()[2][0].name == "ry");
    CHECK(adj.layers()[2][0].params[0] == doctest::Approx(-0.7));
}
