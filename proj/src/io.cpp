#include "svb/io.hpp"

#include <fstream>
#include <sstream>

namespace svb::io {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
}

std::vector<std::string> string_list(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& item : j) {
        if (!item.is_string()) throw ParseError(std::string(what) + " entries must be strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace

Circuit circuit_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("circuit file must be a JSON object");
    if (!j.contains("qubits")) throw ParseError("circuit file missing 'qubits'");
    auto qubits = string_list(j.at("qubits"), "'qubits'");
    std::vector<std::vector<Gate>> layers;
    if (j.contains("layers")) {
        if (!j.at("layers").is_array()) throw ParseError("'layers' must be an array");
        for (const auto& jl : j.at("layers")) {
            if (!jl.is_array()) throw ParseError("each layer must be an array of gates");
            std::vector<Gate> layer;
            for (const auto& jg : jl) {
                if (!jg.is_object() || !jg.contains("g") || !jg.contains("q"))
                    throw ParseError("gate entries need 'g' and 'q'");
                Gate g;
                g.name = jg.at("g").get<std::string>();
                g.qubits = string_list(jg.at("q"), "gate 'q'");
                if (jg.contains("p")) {
                    for (const auto& p : jg.at("p")) g.params.push_back(p.get<double>());
                }
                layer.push_back(std::move(g));
            }
            layers.push_back(std::move(layer));
        }
    }
    return Circuit(std::move(qubits), std::move(layers));
}

json circuit_to_json(const Circuit& c) {
    json j;
    j["qubits"] = c.qubits();
    json layers = json::array();
    for (const auto& layer : c.layers()) {
        json jl = json::array();
        for (const auto& g : layer) {
            json jg;
            jg["g"] = g.name;
            jg["q"] = g.qubits;
            if (!g.params.empty()) jg["p"] = g.params;
            jl.push_back(std::move(jg));
        }
        layers.push_back(std::move(jl));
    }
    j["layers"] = std::move(layers);
    return j;
}

Circuit parse_circuit(const std::string& text) { return circuit_from_json(parse_json(text)); }

std::string serialize_circuit(const Circuit& c) { return circuit_to_json(c).dump(2) + "\n"; }

DeviceModel device_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("device file must be a JSON object");
    auto qubits = string_list(j.at("qubits"), "'qubits'");
    std::vector<std::pair<std::string, std::string>> edges;
    if (j.contains("edges")) {
        for (const auto& je : j.at("edges")) {
            if (!je.is_array() || je.size() != 2) throw ParseError("edges must be [a,b] pairs");
            edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
        }
    }
    std::vector<NativeGate> native;
    if (j.contains("native")) {
        for (const auto& jn : j.at("native")) {
            NativeGate ng;
            ng.name = jn.at("g").get<std::string>();
            ng.arity = jn.at("arity").get<int>();
            native.push_back(std::move(ng));
        }
    }
    return DeviceModel(std::move(qubits), std::move(edges), std::move(native));
}

json device_to_json(const DeviceModel& dev) {
    json j;
    j["qubits"] = dev.qubits();
    json edges = json::array();
    for (const auto& [a, b] : dev.edges()) edges.push_back(json::array({a, b}));
    j["edges"] = std::move(edges);
    json native = json::array();
    for (const auto& ng : dev.native_gates()) native.push_back(json{{"g", ng.name}, {"arity", ng.arity}});
    j["native"] = std::move(native);
    return j;
}

DeviceModel parse_device(const std::string& text) { return device_from_json(parse_json(text)); }

std::string serialize_device(const DeviceModel& dev) { return device_to_json(dev).dump(2) + "\n"; }

Circuit load_circuit(const std::string& path) { return parse_circuit(read_text(path)); }

void save_circuit(const Circuit& c, const std::string& path) { write_text(path, serialize_circuit(c)); }

DeviceModel load_device(const std::string& path) { return parse_device(read_text(path)); }

}  // namespace svb::io
