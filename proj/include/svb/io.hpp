#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "svb/circuit.hpp"
#include "svb/common.hpp"

namespace svb::io {

using json = nlohmann::ordered_json;

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// FNV-1a 64-bit hex digest; used for provenance manifests.
std::string fnv1a64_hex(const std::string& data);

/// Circuit file grammar:
///   {"qubits": [labels], "layers": [[{"g": name, "q": [labels], "p": [angles]}, ...], ...]}
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);
Circuit circuit_from_json(const json& j);
json circuit_to_json(const Circuit& c);

/// Device file: {"qubits": [...], "edges": [[a,b],...], "native": [{"g": name, "arity": k},...]}
DeviceModel parse_device(const std::string& text);
std::string serialize_device(const DeviceModel& dev);
DeviceModel device_from_json(const json& j);
json device_to_json(const DeviceModel& dev);

Circuit load_circuit(const std::string& path);
void save_circuit(const Circuit& c, const std::string& path);
DeviceModel load_device(const std::string& path);

}  // namespace svb::io
