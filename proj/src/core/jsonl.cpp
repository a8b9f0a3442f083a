// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/core/jsonl.hpp"

#include <sstream>

namespace patchsieve {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<json> read_jsonl(const std::string& path) {
    std::vector<json> records;
    for_each_jsonl(path, [&](const json& j, size_t) { records.push_back(j); });
    return records;
}

void for_each_jsonl(const std::string& path, const std::function<void(const json&, size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
        }
        fn(j, lineno);
    }
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (const auto& r : records) out << r.dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

JsonlWriter::JsonlWriter(const std::string& path, bool append)
    : out_(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc)), path_(path) {
    if (!out_) throw std::runtime_error("cannot write file: " + path);
}

void JsonlWriter::write(const json& record) {
    out_ << record.dump() << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void JsonlWriter::close() {
    if (!out_.is_open()) return;
    out_.close();
    if (!out_) throw std::runtime_error("close failed: " + path_);
}

const json& require_field(const json& obj, const char* field, const std::string& path, size_t line) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw SchemaError(path + ":" + std::to_string(line) + ": missing field '" + field + "'");
    return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& path, size_t line) {
    const json& v = require_field(obj, field, path, line);
    if (!v.is_string())
        throw SchemaError(path + ":" + std::to_string(line) + ": field '" + field + "' must be a string");
    return v.get<std::string>();
}

long long require_int(const json& obj, const char* field, const std::string& path, size_t line) {
    const json& v = require_field(obj, field, path, line);
    if (!v.is_number_integer())
        throw SchemaError(path + ":" + std::to_string(line) + ": field '" + field + "' must be an integer");
    return v.get<long long>();
}

const json& require_field(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) throw SchemaError(where + ": missing field '" + field + "'");
    return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
    const json& v = require_field(obj, field, where);
    if (!v.is_string())
        throw SchemaError(where + ": field '" + field + "' must be a string");
    return v.get<std::string>();
}

long long require_int(const json& obj, const char* field, const std::string& where) {
    const json& v = require_field(obj, field, where);
    if (!v.is_number_integer())
        throw SchemaError(where + ": field '" + field + "' must be an integer");
    return v.get<long long>();
}

}  // namespace patchsieve
