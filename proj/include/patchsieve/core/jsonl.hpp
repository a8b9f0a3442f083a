// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace patchsieve {

using json = nlohmann::ordered_json;

// Raised by readers on a malformed line or a schema violation; the message
// carries "<path>:<line>" and, for schema errors, the offending field.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::vector<json> read_jsonl(const std::string& path);
void for_each_jsonl(const std::string& path, const std::function<void(const json&, size_t line)>& fn);
void write_jsonl(const std::string& path, const std::vector<json>& records);

// Append-only writer used for checkpoints and decision logs; flushes per line.
class JsonlWriter {
  public:
    explicit JsonlWriter(const std::string& path, bool append = false);
    void write(const json& record);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
};

// Field accessors that raise SchemaError naming file, line and field. The
// `where` overloads take a preformatted location label ("path:line" or a
// stage name).
const json& require_field(const json& obj, const char* field, const std::string& path, size_t line);
std::string require_string(const json& obj, const char* field, const std::string& path, size_t line);
long long require_int(const json& obj, const char* field, const std::string& path, size_t line);
const json& require_field(const json& obj, const char* field, const std::string& where);
std::string require_string(const json& obj, const char* field, const std::string& where);
long long require_int(const json& obj, const char* field, const std::string& where);

}  // namespace patchsieve

// Core helpers live directly in patchsieve; `core` names the same namespace
// so call sites in submodules can qualify where it reads better.
namespace patchsieve {
namespace core = ::patchsieve;
}
