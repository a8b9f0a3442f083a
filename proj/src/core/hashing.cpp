// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/core/hashing.hpp"

#include <openssl/evp.h>

#include <cstdio>

namespace patchsieve {

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof(buf), "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string content_id(std::initializer_list<std::string_view> parts) {
    std::string blob;
    for (const auto& p : parts) {
        blob += std::to_string(p.size());
        blob += ':';
        blob += p;
    }
    return sha256_hex(blob).substr(0, 32);
}

}  // namespace patchsieve
