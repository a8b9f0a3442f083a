// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace patchsieve {

// Fisher-Yates with explicit modulo draws. std::shuffle delegates to a
// distribution whose output differs across standard libraries; this one
// produces the same permutation for the same seed everywhere.
template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen() % i);
        std::swap(v[i - 1], v[j]);
    }
}

// First `k` elements of a seeded shuffle; the rest of the vector is left in
// an unspecified but deterministic order.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> v, std::size_t k, std::mt19937_64& gen) {
    if (k > v.size()) k = v.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(gen() % (v.size() - i));
        std::swap(v[i], v[j]);
    }
    v.resize(k);
    return v;
}

}  // namespace patchsieve

namespace patchsieve {
namespace core = ::patchsieve;
}
