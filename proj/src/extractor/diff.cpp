// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/extractor/diff.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

namespace patchsieve::extractor {

namespace {

constexpr int kEditDistanceCap = 1536;

// Interned line ids so comparisons are integer equality.
std::pair<std::vector<int>, std::vector<int>> intern(const std::vector<std::string>& a,
                                                     const std::vector<std::string>& b) {
    std::unordered_map<std::string, int> table;
    auto to_ids = [&table](const std::vector<std::string>& lines) {
        std::vector<int> ids;
        ids.reserve(lines.size());
        for (const auto& line : lines) {
            auto [it, inserted] = table.try_emplace(line, static_cast<int>(table.size()));
            ids.push_back(it->second);
        }
        return ids;
    };
    auto ia = to_ids(a);
    auto ib = to_ids(b);
    return {std::move(ia), std::move(ib)};
}

// Match pairs (i, j) between a[a0..a1) and b[b0..b1), or false when the edit
// distance cap was hit.
bool myers_matches(const std::vector<int>& a, size_t a0, size_t a1, const std::vector<int>& b,
                   size_t b0, size_t b1, std::vector<std::pair<size_t, size_t>>& matches) {
    const int n = static_cast<int>(a1 - a0);
    const int m = static_cast<int>(b1 - b0);
    const int max = n + m;
    if (max == 0) return true;

    const int offset = max + 1;
    std::vector<int> v(2 * max + 3, 0);
    v[offset + 1] = 0;

    // trace[d] holds V entering step d, i.e. the state after step d-1,
    // covering diagonals -(d-1)..(d-1).
    std::vector<std::vector<int>> trace;
    int distance = -1;
    for (int d = 0; d <= max && d <= kEditDistanceCap; ++d) {
        std::vector<int> window(std::max(2 * d - 1, 1));
        for (int k = -(d - 1); k <= d - 1; ++k) window[k + d - 1] = v[offset + k];
        trace.push_back(std::move(window));

        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
                x = v[offset + k + 1];
            else
                x = v[offset + k - 1] + 1;
            int y = x - k;
            while (x < n && y < m && a[a0 + x] == b[b0 + y]) ++x, ++y;
            v[offset + k] = x;
            if (x >= n && y >= m) {
                distance = d;
                break;
            }
        }
        if (distance >= 0) break;
    }
    if (distance < 0) return false;

    int x = n, y = m;
    for (int d = distance; d >= 1; --d) {
        const auto& vp = trace[static_cast<size_t>(d)];
        auto vp_at = [&](int k) { return vp[static_cast<size_t>(k + d - 1)]; };
        int k = x - y;
        bool down = (k == -d) || (k != d && vp_at(k - 1) < vp_at(k + 1));
        int prev_k = down ? k + 1 : k - 1;
        int prev_x = vp_at(prev_k);
        int prev_y = prev_x - prev_k;
        int move_x = down ? prev_x : prev_x + 1;
        int move_y = down ? prev_y + 1 : prev_y;
        while (x > move_x && y > move_y) {
            matches.emplace_back(a0 + x - 1, b0 + y - 1);
            --x;
            --y;
        }
        x = prev_x;
        y = prev_y;
    }
    while (x > 0 && y > 0) {
        matches.emplace_back(a0 + x - 1, b0 + y - 1);
        --x;
        --y;
    }
    return true;
}

}  // namespace

std::vector<DiffHunk> diff_lines(const std::vector<std::string>& before,
                                 const std::vector<std::string>& after) {
    auto [a, b] = intern(before, after);
    size_t a0 = 0, b0 = 0, a1 = a.size(), b1 = b.size();
    while (a0 < a1 && b0 < b1 && a[a0] == b[b0]) ++a0, ++b0;
    while (a1 > a0 && b1 > b0 && a[a1 - 1] == b[b1 - 1]) --a1, --b1;

    std::vector<std::pair<size_t, size_t>> matches;
    bool complete = myers_matches(a, a0, a1, b, b0, b1, matches);

    std::vector<DiffHunk> hunks;
    auto emit_gap = [&hunks](size_t from_a, size_t to_a, size_t from_b, size_t to_b) {
        if (from_a == to_a && from_b == to_b) return;
        DiffHunk h;
        h.before_count = to_a - from_a;
        h.after_count = to_b - from_b;
        h.before_start = h.before_count ? from_a + 1 : from_a;
        h.after_start = h.after_count ? from_b + 1 : from_b;
        hunks.push_back(h);
    };

    if (!complete) {
        emit_gap(a0, a1, b0, b1);
        return hunks;
    }

    // matches were collected back to front
    std::reverse(matches.begin(), matches.end());
    size_t ai = a0, bi = b0;
    for (auto [i, j] : matches) {
        emit_gap(ai, i, bi, j);
        ai = i + 1;
        bi = j + 1;
    }
    emit_gap(ai, a1, bi, b1);
    return hunks;
}

}  // namespace patchsieve::extractor
