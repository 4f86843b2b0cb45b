#pragma once

#include <string>
#include <vector>

namespace dlm {

/// Collects structured warnings from parsing and pipeline steps. Library
/// functions take an optional Diag*; the CLI flushes the collected items as
/// JSON lines on the diagnostic stream.
struct Diag {
    struct Item {
        std::string module;
        std::string event;
        std::string detail;
        long count = 1;
    };

    std::vector<Item> items;

    void warn(std::string module, std::string event, std::string detail, long count = 1) {
        items.push_back({std::move(module), std::move(event), std::move(detail), count});
    }
};

inline void warn(Diag* diag, const std::string& module, const std::string& event,
                 const std::string& detail, long count = 1) {
    if (diag) diag->warn(module, event, detail, count);
}

} // namespace dlm
