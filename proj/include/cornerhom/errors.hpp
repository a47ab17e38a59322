#pragma once

#include <stdexcept>
#include <string>

namespace cornerhom {

// Exit-code contract: input 2, budget 3, engine defect 4.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a computation cannot be certified within the configured
// windows/bounds (no stabilization, truncation too small, ...).
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal invariant violation (d^2 != 0, page mismatch, inconsistent ranks).
// Always a hard error; never downgraded.
struct engine_defect : std::logic_error {
    explicit engine_defect(const std::string& msg) : std::logic_error(msg) {}
};

inline void require_input(bool ok, const std::string& msg) {
    if (!ok) throw input_error(msg);
}

inline void require_engine(bool ok, const std::string& msg) {
    if (!ok) throw engine_defect(msg);
}

} // namespace cornerhom
