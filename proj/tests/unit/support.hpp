#pragma once

#include "hypac/error.hpp"

#include <optional>

// Code of the hypac::Error thrown by fn, or nothing if it returned normally.
template <class Fn>
std::optional<hypac::ErrorCode> error_code_of(Fn&& fn) {
    try {
        fn();
    } catch (const hypac::Error& e) {
        return e.code();
    }
    return std::nullopt;
}
