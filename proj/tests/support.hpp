#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "crystal/anisotropy.hpp"
#include "crystal/error.hpp"

// Code of the crystal::Error thrown by `fn`, or nullopt when it returns normally.
inline std::optional<crystal::ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const crystal::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::shared_ptr<const crystal::Anisotropy> shared_builtin(const char* name) {
  return std::make_shared<const crystal::Anisotropy>(crystal::Anisotropy::builtin(name));
}
