#pragma once

#include <functional>
#include <string>

#include "doctest.h"

// Runs `f` and returns the message of the exception of type E it throws, or
// "<no exception>".
template <class E>
std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return "<no exception>";
}

#define CHECK_THROWS_CONTAINING(E, expr, text) \
  CHECK_MESSAGE(message_of<E>([&] { (void)(expr); }).find(text) != std::string::npos, \
                "got: " << message_of<E>([&] { (void)(expr); }))
