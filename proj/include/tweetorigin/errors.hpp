#pragma once

#include <stdexcept>

namespace tweetorigin {

// A remote plugin endpoint could not be reached or returned garbage.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reverse geocoding against an empty index.
struct NoCoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tweetorigin
