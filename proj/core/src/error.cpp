#include "rdwb/error.hpp"

#include <utility>

namespace rdwb {

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

}  // namespace rdwb
