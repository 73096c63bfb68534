#include "gsnav/errors.hpp"

namespace gsnav {

void throw_load_error_at(const std::string& what, std::size_t index) {
  throw LoadError(what + " at gaussian index " + std::to_string(index));
}

}  // namespace gsnav
