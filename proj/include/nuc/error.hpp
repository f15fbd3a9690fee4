#pragma once

#include <stdexcept>
#include <string>

namespace nuc {

/// Invalid scheme or grid parameters, or an unsupported configuration.
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable input file.
class io_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File opened fine but its contents violate the format.
class format_error : public io_error {
  using io_error::io_error;
};

}  // namespace nuc
