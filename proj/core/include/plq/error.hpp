#ifndef PLQ_ERROR_HPP
#define PLQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plq {

enum class errc {
  // validation
  not_sorted,
  non_convex_piece,
  slope_decreasing,
  discontinuous,
  bad_infinity_convention,
  empty_input,
  // queries
  out_of_domain,
  infinite_breakpoint,
  non_positive_epsilon,
  // search internals
  no_crossing,
  no_root,
  root_outside_piece,
  // input streams
  unsorted_input,
  parse_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace plq

#endif  // PLQ_ERROR_HPP
