#include "plq/error.hpp"

namespace plq {

const char* errc_name(errc code) {
  switch (code) {
    case errc::not_sorted: return "NotSorted";
    case errc::non_convex_piece: return "NonConvexPiece";
    case errc::slope_decreasing: return "SlopeDecreasing";
    case errc::discontinuous: return "Discontinuous";
    case errc::bad_infinity_convention: return "BadInfinityConvention";
    case errc::empty_input: return "EmptyInput";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::infinite_breakpoint: return "InfiniteBreakpoint";
    case errc::non_positive_epsilon: return "NonPositiveEpsilon";
    case errc::no_crossing: return "NoCrossing";
    case errc::no_root: return "NoRoot";
    case errc::root_outside_piece: return "RootOutsidePiece";
    case errc::unsorted_input: return "UnsortedInput";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace plq
