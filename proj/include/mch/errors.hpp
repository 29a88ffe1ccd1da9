/*!
  \file errors.hpp
  \brief Exception types shared by the library and the command line
*/

#pragma once

#include <stdexcept>
#include <string>

namespace mch
{

/*! \brief Representation change that would drop gates the target cannot hold. */
struct unsupported_conversion : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Networks with mismatched PI/PO interfaces. */
struct interface_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Networks that were required to be equivalent are not. */
struct equivalence_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Leaf set passed as a cut does not separate the root from the PIs. */
struct invalid_cut : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

/*! \brief A cut function the cell library cannot implement. */
struct library_incomplete : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed input file; the message carries line or byte offset. */
struct parse_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

} // namespace mch
