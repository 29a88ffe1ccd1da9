/*!
  \file cli.hpp
  \brief Command-line driver
*/

#pragma once

#include <iosfwd>

namespace mch
{

/*! \brief Exit status of `cli_run`. */
enum cli_exit : int
{
  exit_ok = 0,
  /*! \brief Networks differ, or a pipeline failed its equivalence check or ran into an error. */
  exit_failure = 1,
  /*! \brief Bad arguments, unreadable or malformed files. */
  exit_usage = 2,
  /*! \brief `cec` found no difference by simulation, which is not a proof. */
  exit_unknown = 3
};

/*! \brief Runs one subcommand (`stats`, `convert`, `mch`, `map-lut`, `map-cell`, `graphmap`, `cec`, `bench`). */
int cli_run( int argc, char const* const* argv, std::ostream& out, std::ostream& err );

} // namespace mch
